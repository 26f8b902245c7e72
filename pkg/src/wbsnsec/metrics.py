"""Shannon entropy, compression accounting, and benchmark report rows."""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, fields

from .errors import EmptyInputError, FileFormatError


def shannon_entropy(data: bytes) -> float:
    """Byte entropy in bits per byte, 0 to 8."""
    if len(data) == 0:
        raise EmptyInputError("entropy of an empty byte sequence is undefined")
    total = len(data)
    return -sum(
        (count / total) * math.log2(count / total)
        for count in Counter(data).values()
    )


def compression_ratio(original_bytes: int, encoded_bytes: int) -> float:
    """original/encoded; below 1.0 means expansion, reported as-is."""
    if encoded_bytes <= 0:
        raise ZeroDivisionError(f"encoded byte count must be positive, got {encoded_bytes}")
    if original_bytes < 0:
        raise ValueError(f"original byte count must be >= 0, got {original_bytes}")
    return original_bytes / encoded_bytes


@dataclass(frozen=True)
class MetricsRow:
    """One benchmark result; ratio fields stay empty for non-codec rows."""

    algorithm_label: str
    image: str = ""
    bytes_original: int | None = None
    bytes_encoded: int | None = None
    execution_time: float | None = None
    compression_ratio: float | None = None
    compression_ratio_with_header: float | None = None
    payload_entropy: float | None = None
    ciphertext_entropy: float | None = None
    mod_multiplications: int | None = None
    table_lookups: int | None = None


_INT_FIELDS = {"bytes_original", "bytes_encoded", "mod_multiplications", "table_lookups"}
_FLOAT_FIELDS = {
    "execution_time",
    "compression_ratio",
    "compression_ratio_with_header",
    "payload_entropy",
    "ciphertext_entropy",
}
_FIELD_NAMES = tuple(f.name for f in fields(MetricsRow))


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows: list[MetricsRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_FIELD_NAMES)
    for row in rows:
        values = asdict(row)
        writer.writerow([_cell(values[name]) for name in _FIELD_NAMES])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[MetricsRow]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise FileFormatError("empty metrics CSV") from None
    if tuple(header) != _FIELD_NAMES:
        raise FileFormatError(f"unexpected metrics columns {header}")
    rows = []
    for record in reader:
        if not record:
            continue
        kwargs = {}
        for name, cell in zip(_FIELD_NAMES, record):
            if cell == "" and name not in ("algorithm_label", "image"):
                kwargs[name] = None
            elif name in _INT_FIELDS:
                kwargs[name] = int(cell)
            elif name in _FLOAT_FIELDS:
                kwargs[name] = float(cell)
            else:
                kwargs[name] = cell
        rows.append(MetricsRow(**kwargs))
    return rows


def rows_to_json(rows: list[MetricsRow]) -> str:
    return json.dumps([asdict(row) for row in rows], indent=2)


def rows_from_json(text: str) -> list[MetricsRow]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"bad metrics JSON: {exc}") from exc
    return [MetricsRow(**entry) for entry in payload]
