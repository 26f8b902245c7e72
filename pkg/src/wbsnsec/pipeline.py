"""Node-to-sink protocol: serialize, encrypt, authenticate; sink side inverts.

Payload layout (output of the codec, before encryption; integers big-endian):

  "NTIC" | ver 0x01 | k:2 | width:4 | height:4 | pad:2 | block_count:4
  | quotient table:  entry_count:4, then per entry len:2 + magnitude bytes
  | remainder table: same
  | quotient codes:  bit-width:1, packed MSB-first, zero-padded to a byte
  | remainder codes: same

Message container (on the wire):

  "WBSN" | ver 0x01 | key_id:4 | body_len:4 | encrypted body
  | sensor_id:2 | capture_timestamp_us:8 | signature_bit_len:4 | signature bytes

Authentication gates decryption: a sink never decrypts a body whose sensor
failed the HRV comparison. Code tables travel inside the encrypted body,
so they stay confidential. The leader and all key material never leave
the key bundle file.

Key bundle file: line-oriented text
  WBSN-KEY v1
  key_id=<hex32>
  k=<int>
  moduli=<comma-separated ints>
  qg_order=<int>
  qg_seed=<hex32>            (or qg_table=<row-major comma list>)
  leader=<int>
  mode=chain|block:<B>
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, replace
from typing import Sequence

from .crt_codec import (
    CrtKeySet,
    NticePayload,
    build_key,
    decode_image,
    encode_image,
    generate_moduli,
)
from .ecg import (
    AuthVerdict,
    EcgTrace,
    HrvSignature,
    authenticate,
    detect_r_peaks,
    hrv_from_peaks,
    synth_ecg,
    DEFAULT_THRESHOLD,
)
from .errors import (
    BadMagicError,
    BadVersionError,
    FileFormatError,
    InconsistentCountsError,
    TruncatedError,
    UnknownKeyIdError,
    UnsupportedOrderError,
    WbsnError,
)
from .imaging import ImageGrid, synth_image
from .metrics import shannon_entropy
from .quasigroup import (
    Quasigroup,
    decrypt_blocks,
    decrypt_chain,
    encrypt_blocks,
    encrypt_chain,
    generate_quasigroup,
)

INNER_MAGIC = b"NTIC"
OUTER_MAGIC = b"WBSN"
FORMAT_VERSION = 1
PAYLOAD_HEADER_LEN = 21  # magic + version + k + width + height + pad + block_count

SCENARIOS = ("same_subject", "intruder", "tamper")


# --- bit packing ---------------------------------------------------------------

def pack_bits(values: Sequence[int], width: int) -> bytes:
    """Pack fixed-width codes MSB-first, zero-padding the final byte."""
    if width == 0:
        return b""
    out = bytearray()
    acc = 0
    nbits = 0
    for v in values:
        acc = (acc << width) | v
        nbits += width
        while nbits >= 8:
            nbits -= 8
            out.append((acc >> nbits) & 0xFF)
            acc &= (1 << nbits) - 1
    if nbits:
        out.append((acc << (8 - nbits)) & 0xFF)
    return bytes(out)


def unpack_bits(data: bytes, width: int, count: int) -> tuple[int, ...]:
    """Inverse of pack_bits; rejects nonzero padding bits."""
    if width == 0:
        return (0,) * count
    mask = (1 << width) - 1
    out = []
    acc = 0
    nbits = 0
    for byte in data:
        acc = (acc << 8) | byte
        nbits += 8
        while nbits >= width and len(out) < count:
            nbits -= width
            out.append((acc >> nbits) & mask)
            acc &= (1 << nbits) - 1
    if len(out) != count:
        raise TruncatedError(f"code stream ended after {len(out)} of {count} codes")
    if acc:
        raise InconsistentCountsError("nonzero padding bits in code stream")
    return tuple(out)


def _bits_to_bytes(bits: str) -> bytes:
    return pack_bits([int(b) for b in bits], 1) if bits else b""


def _bytes_to_bits(data: bytes, bit_len: int) -> str:
    values = unpack_bits(data, 1, bit_len)
    return "".join("1" if v else "0" for v in values)


# --- payload serialization --------------------------------------------------------

class _Cursor:
    """Byte reader that turns overruns into TruncatedError."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedError(f"truncated while reading {what}")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u8(self, what: str) -> int:
        return self.take(1, what)[0]

    def uint(self, n: int, what: str) -> int:
        return int.from_bytes(self.take(n, what), "big")

    @property
    def remaining(self) -> int:
        return len(self.data) - self.pos


def serialize_payload(payload: NticePayload) -> bytes:
    """Bit-exact payload encoding; see the module docstring for the layout."""
    out = bytearray()
    out += INNER_MAGIC
    out.append(FORMAT_VERSION)
    out += payload.k.to_bytes(2, "big")
    out += payload.original_width.to_bytes(4, "big")
    out += payload.original_height.to_bytes(4, "big")
    out += payload.pad_length.to_bytes(2, "big")
    out += payload.block_count.to_bytes(4, "big")
    for table in (payload.tr_table, payload.tr_prime_table):
        out += len(table).to_bytes(4, "big")
        for value in table:
            magnitude = value.to_bytes((value.bit_length() + 7) // 8, "big")
            out += len(magnitude).to_bytes(2, "big")
            out += magnitude
    for table, codes in (
        (payload.tr_table, payload.tr_codes),
        (payload.tr_prime_table, payload.tr_prime_codes),
    ):
        width = (len(table) - 1).bit_length()
        out.append(width)
        out += pack_bits(codes, width)
    return bytes(out)


def _parse_table(cur: _Cursor, what: str) -> tuple[int, ...]:
    count = cur.uint(4, f"{what} table size")
    if count < 1:
        raise InconsistentCountsError(f"{what} table is empty")
    if count * 2 > cur.remaining:
        raise TruncatedError(f"{what} table larger than remaining bytes")
    entries = []
    for _ in range(count):
        length = cur.uint(2, f"{what} entry length")
        entries.append(int.from_bytes(cur.take(length, f"{what} entry"), "big"))
    return tuple(entries)


def _parse_codes(cur: _Cursor, table_size: int, count: int, what: str) -> tuple[int, ...]:
    width = cur.u8(f"{what} code width")
    if width != (table_size - 1).bit_length():
        raise InconsistentCountsError(
            f"{what} code width {width} does not match table size {table_size}"
        )
    stream = cur.take((width * count + 7) // 8, f"{what} code stream")
    codes = unpack_bits(stream, width, count)
    for code in codes:
        if code >= table_size:
            raise InconsistentCountsError(
                f"{what} code {code} exceeds table size {table_size}"
            )
    return codes


def parse_payload(data: bytes) -> NticePayload:
    """Exact inverse of serialize_payload with structural validation."""
    cur = _Cursor(data)
    if cur.take(4, "magic") != INNER_MAGIC:
        raise BadMagicError("payload magic mismatch (wrong key or corrupt data)")
    version = cur.u8("version")
    if version != FORMAT_VERSION:
        raise BadVersionError(f"unsupported payload version {version}")
    k = cur.uint(2, "block length")
    width = cur.uint(4, "width")
    height = cur.uint(4, "height")
    pad_length = cur.uint(2, "pad length")
    block_count = cur.uint(4, "block count")
    if k < 1 or width < 1 or height < 1 or block_count < 1:
        raise InconsistentCountsError("zero block length, dimension, or block count")
    if pad_length >= k:
        raise InconsistentCountsError(f"pad length {pad_length} not below k={k}")
    if block_count * k != width * height + pad_length:
        raise InconsistentCountsError("block count inconsistent with dimensions")
    tr_table = _parse_table(cur, "quotient")
    tr_prime_table = _parse_table(cur, "remainder")
    tr_codes = _parse_codes(cur, len(tr_table), block_count, "quotient")
    tr_prime_codes = _parse_codes(cur, len(tr_prime_table), block_count, "remainder")
    if cur.remaining:
        raise InconsistentCountsError(f"{cur.remaining} trailing bytes after payload")
    return NticePayload(
        k=k,
        block_count=block_count,
        original_width=width,
        original_height=height,
        pad_length=pad_length,
        tr_table=tr_table,
        tr_prime_table=tr_prime_table,
        tr_codes=tr_codes,
        tr_prime_codes=tr_prime_codes,
    )


# --- key bundles -------------------------------------------------------------------

@dataclass
class KeyBundle:
    """Everything a node/sink pair shares: codec key, cipher key, mode."""

    key_id: int
    crt: CrtKeySet
    qg: Quasigroup
    mode: str = "chain"          # "chain" or "block"
    block_len: int | None = None  # required in block mode
    qg_seed: int | None = None    # kept for key-file round trips

    def __post_init__(self):
        if not 0 <= self.key_id < (1 << 32):
            raise FileFormatError(f"key id {self.key_id} is not a 32-bit value")
        if self.mode not in ("chain", "block"):
            raise FileFormatError(f"mode must be chain or block, got {self.mode!r}")
        if self.mode == "block" and (self.block_len is None or self.block_len < 1):
            raise FileFormatError("block mode needs a positive block length")


def generate_key_bundle(seed: int, k: int = 4, order: int = 256,
                        mode: str = "chain", block_len: int | None = None) -> KeyBundle:
    """Derive a full bundle (codec moduli, cipher table, key id) from one seed."""
    rng = random.Random(seed)
    key_id = rng.getrandbits(32)
    crt = build_key(generate_moduli(k, rng.getrandbits(32)))
    qg_seed = rng.getrandbits(32)
    qg = generate_quasigroup(order, qg_seed)
    if mode == "block" and block_len is None:
        block_len = 64
    return KeyBundle(key_id=key_id, crt=crt, qg=qg, mode=mode,
                     block_len=block_len, qg_seed=qg_seed)


def write_key_bundle(bundle: KeyBundle, path) -> None:
    lines = ["WBSN-KEY v1"]
    lines.append(f"key_id={bundle.key_id:08x}")
    lines.append(f"k={bundle.crt.k}")
    lines.append("moduli=" + ",".join(str(n) for n in bundle.crt.moduli))
    lines.append(f"qg_order={bundle.qg.order}")
    if bundle.qg_seed is not None:
        lines.append(f"qg_seed={bundle.qg_seed:08x}")
    else:
        flat = ",".join(str(v) for row in bundle.qg.table for v in row)
        lines.append(f"qg_table={flat}")
    lines.append(f"leader={bundle.qg.leader}")
    mode = bundle.mode if bundle.mode == "chain" else f"block:{bundle.block_len}"
    lines.append(f"mode={mode}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_key_bundle(path) -> KeyBundle:
    with open(path, "r", encoding="ascii") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines or lines[0] != "WBSN-KEY v1":
        raise FileFormatError('key file must start with "WBSN-KEY v1"')
    entries = {}
    for line in lines[1:]:
        if "=" not in line:
            raise FileFormatError(f"bad key file line {line!r}")
        name, value = line.split("=", 1)
        if name in entries:
            raise FileFormatError(f"duplicate key file entry {name!r}")
        entries[name] = value

    def need(name: str) -> str:
        if name not in entries:
            raise FileFormatError(f"key file is missing {name!r}")
        return entries.pop(name)

    try:
        key_id = int(need("key_id"), 16)
        k = int(need("k"))
        moduli = [int(x) for x in need("moduli").split(",")]
        order = int(need("qg_order"))
        leader = int(need("leader"))
    except ValueError as exc:
        raise FileFormatError(f"bad key file value: {exc}") from exc
    if len(moduli) != k:
        raise FileFormatError(f"k={k} but {len(moduli)} moduli listed")

    qg_seed: int | None = None
    if "qg_seed" in entries and "qg_table" in entries:
        raise FileFormatError("key file has both qg_seed and qg_table")
    if "qg_seed" in entries:
        try:
            qg_seed = int(entries.pop("qg_seed"), 16)
        except ValueError as exc:
            raise FileFormatError(f"bad qg_seed: {exc}") from exc
        generated = generate_quasigroup(order, qg_seed)
        qg = Quasigroup(order=order, table=generated.table, leader=leader)
    elif "qg_table" in entries:
        try:
            flat = [int(x) for x in entries.pop("qg_table").split(",")]
        except ValueError as exc:
            raise FileFormatError(f"bad qg_table: {exc}") from exc
        if len(flat) != order * order:
            raise FileFormatError(
                f"qg_table has {len(flat)} entries, order {order} needs {order * order}"
            )
        table = tuple(tuple(flat[r * order : (r + 1) * order]) for r in range(order))
        qg = Quasigroup(order=order, table=table, leader=leader)
    else:
        raise FileFormatError("key file needs qg_seed or qg_table")

    mode_text = need("mode")
    if mode_text == "chain":
        mode, block_len = "chain", None
    elif mode_text.startswith("block:"):
        try:
            mode, block_len = "block", int(mode_text.split(":", 1)[1])
        except ValueError as exc:
            raise FileFormatError(f"bad block length in mode: {exc}") from exc
    else:
        raise FileFormatError(f"mode must be chain or block:<B>, got {mode_text!r}")
    if entries:
        raise FileFormatError(f"unknown key file entries {sorted(entries)}")
    return KeyBundle(key_id=key_id, crt=build_key(moduli), qg=qg, mode=mode,
                     block_len=block_len, qg_seed=qg_seed)


def encrypt_body(bundle: KeyBundle, data: bytes) -> bytes:
    """Quasigroup-encrypt raw bytes in the bundle's mode (order 256 required)."""
    if bundle.qg.order != 256:
        raise UnsupportedOrderError("byte payload encryption needs an order-256 key")
    if bundle.mode == "block":
        return bytes(encrypt_blocks(bundle.qg, data, bundle.block_len))
    return bytes(encrypt_chain(bundle.qg, data))


def decrypt_body(bundle: KeyBundle, data: bytes) -> bytes:
    if bundle.qg.order != 256:
        raise UnsupportedOrderError("byte payload decryption needs an order-256 key")
    if bundle.mode == "block":
        return bytes(decrypt_blocks(bundle.qg, data, bundle.block_len))
    return bytes(decrypt_chain(bundle.qg, data))


# --- message container ------------------------------------------------------------

@dataclass
class DataMessage:
    """One sealed transmission: clear header, encrypted body, auth block."""

    key_id: int
    encrypted_body: bytes
    sensor_id: int
    capture_timestamp_us: int
    signature_bits: str

    def to_bytes(self) -> bytes:
        out = bytearray()
        out += OUTER_MAGIC
        out.append(FORMAT_VERSION)
        out += self.key_id.to_bytes(4, "big")
        out += len(self.encrypted_body).to_bytes(4, "big")
        out += self.encrypted_body
        out += self.sensor_id.to_bytes(2, "big")
        out += self.capture_timestamp_us.to_bytes(8, "big")
        out += len(self.signature_bits).to_bytes(4, "big")
        out += _bits_to_bytes(self.signature_bits)
        return bytes(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "DataMessage":
        cur = _Cursor(data)
        if cur.take(4, "container magic") != OUTER_MAGIC:
            raise BadMagicError("container magic mismatch")
        version = cur.u8("container version")
        if version != FORMAT_VERSION:
            raise BadVersionError(f"unsupported container version {version}")
        key_id = cur.uint(4, "key id")
        body_len = cur.uint(4, "body length")
        body = cur.take(body_len, "encrypted body")
        sensor_id = cur.uint(2, "sensor id")
        timestamp = cur.uint(8, "timestamp")
        bit_len = cur.uint(4, "signature bit length")
        sig_bytes = cur.take((bit_len + 7) // 8, "signature")
        bits = _bytes_to_bits(sig_bytes, bit_len)
        if cur.remaining:
            raise InconsistentCountsError(f"{cur.remaining} trailing bytes after container")
        return cls(key_id=key_id, encrypted_body=body, sensor_id=sensor_id,
                   capture_timestamp_us=timestamp, signature_bits=bits)


# --- sealing and opening ------------------------------------------------------------

@dataclass
class SessionReport:
    """What a sink can say about one transmission."""

    verdict: AuthVerdict
    image_recovered: bool
    bytes_original: int
    bytes_encoded: int
    compression_ratio: float
    ciphertext_entropy: float
    mod_multiplications: int
    table_lookups: int
    failure: str | None = None
    scenario: str = ""


def seal_message(img: ImageGrid, ecg: EcgTrace, keys: KeyBundle,
                 sensor_id: int = 1) -> DataMessage:
    """Node side: encode, serialize, encrypt, attach the HRV signature."""
    payload = encode_image(img, keys.crt)
    body = encrypt_body(keys, serialize_payload(payload))
    signature = hrv_from_peaks(detect_r_peaks(ecg))
    return DataMessage(
        key_id=keys.key_id,
        encrypted_body=body,
        sensor_id=sensor_id,
        capture_timestamp_us=int(round(ecg.start_time * 1e6)),
        signature_bits=signature.bits,
    )


def open_message(msg: DataMessage, sink_ecg: EcgTrace, keys: KeyBundle,
                 threshold: float = DEFAULT_THRESHOLD,
                 original: ImageGrid | None = None,
                 strict: bool = True) -> SessionReport:
    """Sink side: authenticate first; decrypt and decode only on acceptance.

    When the original image is supplied (simulation), image_recovered means
    bit-exact equality. With strict=False, integrity failures after an
    accepted authentication come back as a report instead of an exception.
    """
    if msg.key_id != keys.key_id:
        raise UnknownKeyIdError(f"no key with id {msg.key_id:08x}")
    sink_signature = hrv_from_peaks(detect_r_peaks(sink_ecg))
    node_signature = HrvSignature.from_bits(msg.signature_bits)
    verdict = authenticate(node_signature, sink_signature, threshold)
    body = msg.encrypted_body
    entropy = shannon_entropy(body)

    if not verdict.accepted:
        return SessionReport(
            verdict=verdict,
            image_recovered=False,
            bytes_original=0,
            bytes_encoded=len(body),
            compression_ratio=0.0,
            ciphertext_entropy=entropy,
            mod_multiplications=0,
            table_lookups=len(body),  # the node still encrypted once
            failure="authentication alarm: sensors disagree",
        )

    try:
        payload = parse_payload(decrypt_body(keys, body))
        img = decode_image(payload, keys.crt)
    except WbsnError as exc:
        if strict:
            raise
        return SessionReport(
            verdict=verdict,
            image_recovered=False,
            bytes_original=0,
            bytes_encoded=len(body),
            compression_ratio=0.0,
            ciphertext_entropy=entropy,
            mod_multiplications=0,
            table_lookups=2 * len(body),
            failure=f"payload integrity: {exc}",
        )

    recovered = img == original if original is not None else True
    bytes_original = img.width * img.height
    return SessionReport(
        verdict=verdict,
        image_recovered=recovered,
        bytes_original=bytes_original,
        bytes_encoded=len(body),
        compression_ratio=bytes_original / len(body),
        ciphertext_entropy=entropy,
        # encode and decode each do k multiplies per block on both streams
        mod_multiplications=2 * (2 * payload.block_count * payload.k),
        table_lookups=2 * len(body),
        failure=None if recovered else "decoded image differs from the source",
    )


# --- scenario simulation --------------------------------------------------------------

@dataclass
class ScenarioSetup:
    """Inputs of one simulated session, exposed so callers can plot them."""

    scenario: str
    image: ImageGrid
    keys: KeyBundle
    node_ecg: EcgTrace
    sink_ecg: EcgTrace
    tamper_seed: int | None = None


def build_scenario(scenario: str, seed: int = 0) -> ScenarioSetup:
    """Deterministic scenario construction.

    same_subject: both sensors read one 72 bpm subject, independent noise.
    intruder:     the sink-side sensor sits on a different, 60 bpm subject.
    tamper:       same_subject plus one flipped byte of the encrypted body.
    """
    if scenario not in SCENARIOS:
        raise FileFormatError(f"unknown scenario {scenario!r}, pick from {SCENARIOS}")
    rng = random.Random(seed)
    keys = generate_key_bundle(rng.getrandbits(32))
    image = synth_image("blocks", 32, 32, seed=rng.getrandbits(32))
    sink_bpm = 60.0 if scenario == "intruder" else 72.0
    sink_subject = "person2" if scenario == "intruder" else "person1"
    node_ecg = synth_ecg(72.0, 10.0, 250.0, noise_amplitude=0.02,
                         seed=rng.getrandbits(32), subject_id="person1")
    sink_ecg = synth_ecg(sink_bpm, 10.0, 250.0, noise_amplitude=0.02,
                         seed=rng.getrandbits(32), subject_id=sink_subject)
    tamper_seed = rng.getrandbits(32) if scenario == "tamper" else None
    return ScenarioSetup(scenario=scenario, image=image, keys=keys,
                         node_ecg=node_ecg, sink_ecg=sink_ecg,
                         tamper_seed=tamper_seed)


def tamper_message(msg: DataMessage, seed: int) -> DataMessage:
    """Flip one seeded byte of the encrypted body (in-flight corruption)."""
    rng = random.Random(seed)
    body = bytearray(msg.encrypted_body)
    pos = rng.randrange(len(body))
    body[pos] ^= rng.randrange(1, 256)
    return replace(msg, encrypted_body=bytes(body))


def simulate_session(scenario: str, seed: int = 0,
                     threshold: float = DEFAULT_THRESHOLD) -> SessionReport:
    """Build a scenario, run seal and open, return the sink's report."""
    setup = build_scenario(scenario, seed)
    msg = seal_message(setup.image, setup.node_ecg, setup.keys)
    if setup.tamper_seed is not None:
        msg = tamper_message(msg, setup.tamper_seed)
    report = open_message(msg, setup.sink_ecg, setup.keys, threshold,
                          original=setup.image, strict=False)
    report.scenario = scenario
    return report


# --- session report serialization ------------------------------------------------------

_REPORT_FIELDS = (
    "scenario", "accepted", "mean_hrv_difference", "hamming_distance",
    "threshold_used", "unpaired_tail", "image_recovered", "bytes_original",
    "bytes_encoded", "compression_ratio", "ciphertext_entropy",
    "mod_multiplications", "table_lookups", "failure",
)


def _report_dict(report: SessionReport) -> dict:
    return {
        "scenario": report.scenario,
        "accepted": report.verdict.accepted,
        "mean_hrv_difference": report.verdict.mean_hrv_difference,
        "hamming_distance": report.verdict.hamming_distance,
        "threshold_used": report.verdict.threshold_used,
        "unpaired_tail": report.verdict.unpaired_tail,
        "image_recovered": report.image_recovered,
        "bytes_original": report.bytes_original,
        "bytes_encoded": report.bytes_encoded,
        "compression_ratio": report.compression_ratio,
        "ciphertext_entropy": report.ciphertext_entropy,
        "mod_multiplications": report.mod_multiplications,
        "table_lookups": report.table_lookups,
        "failure": report.failure,
    }


def _report_from_dict(data: dict) -> SessionReport:
    verdict = AuthVerdict(
        accepted=bool(data["accepted"]),
        mean_hrv_difference=data["mean_hrv_difference"],
        hamming_distance=data["hamming_distance"],
        threshold_used=data["threshold_used"],
        unpaired_tail=data["unpaired_tail"],
    )
    return SessionReport(
        verdict=verdict,
        image_recovered=bool(data["image_recovered"]),
        bytes_original=data["bytes_original"],
        bytes_encoded=data["bytes_encoded"],
        compression_ratio=data["compression_ratio"],
        ciphertext_entropy=data["ciphertext_entropy"],
        mod_multiplications=data["mod_multiplications"],
        table_lookups=data["table_lookups"],
        failure=data["failure"],
        scenario=data["scenario"],
    )


def report_to_json(report: SessionReport) -> str:
    return json.dumps(_report_dict(report), indent=2)


def report_from_json(text: str) -> SessionReport:
    try:
        return _report_from_dict(json.loads(text))
    except (KeyError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"bad session report JSON: {exc}") from exc


def report_to_csv(report: SessionReport) -> str:
    data = _report_dict(report)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_REPORT_FIELDS)
    writer.writerow(
        ["" if data[f] is None else repr(data[f]) if isinstance(data[f], float)
         else str(data[f]) for f in _REPORT_FIELDS]
    )
    return buf.getvalue()


def report_from_csv(text: str) -> SessionReport:
    reader = csv.reader(io.StringIO(text))
    try:
        header, record = next(reader), next(reader)
    except StopIteration:
        raise FileFormatError("session report CSV needs a header and one row") from None
    if tuple(header) != _REPORT_FIELDS:
        raise FileFormatError(f"unexpected report columns {header}")
    data = dict(zip(header, record))
    converted: dict = {
        "scenario": data["scenario"],
        "accepted": data["accepted"] == "True",
        "mean_hrv_difference": float(data["mean_hrv_difference"]),
        "hamming_distance": int(data["hamming_distance"]),
        "threshold_used": float(data["threshold_used"]),
        "unpaired_tail": int(data["unpaired_tail"]),
        "image_recovered": data["image_recovered"] == "True",
        "bytes_original": int(data["bytes_original"]),
        "bytes_encoded": int(data["bytes_encoded"]),
        "compression_ratio": float(data["compression_ratio"]),
        "ciphertext_entropy": float(data["ciphertext_entropy"]),
        "mod_multiplications": int(data["mod_multiplications"]),
        "table_lookups": int(data["table_lookups"]),
        "failure": data["failure"] or None,
    }
    return _report_from_dict(converted)
