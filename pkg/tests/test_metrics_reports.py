"""Entropy, compression ratio, and report round trips."""

import random

import pytest

from wbsnsec.errors import EmptyInputError
from wbsnsec.metrics import (
    MetricsRow,
    compression_ratio,
    rows_from_csv,
    rows_from_json,
    rows_to_csv,
    rows_to_json,
    shannon_entropy,
)
from wbsnsec.pipeline import (
    report_from_csv,
    report_from_json,
    report_to_csv,
    report_to_json,
    simulate_session,
)


# --- shannon_entropy ---------------------------------------------------------

def test_entropy_constant_bytes():
    assert shannon_entropy(b"\x07" * 1000) == 0.0


def test_entropy_uniform_bytes():
    assert shannon_entropy(bytes(range(256))) == 8.0


def test_entropy_two_symbols():
    assert shannon_entropy(b"aabb") == 1.0


def test_entropy_empty_rejected():
    with pytest.raises(EmptyInputError):
        shannon_entropy(b"")


def test_entropy_bounds_random():
    rng = random.Random(0)
    for _ in range(20):
        data = rng.randbytes(rng.randrange(1, 4096))
        assert 0.0 <= shannon_entropy(data) <= 8.0


# --- compression_ratio -------------------------------------------------------

def test_ratio_basic():
    assert compression_ratio(1000, 250) == 4.0


def test_ratio_below_one_reported_honestly():
    assert compression_ratio(100, 400) == 0.25


def test_ratio_zero_encoded_rejected():
    with pytest.raises(ZeroDivisionError):
        compression_ratio(100, 0)


# --- metrics rows ---------------------------------------------------------------

def _sample_rows():
    return [
        MetricsRow(
            algorithm_label="crt-k4", image="a.pgm", bytes_original=4096,
            bytes_encoded=2345, execution_time=0.01234,
            compression_ratio=4096 / 2324, compression_ratio_with_header=4096 / 2345,
            payload_entropy=7.1234567890123, ciphertext_entropy=7.987654321,
            mod_multiplications=16384, table_lookups=2345,
        ),
        MetricsRow(algorithm_label="external-aes", ciphertext_entropy=7.5),
    ]


def test_metrics_csv_roundtrip_exact():
    rows = _sample_rows()
    assert rows_from_csv(rows_to_csv(rows)) == rows


def test_metrics_json_roundtrip_exact():
    rows = _sample_rows()
    assert rows_from_json(rows_to_json(rows)) == rows


def test_metrics_non_codec_row_has_no_ratio():
    row = _sample_rows()[1]
    assert row.compression_ratio is None
    assert row.ciphertext_entropy == 7.5


# --- session reports --------------------------------------------------------------

@pytest.mark.parametrize("scenario", ["same_subject", "intruder", "tamper"])
def test_session_report_json_roundtrip(scenario):
    report = simulate_session(scenario, seed=21)
    assert report_from_json(report_to_json(report)) == report


@pytest.mark.parametrize("scenario", ["same_subject", "intruder"])
def test_session_report_csv_roundtrip(scenario):
    report = simulate_session(scenario, seed=22)
    assert report_from_csv(report_to_csv(report)) == report
