"""Synthetic ECG traces, R-peak detection, and HRV-based node authentication.

A trace is a sum of Gaussian bumps per beat (P, Q, R, S, T), with the R
bump the per-beat maximum at 1.0 mV. Detection keeps local maxima above
0.6x the global maximum, at least 0.2 s apart. Per-interval HRV is the
inverse RR interval; quantized x100 into 16-bit words it forms the bit
signature two sensors compare. The accept/reject statistic is the mean
absolute HRV difference over aligned intervals; the Hamming distance of
the bit signatures is reported alongside for diagnostics.

Trace file format: text, header line "# rate=<Hz> subject=<id>", then one
"time_seconds,amplitude_mv" line per sample. Signature dumps are the bit
string in hexadecimal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .errors import (
    EmptySignatureError,
    FileFormatError,
    InsufficientPeaksError,
    InvalidParametersError,
    NoPeaksError,
    TooShortError,
    ValueOutOfRangeError,
)

# (amplitude mV, offset from the R instant s, gaussian sigma s)
# P sits 0.16 s before R; Q/S flank R across an 0.08 s complex; the T bump
# peaks 0.35 s after Q.
WAVE_SHAPES = (
    ("P", 0.15, -0.16, 0.025),
    ("Q", -0.10, -0.03, 0.009),
    ("R", 1.00, 0.00, 0.012),
    ("S", -0.12, 0.03, 0.009),
    ("T", 0.30, 0.32, 0.050),
)

R_THRESHOLD_FRACTION = 0.6
REFRACTORY_S = 0.2
MIN_TRACE_S = 2.0
HRV_SCALE = 100
HRV_WORD_BITS = 16
DEFAULT_THRESHOLD = 0.1

BPM_MIN, BPM_MAX = 30.0, 220.0


@dataclass
class EcgTrace:
    """Sampled ECG signal in millivolts."""

    sample_rate: float
    samples: np.ndarray
    subject_id: str = ""
    start_time: float = 0.0

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise InvalidParametersError(f"sample rate must be positive, got {self.sample_rate}")
        self.samples = np.asarray(self.samples, dtype=float)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


@dataclass(frozen=True)
class RPeakList:
    """Strictly increasing peak instants, at least one refractory period apart."""

    times: tuple[float, ...]

    def __post_init__(self):
        for t0, t1 in zip(self.times, self.times[1:]):
            if t1 - t0 < REFRACTORY_S - 1e-9:
                raise InvalidParametersError(
                    f"peaks {t0:.4f}s and {t1:.4f}s closer than {REFRACTORY_S}s"
                )


@dataclass(frozen=True)
class HrvSignature:
    """Per-interval HRV values and their 16-bit-per-value quantized bit string."""

    hrv_values: tuple[float, ...]
    bits: str

    def __post_init__(self):
        if len(self.bits) != HRV_WORD_BITS * len(self.hrv_values):
            raise ValueOutOfRangeError(
                f"{len(self.bits)} bits for {len(self.hrv_values)} values"
            )

    @classmethod
    def from_bits(cls, bits: str) -> "HrvSignature":
        """Rebuild from a bit string; HRV values come back quantized to 0.01."""
        if len(bits) % HRV_WORD_BITS:
            raise FileFormatError(
                f"bit length {len(bits)} is not a multiple of {HRV_WORD_BITS}"
            )
        if bits.strip("01"):
            raise FileFormatError("signature bits must be 0/1 characters")
        words = [
            int(bits[i : i + HRV_WORD_BITS], 2)
            for i in range(0, len(bits), HRV_WORD_BITS)
        ]
        return cls(tuple(w / HRV_SCALE for w in words), bits)

    def to_hex(self) -> str:
        if not self.bits:
            return ""
        return format(int(self.bits, 2), f"0{len(self.bits) // 4}x")

    @classmethod
    def from_hex(cls, text: str) -> "HrvSignature":
        text = text.strip()
        try:
            value = int(text, 16) if text else 0
        except ValueError as exc:
            raise FileFormatError(f"bad hexadecimal signature: {exc}") from exc
        return cls.from_bits(format(value, f"0{len(text) * 4}b") if text else "")


@dataclass(frozen=True)
class AuthVerdict:
    """Outcome of comparing two sensors' HRV signatures."""

    accepted: bool
    mean_hrv_difference: float
    hamming_distance: int
    threshold_used: float
    unpaired_tail: int = 0


# --- synthesis ---------------------------------------------------------------

def beat_instants(bpm: float, duration: float) -> tuple[float, ...]:
    """R-peak instants for a steady rhythm: one beat per 60/bpm seconds."""
    rr = 60.0 / bpm
    first = rr / 2.0
    count = int(duration / rr) + 2
    return tuple(t for t in (first + i * rr for i in range(count)) if t < duration)


def synth_ecg(bpm: float, duration: float, sample_rate: float = 250.0,
              noise_amplitude: float = 0.0, seed: int = 0,
              subject_id: str = "") -> EcgTrace:
    """Deterministic synthetic ECG; the seed only drives the additive noise.

    Two sensors on the same subject are two calls with equal rhythm
    parameters and independent seeds: same beats, independent noise.
    """
    if not BPM_MIN <= bpm <= BPM_MAX:
        raise InvalidParametersError(f"bpm {bpm} outside [{BPM_MIN:g}, {BPM_MAX:g}]")
    if duration <= 0:
        raise InvalidParametersError(f"duration must be positive, got {duration}")
    if sample_rate <= 0:
        raise InvalidParametersError(f"sample rate must be positive, got {sample_rate}")
    if noise_amplitude < 0:
        raise InvalidParametersError(f"noise amplitude must be >= 0, got {noise_amplitude}")
    n = int(round(duration * sample_rate))
    if n < 1:
        raise InvalidParametersError("duration shorter than one sample")
    t = np.arange(n) / sample_rate
    centers = np.asarray(beat_instants(bpm, duration))
    offsets = t[None, :] - centers[:, None]
    signal = np.zeros(n)
    for _name, amp, off, sigma in WAVE_SHAPES:
        signal += (amp * np.exp(-((offsets - off) ** 2) / (2.0 * sigma * sigma))).sum(axis=0)
    if noise_amplitude > 0:
        rng = np.random.default_rng(seed)
        signal = signal + rng.uniform(-noise_amplitude, noise_amplitude, n)
    return EcgTrace(sample_rate=sample_rate, samples=signal, subject_id=subject_id)


# --- detection and signatures ---------------------------------------------------

def detect_r_peaks(trace: EcgTrace) -> RPeakList:
    """Local maxima above 0.6x the global maximum, >= 0.2 s apart."""
    samples = trace.samples
    if samples.size == 0:
        raise TooShortError("trace has no samples")
    if trace.duration < MIN_TRACE_S:
        raise TooShortError(f"trace lasts {trace.duration:.3f} s, need >= {MIN_TRACE_S:g} s")
    peak = float(samples.max())
    if peak <= 0.0:
        raise NoPeaksError("no positive excursion in trace")
    distance = max(1, math.ceil(REFRACTORY_S * trace.sample_rate))
    idx, _ = find_peaks(samples, height=R_THRESHOLD_FRACTION * peak, distance=distance)
    if idx.size == 0:
        raise NoPeaksError("no local maxima above threshold")
    times = trace.start_time + idx / trace.sample_rate
    return RPeakList(tuple(float(x) for x in times))


def hrv_from_peaks(peaks: RPeakList) -> HrvSignature:
    """HRV per interval is 1/RR; each value quantizes to round(hrv*100) in 16 bits."""
    times = peaks.times
    if len(times) < 2:
        raise InsufficientPeaksError(f"need >= 2 peaks, got {len(times)}")
    hrv = []
    words = []
    for t0, t1 in zip(times, times[1:]):
        value = 1.0 / (t1 - t0)
        word = round(value * HRV_SCALE)
        if not 0 <= word < (1 << HRV_WORD_BITS):
            raise ValueOutOfRangeError(f"HRV {value} does not fit a 16-bit word")
        hrv.append(value)
        words.append(word)
    bits = "".join(format(w, f"0{HRV_WORD_BITS}b") for w in words)
    return HrvSignature(tuple(hrv), bits)


def hamming_distance(bits1: str, bits2: str) -> int:
    """Count differing positions up to the longer length.

    Positions past the shorter string count as mismatches; two empty
    strings are at distance 0.
    """
    mismatches = sum(1 for a, b in zip(bits1, bits2) if a != b)
    return mismatches + abs(len(bits1) - len(bits2))


def authenticate(sig1: HrvSignature, sig2: HrvSignature,
                 threshold: float = DEFAULT_THRESHOLD) -> AuthVerdict:
    """Accept iff the mean absolute HRV difference stays within the threshold.

    Signatures align on their common prefix; unpaired tail values are
    excluded from the mean and reported in the verdict.
    """
    if threshold <= 0:
        raise InvalidParametersError(f"threshold must be positive, got {threshold}")
    if not sig1.hrv_values or not sig2.hrv_values:
        raise EmptySignatureError("both signatures need at least one HRV value")
    paired = min(len(sig1.hrv_values), len(sig2.hrv_values))
    mean_diff = (
        sum(abs(a - b) for a, b in zip(sig1.hrv_values, sig2.hrv_values)) / paired
    )
    return AuthVerdict(
        accepted=mean_diff <= threshold,
        mean_hrv_difference=mean_diff,
        hamming_distance=hamming_distance(sig1.bits, sig2.bits),
        threshold_used=threshold,
        unpaired_tail=abs(len(sig1.hrv_values) - len(sig2.hrv_values)),
    )


# --- trace files -----------------------------------------------------------------

def save_ecg(trace: EcgTrace, path) -> None:
    subject = "".join(trace.subject_id.split()) or "-"
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"# rate={trace.sample_rate:g} subject={subject}\n")
        for i, amp in enumerate(trace.samples):
            fh.write(f"{trace.start_time + i / trace.sample_rate:.6f},{amp:.6f}\n")


def load_ecg(path) -> EcgTrace:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline()
        fields = dict(
            part.split("=", 1) for part in header.lstrip("#").split() if "=" in part
        )
        if not header.startswith("#") or "rate" not in fields:
            raise FileFormatError('trace file must start with "# rate=<Hz> subject=<id>"')
        try:
            rate = float(fields["rate"])
        except ValueError as exc:
            raise FileFormatError(f"bad sample rate: {exc}") from exc
        subject = fields.get("subject", "-")
        start_time = 0.0
        samples = []
        for ln, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            try:
                t_text, amp_text = line.split(",")
                t, amp = float(t_text), float(amp_text)
            except ValueError as exc:
                raise FileFormatError(f"line {ln}: {exc}") from exc
            if not samples:
                start_time = t
            samples.append(amp)
    if not samples:
        raise FileFormatError("trace file has no samples")
    return EcgTrace(
        sample_rate=rate,
        samples=np.asarray(samples),
        subject_id="" if subject == "-" else subject,
        start_time=start_time,
    )
