"""Lossless key-dependent image codec built on simultaneous congruences.

Every 8-bit pixel splits into two 4-bit half-pixels (quotient and remainder
by 16). Each stream of half-pixels is chunked into blocks of k; a block
collapses into a single combination value TR below the key product P, from
which the k half-pixels are recoverable as residues modulo the key's
pairwise-coprime moduli. Repetition across blocks is then squeezed out by
replacing each TR with its index in a frequency-sorted code table.

The combination step alone cannot shrink data (log2 P >= 4k bits for k
half-pixels whenever every modulus is >= 16); all compression comes from
the code-table stage on repetitive content. The key dependence of TR is
what makes the encoding double as a first encryption level.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    CorruptPayloadError,
    EmptyImageError,
    InvalidModuliError,
    KeyMismatchError,
    LengthMismatchError,
    NotInvertibleError,
    ValueOutOfRangeError,
)
from .imaging import ImageGrid

HALF_PIXEL_MAX = 15
MIN_MODULUS = 16


# --- modular arithmetic -----------------------------------------------------

def modular_inverse(a: int, m: int) -> int:
    """Return x in [1, m-1] with (a * x) % m == 1, via extended Euclid."""
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    r0, r1 = m, a % m
    t0, t1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if r0 != 1:
        raise NotInvertibleError(f"{a} is not invertible modulo {m} (gcd {r0})")
    return t0 % m


@dataclass(frozen=True)
class CrtKeySet:
    """First-level key: pairwise-coprime moduli with precomputed coefficients.

    coefficients[i] % moduli[i] == 1 and coefficients[i] % moduli[j] == 0
    for j != i, so a block combines as sum(coefficients[i] * a[i]) mod product.
    """

    moduli: tuple[int, ...]
    product: int
    coefficients: tuple[int, ...]

    @property
    def k(self) -> int:
        """Block length in half-pixels."""
        return len(self.moduli)


def build_key(moduli: Sequence[int]) -> CrtKeySet:
    """Validate moduli and precompute the per-position combination coefficients."""
    mods = tuple(int(n) for n in moduli)
    if not mods:
        raise InvalidModuliError("at least one modulus is required")
    for n in mods:
        if n < MIN_MODULUS:
            raise InvalidModuliError(
                f"modulus {n} is below {MIN_MODULUS}; half-pixel values reach {HALF_PIXEL_MAX}"
            )
    for i in range(len(mods)):
        for j in range(i + 1, len(mods)):
            g = math.gcd(mods[i], mods[j])
            if g != 1:
                raise InvalidModuliError(
                    f"moduli {mods[i]} and {mods[j]} share factor {g}"
                )
    product = math.prod(mods)
    coefficients = []
    for n in mods:
        partial = product // n
        coefficients.append(partial * modular_inverse(partial, n))
    return CrtKeySet(moduli=mods, product=product, coefficients=tuple(coefficients))


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, int(limit ** 0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = b"\x00" * len(flags[p * p :: p])
    return [p for p in range(limit + 1) if flags[p]]


_PRIME_POOL = tuple(p for p in _sieve(2000) if p >= 17)


def generate_moduli(k: int, seed: int = 0) -> tuple[int, ...]:
    """Pick k distinct primes >= 17 from a seeded pseudorandom stream.

    Distinct primes are trivially pairwise coprime; any user-supplied
    coprime set >= 16 works with build_key directly.
    """
    if k < 1:
        raise InvalidModuliError(f"block length must be >= 1, got {k}")
    if k > len(_PRIME_POOL):
        raise InvalidModuliError(f"block length {k} exceeds the prime pool")
    rng = random.Random(seed)
    return tuple(rng.sample(_PRIME_POOL, k))


# --- per-pixel and per-block operations --------------------------------------

def split_pixel(r: int) -> tuple[int, int]:
    """Split an 8-bit pixel into (quotient, remainder) by 16."""
    if not 0 <= r <= 255:
        raise ValueOutOfRangeError(f"pixel {r} outside [0, 255]")
    return r >> 4, r & 0x0F


def reconstruct_pixel(a: int, a_prime: int) -> int:
    """Inverse of split_pixel: a*16 + a_prime."""
    if not 0 <= a <= HALF_PIXEL_MAX or not 0 <= a_prime <= HALF_PIXEL_MAX:
        raise ValueOutOfRangeError(f"half-pixels ({a}, {a_prime}) outside [0, 15]")
    return (a << 4) | a_prime


def encode_block(halves: Sequence[int], key: CrtKeySet) -> int:
    """Combine k half-pixels into one value TR < key.product.

    TR leaves each input recoverable as TR % moduli[i]; by coprimality the
    solution is unique below the product.
    """
    if len(halves) != key.k:
        raise LengthMismatchError(f"block of {len(halves)} halves, key expects {key.k}")
    total = 0
    for a, n, c in zip(halves, key.moduli, key.coefficients):
        if not 0 <= a < n:
            raise ValueOutOfRangeError(f"half-pixel {a} outside [0, {n})")
        total += c * a
    return total % key.product


def decode_block(tr: int, key: CrtKeySet) -> tuple[int, ...]:
    """Recover the k half-pixels of a combination value as residues."""
    if not 0 <= tr < key.product:
        raise ValueOutOfRangeError(f"value {tr} outside [0, {key.product})")
    return tuple(tr % n for n in key.moduli)


# --- code table ---------------------------------------------------------------

def build_code_table(values: Sequence[int]) -> tuple[list[int], list[int]]:
    """Map values to indices in a table sorted by descending count.

    Ties break by ascending value, giving a total order and a deterministic
    table. Indexing the table with the returned codes reproduces the input.
    """
    counts = Counter(values)
    table = sorted(counts, key=lambda v: (-counts[v], v))
    index = {v: i for i, v in enumerate(table)}
    return table, [index[v] for v in values]


# --- whole-image codec ---------------------------------------------------------

@dataclass(frozen=True)
class NticePayload:
    """Encoded image: code tables plus per-block table indices for both streams."""

    k: int
    block_count: int
    original_width: int
    original_height: int
    pad_length: int
    tr_table: tuple[int, ...]
    tr_prime_table: tuple[int, ...]
    tr_codes: tuple[int, ...]
    tr_prime_codes: tuple[int, ...]


def encode_image(img: ImageGrid, key: CrtKeySet) -> NticePayload:
    """Encode an image: split, combine per block, build code tables.

    The final partial block of each stream is zero-padded; pad_length
    records how many half-pixels to drop on decode. Identical (image, key)
    inputs always produce an identical payload.
    """
    pixels = img.pixels
    if not pixels:
        raise EmptyImageError("cannot encode an image with no pixels")
    k = key.k
    quotients = [p >> 4 for p in pixels]
    remainders = [p & 0x0F for p in pixels]
    pad_length = (-len(pixels)) % k
    if pad_length:
        quotients.extend([0] * pad_length)
        remainders.extend([0] * pad_length)
    block_count = len(quotients) // k

    coefficients = key.coefficients
    product = key.product
    cache: dict[tuple[int, ...], int] = {}

    def combine(stream: list[int]) -> list[int]:
        out = []
        for i in range(0, len(stream), k):
            block = tuple(stream[i : i + k])
            tr = cache.get(block)
            if tr is None:
                acc = 0
                for a, c in zip(block, coefficients):
                    acc += c * a
                tr = acc % product
                cache[block] = tr
            out.append(tr)
        return out

    tr_table, tr_codes = build_code_table(combine(quotients))
    trp_table, trp_codes = build_code_table(combine(remainders))
    return NticePayload(
        k=k,
        block_count=block_count,
        original_width=img.width,
        original_height=img.height,
        pad_length=pad_length,
        tr_table=tuple(tr_table),
        tr_prime_table=tuple(trp_table),
        tr_codes=tuple(tr_codes),
        tr_prime_codes=tuple(trp_codes),
    )


def _expand_stream(table: tuple[int, ...], codes: tuple[int, ...],
                   key: CrtKeySet, what: str) -> list[tuple[int, ...]]:
    if len(set(table)) != len(table):
        raise CorruptPayloadError(f"{what} table contains duplicate values")
    decoded = []
    for tr in table:
        if not 0 <= tr < key.product:
            raise CorruptPayloadError(f"{what} value {tr} outside [0, {key.product})")
        halves = tuple(tr % n for n in key.moduli)
        if any(h > HALF_PIXEL_MAX for h in halves):
            raise CorruptPayloadError(
                f"{what} value {tr} decodes outside the half-pixel range"
            )
        decoded.append(halves)
    out = []
    for code in codes:
        if not 0 <= code < len(table):
            raise CorruptPayloadError(f"{what} code {code} exceeds table size {len(table)}")
        out.append(decoded[code])
    return out


def decode_image(payload: NticePayload, key: CrtKeySet) -> ImageGrid:
    """Exact inverse of encode_image; bit-identical pixel recovery.

    Raises CorruptPayloadError on any internal inconsistency (bad index,
    out-of-range value, dimension or padding mismatch) and KeyMismatchError
    when the key's block length differs from the payload's.
    """
    if payload.k != key.k:
        raise KeyMismatchError(f"payload block length {payload.k}, key has {key.k}")
    width, height = payload.original_width, payload.original_height
    if width <= 0 or height <= 0:
        raise CorruptPayloadError(f"bad dimensions {width}x{height}")
    n_pixels = width * height
    expected_blocks = (n_pixels + payload.k - 1) // payload.k
    if payload.block_count != expected_blocks:
        raise CorruptPayloadError(
            f"block count {payload.block_count} inconsistent with {width}x{height} at k={payload.k}"
        )
    if payload.pad_length != expected_blocks * payload.k - n_pixels:
        raise CorruptPayloadError(f"pad length {payload.pad_length} inconsistent")
    if len(payload.tr_codes) != payload.block_count or len(payload.tr_prime_codes) != payload.block_count:
        raise CorruptPayloadError("code stream length differs from block count")

    quotient_blocks = _expand_stream(payload.tr_table, payload.tr_codes, key, "quotient")
    remainder_blocks = _expand_stream(payload.tr_prime_table, payload.tr_prime_codes, key, "remainder")

    quotients = [h for block in quotient_blocks for h in block]
    remainders = [h for block in remainder_blocks for h in block]
    if payload.pad_length:
        tail = quotients[n_pixels:] + remainders[n_pixels:]
        if any(tail):
            raise CorruptPayloadError("nonzero padding half-pixels")
        del quotients[n_pixels:], remainders[n_pixels:]
    pixels = bytes((q << 4) | r for q, r in zip(quotients, remainders))
    return ImageGrid(width, height, pixels)
