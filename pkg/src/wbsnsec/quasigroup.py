"""Latin-square (quasigroup) stream cipher, the second encryption level.

The key is an order-n operation table in which every row and column is a
permutation, plus a secret leader element. Chain mode feeds each output
symbol back as the left operand for the next; block mode restarts the
chain every block_len symbols, trading diffusion for error tolerance.

Keys are generated by applying seeded row, column, and symbol permutations
to the cyclic table ((r + c) mod n). That reaches a large but not complete
subset of all Latin squares of the order; acceptable here, documented as a
limitation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    InvalidBlockLengthError,
    LatinSquareError,
    SymbolOutOfRangeError,
    UnsupportedOrderError,
)

SUPPORTED_ORDERS = (2, 4, 16, 256)
DEFAULT_BLOCK_LEN = 64


def validate_latin_square(table: Sequence[Sequence[int]]) -> tuple[bool, str | None]:
    """Check the row/column permutation property.

    Returns (True, None) or (False, reason) naming the first offending
    row or column.
    """
    n = len(table)
    if n == 0:
        return False, "table is empty"
    symbols = set(range(n))
    for r, row in enumerate(table):
        if len(row) != n:
            return False, f"row {r} has length {len(row)}, expected {n}"
        if set(row) != symbols:
            return False, f"row {r} is not a permutation of 0..{n - 1}"
    for c in range(n):
        if {row[c] for row in table} != symbols:
            return False, f"column {c} is not a permutation of 0..{n - 1}"
    return True, None


@dataclass
class Quasigroup:
    """Order-n Latin square plus leader element; immutable after construction."""

    order: int
    table: tuple[tuple[int, ...], ...]
    leader: int
    _flat: list[int] = field(init=False, repr=False, compare=False)
    _left_flat: list[int] | None = field(
        init=False, repr=False, compare=False, default=None
    )

    def __post_init__(self):
        self.table = tuple(tuple(row) for row in self.table)
        if len(self.table) != self.order:
            raise LatinSquareError(
                f"table has {len(self.table)} rows, order says {self.order}"
            )
        ok, reason = validate_latin_square(self.table)
        if not ok:
            raise LatinSquareError(reason)
        if not 0 <= self.leader < self.order:
            raise SymbolOutOfRangeError(
                f"leader {self.leader} outside [0, {self.order})"
            )
        self._flat = [v for row in self.table for v in row]


@dataclass
class LeftDivisionTable:
    """Entry (u, v) is the unique x with table[u][x] == v in the source square."""

    order: int
    table: tuple[tuple[int, ...], ...]


def generate_quasigroup(order: int, seed: int = 0) -> Quasigroup:
    """Seeded key generation: shuffle rows, columns, and symbols of the cyclic table."""
    if order not in SUPPORTED_ORDERS:
        raise UnsupportedOrderError(
            f"order {order} unsupported, pick one of {SUPPORTED_ORDERS}"
        )
    rng = random.Random(seed)
    row_perm = list(range(order))
    col_perm = list(range(order))
    sym_perm = list(range(order))
    rng.shuffle(row_perm)
    rng.shuffle(col_perm)
    rng.shuffle(sym_perm)
    table = tuple(
        tuple(sym_perm[(row_perm[r] + col_perm[c]) % order] for c in range(order))
        for r in range(order)
    )
    return Quasigroup(order=order, table=table, leader=rng.randrange(order))


def left_division(q: Quasigroup) -> LeftDivisionTable:
    """Invert each row: the decryption table."""
    rows = []
    for row in q.table:
        inv = [0] * q.order
        for x, v in enumerate(row):
            inv[v] = x
        rows.append(tuple(inv))
    return LeftDivisionTable(order=q.order, table=tuple(rows))


def _left_flat(q: Quasigroup) -> list[int]:
    if q._left_flat is None:
        flat = [0] * (q.order * q.order)
        n = q.order
        for u, row in enumerate(q.table):
            base = u * n
            for x, v in enumerate(row):
                flat[base + v] = x
        q._left_flat = flat
    return q._left_flat


def _check_symbols(symbols: Sequence[int], n: int) -> None:
    if not symbols:
        return
    if min(symbols) < 0 or max(symbols) >= n:
        bad = next(s for s in symbols if not 0 <= s < n)
        raise SymbolOutOfRangeError(f"symbol {bad} outside [0, {n})")


def encrypt_chain(q: Quasigroup, message: Sequence[int]) -> list[int]:
    """c1 = leader * m1, then each output chains as the next left operand."""
    msg = message if isinstance(message, (bytes, bytearray, list)) else list(message)
    n = q.order
    _check_symbols(msg, n)
    flat = q._flat
    prev = q.leader
    out = []
    append = out.append
    for m in msg:
        prev = flat[prev * n + m]
        append(prev)
    return out


def decrypt_chain(q: Quasigroup, cipher: Sequence[int]) -> list[int]:
    """Inverse of encrypt_chain via left division."""
    cip = cipher if isinstance(cipher, (bytes, bytearray, list)) else list(cipher)
    n = q.order
    _check_symbols(cip, n)
    flat = _left_flat(q)
    prev = q.leader
    out = []
    append = out.append
    for c in cip:
        append(flat[prev * n + c])
        prev = c
    return out


def encrypt_blocks(q: Quasigroup, message: Sequence[int],
                   block_len: int = DEFAULT_BLOCK_LEN) -> list[int]:
    """Chain-encrypt consecutive blocks independently, leader reset per block."""
    if block_len < 1:
        raise InvalidBlockLengthError(f"block length must be >= 1, got {block_len}")
    msg = message if isinstance(message, (bytes, bytearray, list)) else list(message)
    out = []
    for i in range(0, len(msg), block_len):
        out.extend(encrypt_chain(q, msg[i : i + block_len]))
    return out


def decrypt_blocks(q: Quasigroup, cipher: Sequence[int],
                   block_len: int = DEFAULT_BLOCK_LEN) -> list[int]:
    """Inverse of encrypt_blocks."""
    if block_len < 1:
        raise InvalidBlockLengthError(f"block length must be >= 1, got {block_len}")
    cip = cipher if isinstance(cipher, (bytes, bytearray, list)) else list(cipher)
    out = []
    for i in range(0, len(cip), block_len):
        out.extend(decrypt_chain(q, cip[i : i + block_len]))
    return out
