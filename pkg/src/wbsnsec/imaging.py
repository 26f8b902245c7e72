"""8-bit grayscale images: container type, binary PGM (P5) I/O, test patterns.

An ImageGrid is the plaintext payload of the pipeline. Pixels are stored
row-major as bytes, so raw dumps (width/height supplied out of band) are
just ``ImageGrid(w, h, data)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    EmptyImageError,
    FileFormatError,
    InvalidDimensionsError,
    InvalidParametersError,
)

SYNTH_KINDS = ("flat", "gradient", "blocks", "noise")
_TILE_SIZE = 8


@dataclass(frozen=True)
class ImageGrid:
    """Rectangular 8-bit grayscale pixel array, row-major."""

    width: int
    height: int
    pixels: bytes

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise EmptyImageError(
                f"image dimensions must be positive, got {self.width}x{self.height}"
            )
        if not isinstance(self.pixels, bytes):
            object.__setattr__(self, "pixels", bytes(self.pixels))
        if len(self.pixels) != self.width * self.height:
            raise ValueError(
                f"pixel count {len(self.pixels)} != {self.width}x{self.height}"
            )


# --- PGM (P5) -------------------------------------------------------------

def to_pgm_bytes(img: ImageGrid) -> bytes:
    """Serialize as canonical binary PGM (maxval 255)."""
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels


def from_pgm_bytes(data: bytes) -> ImageGrid:
    """Parse a binary PGM. Comments and arbitrary header whitespace accepted."""
    pos = 0

    def token() -> bytes:
        nonlocal pos
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            return token()
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FileFormatError("unexpected end of PGM header")
        return data[start:pos]

    if token() != b"P5":
        raise FileFormatError("not a binary PGM (want magic P5)")
    try:
        width, height, maxval = int(token()), int(token()), int(token())
    except ValueError as exc:
        raise FileFormatError(f"bad PGM header field: {exc}") from exc
    if maxval != 255:
        raise FileFormatError(f"only 8-bit PGM supported, got maxval {maxval}")
    pos += 1  # single whitespace byte after maxval
    pixels = data[pos : pos + width * height]
    if len(pixels) != width * height:
        raise FileFormatError(
            f"PGM data short: expected {width * height} bytes, got {len(pixels)}"
        )
    return ImageGrid(width, height, pixels)


def write_pgm(img: ImageGrid, path) -> None:
    with open(path, "wb") as fh:
        fh.write(to_pgm_bytes(img))


def read_pgm(path) -> ImageGrid:
    with open(path, "rb") as fh:
        return from_pgm_bytes(fh.read())


# --- synthetic test images --------------------------------------------------

def synth_image(kind: str, width: int, height: int, seed: int = 0,
                tiles: int = 4) -> ImageGrid:
    """Deterministic test pattern.

    ``flat``     one value everywhere (best-case repetition)
    ``gradient`` diagonal ramp with a seeded offset
    ``blocks``   a small set of random tiles repeated over the grid;
                 exercises the code-table stage
    ``noise``    uniform random bytes (incompressible control)
    """
    if width <= 0 or height <= 0:
        raise InvalidDimensionsError(
            f"image dimensions must be positive, got {width}x{height}"
        )
    rng = random.Random(seed)
    if kind == "flat":
        pixels = bytes([rng.randrange(256)]) * (width * height)
    elif kind == "gradient":
        base = rng.randrange(256)
        span = max(1, width + height - 2)
        pixels = bytes(
            (base + (x + y) * 255 // span) & 0xFF
            for y in range(height)
            for x in range(width)
        )
    elif kind == "blocks":
        if tiles < 1:
            raise InvalidParametersError("blocks pattern needs at least one tile")
        pool = [rng.randbytes(_TILE_SIZE * _TILE_SIZE) for _ in range(tiles)]
        grid_w = (width + _TILE_SIZE - 1) // _TILE_SIZE
        grid_h = (height + _TILE_SIZE - 1) // _TILE_SIZE
        choice = [[rng.randrange(tiles) for _ in range(grid_w)] for _ in range(grid_h)]
        out = bytearray(width * height)
        for y in range(height):
            ty, iy = divmod(y, _TILE_SIZE)
            row = choice[ty]
            for x in range(width):
                tx, ix = divmod(x, _TILE_SIZE)
                out[y * width + x] = pool[row[tx]][iy * _TILE_SIZE + ix]
        pixels = bytes(out)
    elif kind == "noise":
        pixels = rng.randbytes(width * height)
    else:
        raise InvalidParametersError(
            f"unknown pattern {kind!r}, expected one of {SYNTH_KINDS}"
        )
    return ImageGrid(width, height, pixels)
