"""Points of the Boolean hypercube {0,1}^d and bit-level helpers.

A point is stored as a Python integer bitmask: bit i of ``value`` is
coordinate i. The string form reads coordinates left to right, so
``from01("01011")`` has coordinate 0 equal to 0 and coordinate 3 equal to 1.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class Point:
    value: int
    dim: int

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dimension must be at least 1")
        if not 0 <= self.value < (1 << self.dim):
            raise ValueError(f"value {self.value} out of range for dimension {self.dim}")

    def bit(self, i: int) -> int:
        if not 0 <= i < self.dim:
            raise IndexError(f"coordinate {i} out of range for dimension {self.dim}")
        return (self.value >> i) & 1

    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> i) & 1 for i in range(self.dim))

    def flip(self, coords: Iterable[int]) -> "Point":
        mask = 0
        for i in coords:
            if not 0 <= i < self.dim:
                raise IndexError(f"coordinate {i} out of range for dimension {self.dim}")
            mask |= 1 << i
        return Point(self.value ^ mask, self.dim)

    def weight(self) -> int:
        return self.value.bit_count()

    def to01(self) -> str:
        return "".join(str((self.value >> i) & 1) for i in range(self.dim))

    @classmethod
    def from01(cls, s: str) -> "Point":
        s = s.strip()
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a 0/1 string: {s!r}")
        value = 0
        for i, ch in enumerate(s):
            if ch == "1":
                value |= 1 << i
        return cls(value, len(s))

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "Point":
        value = 0
        for i, b in enumerate(bits):
            if b not in (0, 1):
                raise ValueError(f"coordinate {i} is {b}, expected 0 or 1")
            value |= int(b) << i
        return cls(value, len(bits))

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator) -> "Point":
        nbytes = (dim + 7) // 8
        value = int.from_bytes(rng.bytes(nbytes), "little") & ((1 << dim) - 1)
        return cls(value, dim)


def hamming(x: Point, y: Point) -> int:
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {y.dim}")
    return (x.value ^ y.value).bit_count()


def popcount_table(d: int) -> np.ndarray:
    """Popcounts of 0 .. 2^d - 1 as a uint8 lookup table (d <= 16)."""
    if d > 16:
        raise ValueError("popcount table limited to d <= 16")
    n = 1 << d
    pc = np.zeros(n, dtype=np.uint8)
    for i in range(1, n):
        pc[i] = pc[i >> 1] + (i & 1)
    return pc


def points_to_bit_matrix(points: Sequence[Point]) -> np.ndarray:
    """Rows of 0/1 uint8, one row per point, column i = coordinate i."""
    if not points:
        raise ValueError("empty point list")
    d = points[0].dim
    nbytes = (d + 7) // 8
    raw = np.frombuffer(
        b"".join(p.value.to_bytes(nbytes, "little") for p in points), dtype=np.uint8
    ).reshape(len(points), nbytes)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :d]


def bit_rows_to_points(rows: np.ndarray) -> list[Point]:
    rows = np.asarray(rows, dtype=np.uint8)
    d = rows.shape[1]
    packed = np.packbits(rows, axis=1, bitorder="little")
    return [Point(int.from_bytes(row.tobytes(), "little"), d) for row in packed]


# ---------------------------------------------------------------------------
# Dataset files: text form is one 0/1 string per line; binary form is a small
# header followed by rows of ceil(d/8) bytes, little-endian bit packing
# (bit i of byte i//8 is coordinate i).

_BINARY_MAGIC = b"LSHPTS01"


def save_points_text(points: Sequence[Point], path) -> None:
    with open(path, "w") as f:
        for p in points:
            f.write(p.to01())
            f.write("\n")


def load_points_text(path) -> list[Point]:
    points = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if line:
                points.append(Point.from01(line))
    if not points:
        raise ValueError(f"no points in {path}")
    dims = {p.dim for p in points}
    if len(dims) != 1:
        raise ValueError(f"mixed dimensions in {path}: {sorted(dims)}")
    return points


def save_points_binary(points: Sequence[Point], path) -> None:
    d = points[0].dim
    nbytes = (d + 7) // 8
    with open(path, "wb") as f:
        f.write(_BINARY_MAGIC)
        f.write(struct.pack("<II", d, len(points)))
        for p in points:
            f.write(p.value.to_bytes(nbytes, "little"))


def load_points_binary(path) -> list[Point]:
    with open(path, "rb") as f:
        magic = f.read(len(_BINARY_MAGIC))
        if magic != _BINARY_MAGIC:
            raise ValueError(f"{path} is not a packed point file")
        d, n = struct.unpack("<II", f.read(8))
        nbytes = (d + 7) // 8
        points = []
        for _ in range(n):
            raw = f.read(nbytes)
            if len(raw) != nbytes:
                raise ValueError(f"{path} truncated")
            points.append(Point(int.from_bytes(raw, "little") & ((1 << d) - 1), d))
    return points
