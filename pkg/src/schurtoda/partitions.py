"""Young diagrams and their half-integer point configurations.

Half-integers are carried around as doubled odd integers so that every
piece of lattice bookkeeping stays in exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Iterator

MAX_ENUM_SIZE = 40


class SizeLimitError(ValueError):
    pass


class TruncationError(ValueError):
    pass


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """A point of Z + 1/2, stored as ``twice`` (an odd integer)."""

    twice: int

    def __post_init__(self):
        if self.twice % 2 == 0:
            raise ValueError(f"twice_value must be odd, got {self.twice}")

    @classmethod
    def of(cls, value) -> "HalfInt":
        """Coerce a HalfInt, a float/Fraction k+1/2, or a "k/2" string."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            num, _, den = value.partition("/")
            if den.strip() != "2":
                raise ValueError(f"not a half-integer string: {value!r}")
            return cls(int(num))
        doubled = 2 * Fraction(value)
        if doubled.denominator != 1:
            raise ValueError(f"{value!r} is not a half-integer")
        return cls(int(doubled))

    def __float__(self) -> float:
        return self.twice / 2

    def __lt__(self, other: "HalfInt") -> bool:
        return self.twice < other.twice

    def __add__(self, n: int) -> "HalfInt":
        return HalfInt(self.twice + 2 * n)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.twice)

    def __str__(self) -> str:
        return f"{self.twice}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self.twice}/2)"


@total_ordering
@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p < 1 for p in parts):
            raise ValueError(f"parts must be nonnegative: {self.parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {self.parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        """0-based row access; rows past the length are 0."""
        return self.parts[i] if i < len(self.parts) else 0

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __lt__(self, other: "Partition") -> bool:
        return (self.size, self.parts) < (other.size, other.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def to_json(self) -> list[int]:
        return list(self.parts)

    @classmethod
    def from_json(cls, data: Iterable[int]) -> "Partition":
        return cls(tuple(data))

    def __repr__(self) -> str:
        return f"Partition({list(self.parts)})"


EMPTY = Partition()


def _partitions_of(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    # lexicographic order on parts (ascending)
    if n == 0:
        yield ()
        return
    for first in range(1, min(n, largest) + 1):
        for rest in _partitions_of(n - first, first):
            yield (first,) + rest


def enumerate_partitions(max_size: int, cap: int = MAX_ENUM_SIZE) -> list[Partition]:
    """All diagrams with at most ``max_size`` boxes, ordered by (size, parts)."""
    if max_size < 0:
        raise ValueError("max_size must be nonnegative")
    if max_size > cap:
        raise SizeLimitError(f"max_size {max_size} exceeds cap {cap}")
    out = []
    for n in range(max_size + 1):
        out.extend(Partition(p) for p in _partitions_of(n, n))
    return out


def point_config(lam: Partition, n: int, depth: int) -> list[HalfInt]:
    """Top ``depth`` points of {lam_i - i + 1/2 + n}, decreasing."""
    if depth < lam.length:
        raise TruncationError(f"depth {depth} < length {lam.length} would drop particles")
    return [HalfInt(2 * (lam[i] - i - 1 + n) + 1) for i in range(depth)]


def occupies(lam: Partition, n: int, twice_x: int) -> bool:
    """Whether the half-integer twice_x/2 lies in the configuration of (n, lam)."""
    ell = lam.length
    # below the last row everything is filled
    if twice_x <= 2 * (n - ell - 1) + 1:
        return True
    for i in range(ell):
        if 2 * (lam.parts[i] - i - 1 + n) + 1 == twice_x:
            return True
    return False


def contains(lam: Partition, mu: Partition) -> bool:
    """mu is contained in lam, row by row."""
    if mu.length > lam.length:
        return False
    return all(m <= l for m, l in zip(mu.parts, lam.parts))


def partition_from_points(twice_points: Iterable[int], charge: int) -> Partition:
    """Inverse of the embedding: decreasing points (doubled) with given charge.

    ``twice_points`` lists the top of the configuration; everything below its
    last element is assumed filled.
    """
    pts = sorted(twice_points, reverse=True)
    parts = []
    for i, x2 in enumerate(pts):
        part = (x2 - 1) // 2 + i + 1 - charge
        if part < 0:
            raise ValueError("points do not describe a configuration of this charge")
        parts.append(part)
    return Partition(tuple(parts))
