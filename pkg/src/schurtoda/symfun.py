"""Specializations of symmetric functions at Miwa times.

A specialization is fixed by its h-generating function

    sum_n h_n z^n = exp(sum_k t_k z^k) * prod_j (1 - a_j z)^(-e_j)

where the optional factors are Miwa brace shifts t -> t + e_j {a_j}
with {a} = (a, a^2/2, a^3/3, ...).  Under this convention p_k -> k t_k,
so that sum_lam s_lam(t) s_lam(t') = exp(sum_n n t_n t'_n).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .partitions import Partition


@dataclass(frozen=True)
class ParamSeq:
    """Finitely supported Miwa times, optionally carrying brace shifts.

    ``entries`` is a sorted tuple of (index, value) with index >= 1 and
    value != 0.  ``braces`` is a tuple of (a, e) meaning the extra summand
    e * {a}, e = +1 or -1.
    """

    entries: tuple[tuple[int, complex], ...] = ()
    braces: tuple[tuple[complex, int], ...] = field(default=())

    def __post_init__(self):
        clean = {}
        for k, v in self.entries:
            k = int(k)
            if k < 1:
                raise ValueError(f"Miwa index must be >= 1, got {k}")
            clean[k] = clean.get(k, 0) + complex(v)
        object.__setattr__(
            self, "entries", tuple(sorted((k, v) for k, v in clean.items() if v != 0))
        )
        braces = []
        for a, e in self.braces:
            if e not in (1, -1):
                raise ValueError("brace exponent must be +1 or -1")
            if a != 0:
                braces.append((complex(a), int(e)))
        object.__setattr__(self, "braces", tuple(braces))

    @classmethod
    def of(cls, values: Iterable[complex] | Mapping[int, complex] | "ParamSeq" | None = None) -> "ParamSeq":
        """Build from a sequence (t_1, t_2, ...) or a mapping index -> value."""
        if values is None:
            return cls()
        if isinstance(values, ParamSeq):
            return values
        if isinstance(values, Mapping):
            return cls(tuple((int(k), v) for k, v in values.items()))
        return cls(tuple((i + 1, v) for i, v in enumerate(values)))

    @property
    def support(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    def get(self, k: int) -> complex:
        for i, v in self.entries:
            if i == k:
                return v
        return 0j

    def as_dict(self) -> dict[int, complex]:
        return dict(self.entries)

    def __neg__(self) -> "ParamSeq":
        return ParamSeq(
            tuple((k, -v) for k, v in self.entries), tuple((a, -e) for a, e in self.braces)
        )

    def __add__(self, other: "ParamSeq") -> "ParamSeq":
        d = self.as_dict()
        for k, v in other.entries:
            d[k] = d.get(k, 0) + v
        return ParamSeq(tuple(d.items()), self.braces + other.braces)

    def __sub__(self, other: "ParamSeq") -> "ParamSeq":
        return self + (-other)

    def scale(self, c: complex) -> "ParamSeq":
        if self.braces:
            raise ValueError("cannot rescale a brace-shifted sequence")
        return ParamSeq(tuple((k, c * v) for k, v in self.entries))

    def shift(self, a: complex, sign: int = 1) -> "ParamSeq":
        """t + sign * {a}."""
        return ParamSeq(self.entries, self.braces + ((a, sign),))

    def is_real(self) -> bool:
        return all(v.imag == 0 for _, v in self.entries) and all(
            a.imag == 0 for a, _ in self.braces
        )

    def abs_series_bound(self, radius: float) -> float:
        """log of max |gamma(z, self)| over |z| = radius (upper bound)."""
        s = sum(abs(v) * radius**k for k, v in self.entries)
        for a, e in self.braces:
            r = abs(a) * radius
            if e > 0:
                if r >= 1:
                    return math.inf
                s -= math.log1p(-r)
            else:
                s += math.log1p(r)
        return s

    def to_json(self) -> dict:
        out = {str(k): [v.real, v.imag] for k, v in self.entries}
        if self.braces:
            out["braces"] = [[a.real, a.imag, e] for a, e in self.braces]
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "ParamSeq":
        entries = []
        braces = []
        for key, val in data.items():
            if key == "braces":
                braces = [(complex(re, im), int(e)) for re, im, e in val]
                continue
            if isinstance(val, (list, tuple)):
                val = complex(val[0], val[1])
            entries.append((int(key), complex(val)))
        return cls(tuple(entries), tuple(braces))

    def __hash__(self):
        return hash((self.entries, self.braces))


def _as_param(t) -> ParamSeq:
    return ParamSeq.of(t)


@lru_cache(maxsize=4096)
def _h_coeffs_cached(t: ParamSeq, N: int) -> tuple[complex, ...]:
    h = np.zeros(N + 1, dtype=complex)
    h[0] = 1.0
    kt = np.zeros(N + 1, dtype=complex)
    for k, v in t.entries:
        if k <= N:
            kt[k] = k * v
    for n in range(1, N + 1):
        h[n] = np.dot(kt[1 : n + 1], h[n - 1 :: -1][:n]) / n
    for a, e in t.braces:
        h = shift_by_braces(h, a, e)
    return tuple(h)


def h_coeffs(t, N: int) -> np.ndarray:
    """(h_0, ..., h_N) of gamma(z, t) via n h_n = sum_k k t_k h_{n-k}."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    return np.array(_h_coeffs_cached(_as_param(t), int(N)))


def shift_by_braces(coeffs: np.ndarray, a: complex, sign: int) -> np.ndarray:
    """Multiply a power series by (1 - a w)^(-sign), truncated to its length.

    This is the action of t -> t + sign*{a} on gamma(w, t).
    """
    c = np.asarray(coeffs, dtype=complex)
    if a == 0:
        return c.copy()
    out = np.empty_like(c)
    if sign > 0:
        acc = 0j
        for n in range(len(c)):
            acc = acc * a + c[n]
            out[n] = acc
    else:
        out[0] = c[0]
        out[1:] = c[1:] - a * c[:-1]
    return out


def _jt_matrix(lam: Partition, mu: Partition, h: np.ndarray, N: int) -> np.ndarray:
    m = np.zeros((N, N), dtype=complex)
    for i in range(N):
        for j in range(N):
            k = lam[i] - i - mu[j] + j
            if 0 <= k < len(h):
                m[i, j] = h[k]
    return m


def schur_value(lam: Partition, t, N: int | None = None) -> complex:
    """Jacobi-Trudi det(h_{lam_i - i + j}) with N >= length(lam) rows."""
    return skew_schur_value(lam, Partition(), t, N)


def skew_schur_value(lam: Partition, mu: Partition, t, N: int | None = None) -> complex:
    """det(h_{lam_i - i - mu_j + j}); zero when mu is not inside lam."""
    if N is None:
        N = lam.length
    if N < lam.length:
        raise ValueError("N must be at least length(lam)")
    if mu.length > lam.length or any(m > l for m, l in zip(mu.parts, lam.parts)):
        return 0j
    if N == 0:
        return 1 + 0j
    h = h_coeffs(t, max(lam.size - mu.size, 0) + 1)
    return complex(np.linalg.det(_jt_matrix(lam, mu, h, N)))


def log_z_norm(t, tp) -> complex:
    """log Z_{t,t'} = sum_n n t_n t'_n, extended bilinearly to brace shifts."""
    t, tp = _as_param(t), _as_param(tp)
    d = tp.as_dict()
    s = sum(k * v * d.get(k, 0) for k, v in t.entries)
    # {a} paired with t': sum_n a^n t'_n = log gamma(a, t')
    for a, e in t.braces:
        s += e * sum(v * a**k for k, v in tp.entries)
    for b, e in tp.braces:
        s += e * sum(v * b**k for k, v in t.entries)
    for a, e1 in t.braces:
        for b, e2 in tp.braces:
            s += -e1 * e2 * cmath.log(1 - a * b)
    return complex(s)


def z_norm(t, tp) -> complex:
    return cmath.exp(log_z_norm(t, tp))
