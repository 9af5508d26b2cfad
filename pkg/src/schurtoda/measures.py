"""Brute-force oracles: Schur and finite-temperature Schur measures by
enumeration of diagrams.

Nothing here touches the kernel or the J-series; independence from the
determinantal side is the point of the module.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .kernel import SigmaWeight
from .partitions import HalfInt, Partition, contains, enumerate_partitions, occupies
from .symfun import ParamSeq, schur_value, skew_schur_value, z_norm


@dataclass(frozen=True)
class MeasureTable:
    entries: dict
    mass: complex
    max_size: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "max_size": self.max_size,
                "mass": [self.mass.real, self.mass.imag],
                "entries": [
                    {"partition": lam.to_json(), "weight": [w.real, w.imag]}
                    for lam, w in self.entries.items()
                ],
            }
        )


@lru_cache(maxsize=65536)
def _schur(lam: Partition, t: ParamSeq) -> complex:
    return schur_value(lam, t)


def schur_weight(lam: Partition, t, tp) -> complex:
    t, tp = ParamSeq.of(t), ParamSeq.of(tp)
    return _schur(lam, t) * _schur(lam, tp) / z_norm(t, tp)


def schur_table(t, tp, N: int) -> MeasureTable:
    t, tp = ParamSeq.of(t), ParamSeq.of(tp)
    entries = {lam: schur_weight(lam, t, tp) for lam in enumerate_partitions(N)}
    return MeasureTable(entries, complex(sum(entries.values())), N)


def _as_twice(X: Iterable) -> list[int]:
    return [HalfInt.of(x).twice for x in X]


def correlation_bruteforce(X, t, tp, N: int = 16) -> complex:
    """P(X in S_0(lam)) summed over |lam| <= N."""
    xs = _as_twice(X)
    if len(xs) > 4:
        raise ValueError("at most 4 points")
    table = schur_table(t, tp, N)
    total = 0j
    for lam, w in table.entries.items():
        if all(occupies(lam, 0, x) for x in xs):
            total += w
    return total


def _mult_factor(lam: Partition, n: int, sigma: SigmaWeight, depth: int | None) -> float:
    # prod over x in S_0(lam) of (1 - sigma(x - n))
    if sigma.finitely_supported:
        support = [k2 for k2, _ in sigma.table]
        lowest = min(support, default=1)
        # rows reaching down to the lowest support point
        rows = max(lam.length, (1 - lowest) // 2 - n, 0)
    else:
        if depth is None:
            raise ValueError("sigma has infinite support: pass an explicit depth")
        rows = max(lam.length, depth)
    val = 1.0
    for i in range(rows):
        x2 = 2 * (lam[i] - i - 1) + 1
        val *= 1.0 - sigma(HalfInt(x2 - 2 * n))
    return val


def mult_stat_expectation(sigma: SigmaWeight, n: int, t, tp, N: int = 16, depth: int | None = None) -> complex:
    """E[prod_{x in S_0(lam)} (1 - sigma(x - n))] under the Schur measure.

    Exact product for finitely supported sigma; otherwise the first
    ``depth`` points of each configuration are used.
    """
    table = schur_table(t, tp, N)
    total = 0j
    for lam, w in table.entries.items():
        f = _mult_factor(lam, n, sigma, depth)
        if f != 0.0:
            total += w * f
    return total


def finite_temp_weight(lam: Partition, u: float, t, tp) -> complex:
    """Unnormalised sum_{mu in lam} u^|mu| s_{lam/mu}(t) s_{lam/mu}(t')."""
    if not 0 <= u < 1:
        raise ValueError("u must lie in [0, 1)")
    t, tp = ParamSeq.of(t), ParamSeq.of(tp)
    total = 0j
    for mu in enumerate_partitions(lam.size):
        if not contains(lam, mu):
            continue
        if u == 0 and mu.size > 0:
            continue
        total += u**mu.size * skew_schur_value(lam, mu, t) * skew_schur_value(lam, mu, tp)
    return total


@dataclass(frozen=True)
class FiniteTempTable:
    weights: dict
    norm: float
    max_size: int
    tail_estimate: float


def finite_temp_table(u: float, t, tp, N: int) -> FiniteTempTable:
    weights = {lam: finite_temp_weight(lam, u, t, tp) for lam in enumerate_partitions(N)}
    norm = sum(weights.values())
    top = sum(w for lam, w in weights.items() if lam.size == N)
    prev = sum(w for lam, w in weights.items() if lam.size == N - 1) if N > 0 else 0
    # geometric extrapolation of the per-size mass
    ratio = abs(top / prev) if prev else 0.0
    tail = abs(top) * ratio / (1 - ratio) if ratio < 1 else math.inf
    return FiniteTempTable(weights, complex(norm).real, N, tail / abs(norm))


def theta_norm(u: float) -> float:
    if not 0 < u < 1:
        raise ValueError("u must lie in (0, 1)")
    # u^(m^2/2) < 1e-17 once m^2 > 2 log(1e-17)/log(u)
    m_max = int(math.ceil(math.sqrt(2 * math.log(1e-17) / math.log(u)))) + 1
    return sum(u ** (m * m / 2) for m in range(-m_max, m_max + 1))


def theta_shift_pmf(u: float, c: int) -> float:
    return u ** (c * c / 2) / theta_norm(u)


def finite_temp_correlation_bruteforce(X, u: float, t_tilde, tp_tilde, N: int = 10, C: int = 6) -> float:
    """P(X in S_c(lam)) for lam ~ finite-temperature Schur, c ~ theta law."""
    xs = _as_twice(X)
    if len(xs) > 3:
        raise ValueError("at most 3 points")
    if u == 0:
        return complex(correlation_bruteforce(X, t_tilde, tp_tilde, N)).real
    table = finite_temp_table(u, t_tilde, tp_tilde, N)
    total = 0.0
    for c in range(-C, C + 1):
        pc = theta_shift_pmf(u, c)
        hit = sum(w for lam, w in table.weights.items() if all(occupies(lam, c, x) for x in xs))
        total += pc * complex(hit).real / table.norm
    return total


def gap_bruteforce(t, tp, n: int, N: int = 16) -> tuple[float, float]:
    """P(lam_1 <= n) over |lam| <= N, with the missing mass as a bound."""
    table = schur_table(t, tp, N)
    p = sum(w for lam, w in table.entries.items() if lam[0] <= n)
    return complex(p).real, abs(1 - table.mass)
