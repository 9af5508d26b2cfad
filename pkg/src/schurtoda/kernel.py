"""The deformed kernel K(x, y) = sum_k sigma(k) J_{x+k}(t,t') J_{-y-k}(-t,-t').

Points x, y, k all live on Z + 1/2; the J indices x + k and -y - k are
integers.  Everything is indexed by doubled values internally.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .partitions import HalfInt
from .series import LaurentWindow, cauchy_bounds, j_coeffs
from .symfun import ParamSeq

DEFAULT_CUTOFF = 48
DEFAULT_DIM = 24
_EPS = np.finfo(float).eps


class SigmaError(ValueError):
    pass


@dataclass(frozen=True)
class SigmaWeight:
    """A weight sigma on Z + 1/2.

    kinds
      ``indicator``    1 for k > 0, else 0
      ``fermi``        1 / (1 + u^k)
      ``fermi_mirror`` u^k / (1 + u^k), i.e. fermi reflected k -> -k
      ``bose``         1 / (1 - u^k); outside [0, 1], kept for comparison only
      ``table``        explicit values on finitely many points, 0 elsewhere
    """

    kind: str
    u: float | None = None
    table: tuple[tuple[int, float], ...] = field(default=())

    def __post_init__(self):
        if self.kind not in {"indicator", "fermi", "fermi_mirror", "bose", "table"}:
            raise SigmaError(f"unknown sigma kind {self.kind!r}")
        if self.kind in {"fermi", "fermi_mirror", "bose"}:
            if self.u is None or not 0 < self.u < 1:
                raise SigmaError(f"{self.kind} needs 0 < u < 1")
        if self.kind == "table":
            clean = {}
            for k2, v in self.table:
                k2 = int(k2)
                if k2 % 2 == 0:
                    raise SigmaError("table keys are doubled half-integers (odd)")
                clean[k2] = float(v)
            object.__setattr__(self, "table", tuple(sorted((k, v) for k, v in clean.items() if v != 0)))

    @classmethod
    def indicator(cls) -> "SigmaWeight":
        return cls("indicator")

    @classmethod
    def zero(cls) -> "SigmaWeight":
        return cls("table")

    @classmethod
    def fermi(cls, u: float) -> "SigmaWeight":
        return cls("fermi", u)

    @classmethod
    def fermi_mirror(cls, u: float) -> "SigmaWeight":
        return cls("fermi_mirror", u)

    @classmethod
    def bose(cls, u: float) -> "SigmaWeight":
        return cls("bose", u)

    @classmethod
    def from_table(cls, values: dict) -> "SigmaWeight":
        """``values`` maps half-integers (HalfInt, float or "k/2") to weights."""
        return cls("table", table=tuple((HalfInt.of(k).twice, v) for k, v in values.items()))

    @property
    def is_standard(self) -> bool:
        """Values in [0, 1] with summable negative tail."""
        if self.kind == "table":
            return all(0.0 <= v <= 1.0 for _, v in self.table)
        return self.kind in {"indicator", "fermi"}

    @property
    def finitely_supported(self) -> bool:
        return self.kind == "table"

    def __call__(self, k) -> float:
        return float(self.values(np.array([HalfInt.of(k).twice]))[0])

    def values(self, twice_k: np.ndarray) -> np.ndarray:
        """sigma at the doubled points ``twice_k`` (vectorised)."""
        k = np.asarray(twice_k, dtype=float) / 2.0
        if self.kind == "indicator":
            return (k > 0).astype(float)
        if self.kind == "table":
            d = dict(self.table)
            return np.array([d.get(int(x), 0.0) for x in np.asarray(twice_k).ravel()]).reshape(k.shape)
        lu = math.log(self.u)
        with np.errstate(over="ignore"):
            if self.kind == "fermi":
                return 0.5 * (1.0 + np.tanh(-0.5 * k * lu))
            if self.kind == "fermi_mirror":
                return 0.5 * (1.0 + np.tanh(0.5 * k * lu))
            # bose: 1/(1 - u^k)
            return -1.0 / np.expm1(k * lu)

    def negative_extent(self, tol: float = 1e-30) -> int:
        """An integer D with |sigma(k)| <= tol for all k < -D."""
        if self.kind == "indicator":
            return 0
        if self.kind == "table":
            neg = [-k2 for k2, _ in self.table if k2 < 0]
            return (max(neg) + 1) // 2 if neg else 0
        if self.kind == "fermi_mirror":
            raise SigmaError("fermi_mirror has a non-summable negative tail")
        # fermi and bose both decay like u^|k| for k -> -inf
        return int(math.ceil(math.log(tol) / math.log(self.u))) + 1

    def max_abs(self) -> float:
        if self.kind == "table":
            return max((abs(v) for _, v in self.table), default=0.0)
        if self.kind == "bose":
            return 1.0 / (1.0 - math.sqrt(self.u))
        return 1.0

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.u is not None:
            out["u"] = self.u
        if self.kind == "table":
            out["table"] = {f"{k}/2": v for k, v in self.table}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SigmaWeight":
        kind = data.get("kind", "table")
        if kind == "table":
            return cls.from_table(data.get("table", {}))
        return cls(kind, data.get("u"))


def sigma_eval(sigma: SigmaWeight, k) -> float:
    return sigma(k)


def _index_window(n: int, M: int, cutoff: int) -> int:
    return abs(n) + M + cutoff + 2


@dataclass
class _AbsJ:
    """|J_i| envelopes on a wide integer range: computed values + error inside
    the computed window, Cauchy bounds outside."""

    lo: int
    a: np.ndarray  # for J(t, t')
    b: np.ndarray  # for J(-t, -t')

    def cum(self, arr: np.ndarray) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum(arr)])

    def range_sum(self, cum: np.ndarray, i0, i1):
        """sum_{i0 <= i <= i1} on the stored range (vectorised over arrays)."""
        i0 = np.clip(np.asarray(i0) - self.lo, 0, len(cum) - 1)
        i1 = np.clip(np.asarray(i1) - self.lo + 1, 0, len(cum) - 1)
        return np.where(i1 > i0, cum[i1] - cum[np.minimum(i0, i1)], 0.0)


def _abs_envelopes(t: ParamSeq, tp: ParamSeq, J: LaurentWindow, Jm: LaurentWindow, span: int) -> _AbsJ:
    idx = np.arange(-span, span + 1)
    out = []
    for tt, ttp, W in ((t, tp, J), (-t, -tp, Jm)):
        env = cauchy_bounds(tt, ttp, idx)
        inside = np.abs(idx) <= W.N
        vals = env.copy()
        vals[inside] = np.minimum(np.abs(W.get(idx[inside])) + W.err, env[inside])
        out.append(vals)
    return _AbsJ(-span, out[0], out[1])


@dataclass(frozen=True)
class KernelMatrix:
    """K restricted to {n + 1/2, ..., n + M - 1/2}.

    ``tail_bound`` bounds (entrywise l1, hence trace norm) the difference
    between this matrix, zero-padded, and K on all of l2{n + 1/2, ...};
    ``norm_bound`` bounds the trace norm of K on l2{n + 1/2, ...}.
    """

    n: int
    M: int
    entries: np.ndarray
    tail_bound: float
    norm_bound: float
    cutoff: int

    @property
    def points(self) -> list[HalfInt]:
        return [HalfInt(2 * (self.n + a) + 1) for a in range(self.M)]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "M": self.M,
            "cutoff": self.cutoff,
            "tail_bound": self.tail_bound,
            "norm_bound": self.norm_bound,
            "points": [str(p) for p in self.points],
            "entries": [[[z.real, z.imag] for z in row] for row in self.entries],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        pts = [str(p) for p in self.points]
        w.writerow(["x\\y"] + pts)
        for p, row in zip(pts, self.entries):
            w.writerow([p] + [f"{complex(z).real!r}{complex(z).imag:+}j" for z in row])
        return buf.getvalue()

    def dumps(self) -> str:
        return json.dumps(self.to_json())


class KernelBuilder:
    """Shared J-series and envelopes for repeated kernel evaluations at fixed
    (t, t', sigma)."""

    def __init__(self, t, tp, sigma: SigmaWeight, span: int, cutoff: int = DEFAULT_CUTOFF):
        self.t, self.tp = ParamSeq.of(t), ParamSeq.of(tp)
        self.sigma = sigma
        self.cutoff = cutoff
        self.span = span
        self.J = j_coeffs(self.t, self.tp, span)
        self.Jm = j_coeffs(-self.t, -self.tp, span)

    def block(self, xs2: np.ndarray, ys2: np.ndarray, ks2: np.ndarray | None = None) -> np.ndarray:
        """Entries K(x, y) summed over the doubled points ``ks2``."""
        if ks2 is None:
            ks2 = _k_points(self.cutoff)
        xs2, ys2 = np.asarray(xs2), np.asarray(ys2)
        # (x + k) and (-y - k) are integers since x, y, k are half-integers
        A = self.J.get((xs2[:, None] + ks2[None, :]) // 2)
        B = self.Jm.get((-ys2[None, :] - ks2[:, None]) // 2)
        s = self.sigma.values(ks2)
        return (A * s[None, :]) @ B


def _k_points(cutoff: int) -> np.ndarray:
    # all k in Z + 1/2 with |k| <= cutoff
    return np.arange(-2 * cutoff + 1, 2 * cutoff, 2)


def kernel_entry(t, tp, sigma: SigmaWeight, x, y, cutoff: int = DEFAULT_CUTOFF) -> tuple[complex, float]:
    """K(x, y) truncated to |k| <= cutoff, with a bound on the dropped terms."""
    x2, y2 = HalfInt.of(x).twice, HalfInt.of(y).twice
    span = (max(abs(x2), abs(y2)) + 1) // 2 + cutoff + 2
    kb = KernelBuilder(t, tp, sigma, span, cutoff)
    val = kb.block(np.array([x2]), np.array([y2]))[0, 0]
    env = _abs_envelopes(kb.t, kb.tp, kb.J, kb.Jm, _envelope_span(span, sigma))
    ks2 = _outer_k(cutoff, env, sigma)
    s = np.abs(sigma.values(ks2))
    ia = (x2 + ks2) // 2 - env.lo
    ib = (-y2 - ks2) // 2 - env.lo
    ok = (ia >= 0) & (ia < len(env.a)) & (ib >= 0) & (ib < len(env.b))
    resid = float(np.sum(s[ok] * env.a[ia[ok]] * env.b[ib[ok]]))
    val_err = float(np.sum(np.abs(sigma.values(_k_points(cutoff)))) * 4 * (kb.J.err + kb.Jm.err))
    return complex(val), resid + val_err


def _envelope_span(span: int, sigma: SigmaWeight) -> int:
    return span + sigma.negative_extent() + 64


def _outer_k(cutoff: int, env: _AbsJ, sigma: SigmaWeight) -> np.ndarray:
    kmax = -env.lo - 1
    ks = np.arange(-2 * kmax + 1, 2 * kmax, 2)
    return ks[np.abs(ks) > 2 * cutoff]


def kernel_matrix(
    t, tp, sigma: SigmaWeight, n: int, M: int = DEFAULT_DIM, cutoff: int = DEFAULT_CUTOFF
) -> KernelMatrix:
    if M < 1:
        raise ValueError("M must be positive")
    span = _index_window(n, M, cutoff)
    kb = KernelBuilder(t, tp, sigma, span, cutoff)
    pts = 2 * (n + np.arange(M)) + 1
    K = kb.block(pts, pts)
    tail, norm = _window_bounds(kb, n, M)
    return KernelMatrix(n, M, K, tail, norm, cutoff)


def _window_bounds(kb: KernelBuilder, n: int, M: int) -> tuple[float, float]:
    """(l1 bound of everything discarded, l1 bound of K on l2{>n})."""
    sigma = kb.sigma
    span = _envelope_span(kb.span, sigma)
    env = _abs_envelopes(kb.t, kb.tp, kb.J, kb.Jm, span)
    ca, cb = env.cum(env.a), env.cum(env.b)
    kmax = span - abs(n) - M - 2
    ks2 = np.arange(-2 * kmax + 1, 2 * kmax, 2)
    s = np.abs(sigma.values(ks2))
    top = span  # beyond this the envelopes are negligible
    kx = (ks2 + 1) // 2  # x + k = n + a + (k + 1/2)
    # rows: x = n + 1/2 + a ; x + k = n + a + kx
    a_all = env.range_sum(ca, n + kx, top)
    a_win = env.range_sum(ca, n + kx, n + M - 1 + kx)
    # cols: -y - k = -n - b - kx
    b_all = env.range_sum(cb, -top, -n - kx)
    b_win = env.range_sum(cb, -n - M + 1 - kx, -n - kx)
    inside = np.abs(ks2) <= 2 * kb.cutoff
    outside_window = float(np.sum(s * (a_all * b_all - a_win * b_win)))
    dropped_k = float(np.sum((s * a_win * b_win)[~inside]))
    full = float(np.sum(s * a_all * b_all))
    # rounding in J and in the k-sum
    val_err = M * float(np.sum(s[inside] * (a_win + b_win)[inside])) * (kb.J.err + kb.Jm.err)
    return max(outside_window, 0.0) + dropped_k + val_err, full
