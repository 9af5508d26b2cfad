"""Bilinear Hirota equations for tau_n(t, t'; sigma), checked numerically.

Both sides are Laurent series in z.  They are sampled on |z| = rho, one
full tau pipeline per sample, and the wanted coefficient is read off a
DFT.  P doubles until two successive extractions agree.
"""

from __future__ import annotations

import cmath
import csv
import hashlib
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .fredholm import NumericError, tau_conjugated, tau_n
from .kernel import DEFAULT_CUTOFF, DEFAULT_DIM, SigmaWeight
from .symfun import ParamSeq, z_norm

DEFAULT_RADIUS = 0.3
DEFAULT_P = 64
MAX_P = 1024
AGREE_TOL = 1e-9
WORKERS_ENV = "SCHURTODA_WORKERS"

# "literal": tau_n exactly as indexed in the equation; "negated": the
# family n -> tau_{-n}, i.e. the Fock matrix coefficient at charge n.
READINGS = ("literal", "negated")

WHICH = ("t_plus", "t_minus", "tprime_plus", "tprime_minus", "none")


class HirotaError(ArithmeticError):
    pass


def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def tau_shifted(
    t,
    tp,
    sigma: SigmaWeight,
    n: int,
    z0: complex,
    which: str = "none",
    M: int = DEFAULT_DIM,
    cutoff: int = DEFAULT_CUTOFF,
    route: str = "direct",
):
    """tau_n with t or t' replaced by its {z0}-shift.  Returns a TauValue."""
    if which not in WHICH:
        raise ValueError(f"which must be one of {WHICH}")
    if abs(z0) >= 1:
        raise HirotaError(f"|z0| = {abs(z0)} outside the unit disc")
    t, tp = ParamSeq.of(t), ParamSeq.of(tp)
    if z0 != 0 and which != "none":
        sign = 1 if which.endswith("plus") else -1
        if which.startswith("tprime"):
            tp = tp.shift(z0, sign)
        else:
            t = t.shift(z0, sign)
    fn = tau_conjugated if route == "conjugated" else tau_n
    return fn(t, tp, sigma, n, M, cutoff)


@dataclass
class HirotaCase:
    m: int
    l: int
    s: ParamSeq
    sp: ParamSeq
    sigma: SigmaWeight
    t: ParamSeq = field(default_factory=ParamSeq)
    tp: ParamSeq = field(default_factory=ParamSeq)
    rho: float = DEFAULT_RADIUS
    P: int = DEFAULT_P
    lhs: complex | None = None
    rhs: complex | None = None
    residual: float | None = None
    bound: float | None = None
    reading: str = "negated"
    rhs_second: str = "tprime"

    def __post_init__(self):
        for name in ("s", "sp", "t", "tp"):
            setattr(self, name, ParamSeq.of(getattr(self, name)))
        if self.reading not in READINGS:
            raise ValueError(f"reading must be one of {READINGS}")
        if self.rhs_second not in ("tprime", "t"):
            raise ValueError("rhs_second must be 'tprime' or 't'")
        if self.P < 4 * (abs(self.l - self.m) + 1):
            raise ValueError("P too small for the requested coefficient")

    def key(self) -> str:
        blob = json.dumps(
            [self.m, self.l, self.s.to_json(), self.sp.to_json(), self.sigma.to_json(), self.t.to_json(), self.tp.to_json()],
            sort_keys=True,
        )
        return hashlib.sha1(blob.encode()).hexdigest()[:12]

    def to_json(self) -> dict:
        c = lambda v: None if v is None else [v.real, v.imag]  # noqa: E731
        return {
            "m": self.m,
            "l": self.l,
            "s": self.s.to_json(),
            "sp": self.sp.to_json(),
            "sigma": self.sigma.to_json(),
            "t": self.t.to_json(),
            "tp": self.tp.to_json(),
            "rho": self.rho,
            "P": self.P,
            "lhs": c(self.lhs),
            "rhs": c(self.rhs),
            "residual": self.residual,
            "bound": self.bound,
            "reading": self.reading,
            "rhs_second": self.rhs_second,
        }


def _gamma_inv(z: complex, s: ParamSeq, c: float) -> complex:
    # gamma(1/z, c s) for finitely supported s
    return cmath.exp(sum(c * v * z ** (-k) for k, v in s.entries))


class _Side:
    """One side of the equation as a function of z, with memoised samples."""

    def __init__(self, case: HirotaCase, side: str, M: int, cutoff: int, trace: list | None = None):
        self.case, self.side, self.M, self.cutoff = case, side, M, cutoff
        self.cache: dict[tuple[int, int], tuple[complex, float]] = {}
        self.trace = trace

    def _tau(self, t, tp, n):
        c = self.case
        idx = -n if c.reading == "negated" else n
        if c.sigma.kind == "table" and not c.sigma.table:
            return complex(z_norm(t, tp)), 0.0
        tv = tau_n(t, tp, c.sigma, idx, self.M, self.cutoff)
        if self.trace is not None:
            self.trace.append((t, tp, c.sigma, idx, tv))
        return tv.value, tv.truncation_bound

    def value(self, z: complex) -> tuple[complex, float]:
        c = self.case
        t, tp, s, sp = c.t, c.tp, c.s, c.sp
        if self.side == "lhs":
            g = _gamma_inv(z, sp, -2)
            a, ea = self._tau(t + s, (tp + sp).shift(z, 1), c.m + 1)
            b, eb = self._tau(t - s, (tp - sp).shift(z, -1), c.l)
        else:
            second = tp if c.rhs_second == "tprime" else t
            g = _gamma_inv(z, s, 2)
            a, ea = self._tau((t + s).shift(z, -1), second + sp, c.m)
            b, eb = self._tau((t - s).shift(z, 1), second - sp, c.l + 1)
        return g * a * b, abs(g) * (abs(a) * eb + abs(b) * ea + ea * eb)

    def samples(self, P: int) -> tuple[np.ndarray, float]:
        # point j of a P-grid is point j * (Q / P) of any finer Q-grid
        need = []
        for j in range(P):
            frac = math.gcd(j, P)
            key = (j // frac, P // frac)
            if key not in self.cache:
                need.append(key)
        rho = self.case.rho

        def run(key):
            num, den = key
            return key, self.value(rho * cmath.exp(2j * math.pi * num / den))

        workers = _workers()
        if workers > 1 and len(need) > 1:
            with ThreadPoolExecutor(workers) as ex:
                results = list(ex.map(run, need))
        else:
            results = [run(k) for k in need]
        for key, val in results:
            self.cache[key] = val
        vals, errs = [], []
        for j in range(P):
            frac = math.gcd(j, P)
            v, e = self.cache[(j // frac, P // frac)]
            vals.append(v)
            errs.append(e)
        return np.array(vals), max(errs)


def _extract(samples: np.ndarray, k: int, rho: float) -> tuple[complex, float]:
    P = len(samples)
    spec = np.fft.fft(samples) / P
    band = np.abs(np.fft.fftfreq(P, 1.0 / P)) >= 3 * P // 8
    alias = float(np.max(np.abs(spec[band]))) * rho ** (-k)
    return complex(spec[k % P] * rho ** (-k)), alias


def _coefficient(side: _Side, k: int, P: int, rho: float) -> tuple[complex, float, int]:
    """[z^k] with P doubling until two extractions agree to AGREE_TOL."""
    vals, err = side.samples(P)
    prev, alias = _extract(vals, k, rho)
    while P < MAX_P:
        P *= 2
        vals, err = side.samples(P)
        cur, alias = _extract(vals, k, rho)
        if abs(cur - prev) <= AGREE_TOL:
            return cur, err * rho ** (-k) + alias, P
        prev = cur
    raise HirotaError(f"DFT extraction of [z^{k}] did not settle by P = {MAX_P}; reduce rho")


def hirota_residual(
    case: HirotaCase, M: int = DEFAULT_DIM, cutoff: int = DEFAULT_CUTOFF, trace: list | None = None
) -> HirotaCase:
    """Fill lhs, rhs, residual and bound of ``case``.

    lhs = [z^(l-m)] gamma(1/z, -2s') tau_{m+1}(t+s, t'+s'+{z}) tau_l(t-s, t'-s'-{z})
    rhs = [z^(m-l)] gamma(1/z, 2s) tau_m(t+s-{z}, t'+s') tau_{l+1}(t-s+{z}, t'-s')

    With ``reading="negated"`` every tau_k above is evaluated as tau_{-k}.
    If ``trace`` is a list, each (t, t', sigma, index, TauValue) used is
    appended to it.
    """
    for seq in (case.s, case.sp):
        if seq.braces:
            raise ValueError("s and s' must be finitely supported")
    try:
        lhs, bl, P1 = _coefficient(_Side(case, "lhs", M, cutoff, trace), case.l - case.m, case.P, case.rho)
        rhs, br, P2 = _coefficient(_Side(case, "rhs", M, cutoff, trace), case.m - case.l, case.P, case.rho)
    except NumericError as exc:
        raise HirotaError(str(exc)) from exc
    return replace(case, lhs=lhs, rhs=rhs, residual=abs(lhs - rhs), bound=bl + br, P=max(P1, P2))


def default_grid(seed: int = 7, reading: str = "negated", rhs_second: str = "tprime") -> list[HirotaCase]:
    """m, l in {-1, 0, 1} x sigma in {0, indicator, random table}: 27 cases.

    s and s' live on indices {1, 2} with magnitudes <= 0.1, drawn from a
    fixed seed; t = t' = (0.5).
    """
    rng = np.random.default_rng(seed)
    table = {f"{k2}/2": float(v) for k2, v in zip(range(-7, 8, 2), rng.uniform(0, 1, 8))}
    sigmas = [SigmaWeight.zero(), SigmaWeight.indicator(), SigmaWeight.from_table(table)]
    cases = []
    for sigma in sigmas:
        for m in (-1, 0, 1):
            for l in (-1, 0, 1):
                s = ParamSeq.of({1: complex(*rng.uniform(-0.07, 0.07, 2)), 2: complex(*rng.uniform(-0.07, 0.07, 2))})
                sp = ParamSeq.of({1: complex(*rng.uniform(-0.07, 0.07, 2)), 2: complex(*rng.uniform(-0.07, 0.07, 2))})
                pl = ParamSeq.of([0.5])
                cases.append(HirotaCase(m, l, s, sp, sigma, pl, pl, reading=reading, rhs_second=rhs_second))
    return cases


def hirota_suite(cases: list[HirotaCase] | None = None, **kw) -> list[HirotaCase]:
    cases = default_grid() if cases is None else cases
    return [hirota_residual(c, **kw) for c in cases]


def suite_summary(results: list[HirotaCase]) -> dict:
    if not results:
        return {"cases": 0, "max_residual": None, "worst": None}
    worst = max(results, key=lambda c: c.residual)
    return {"cases": len(results), "max_residual": worst.residual, "worst": worst.to_json()}


def suite_csv(results: list[HirotaCase]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["m", "l", "params", "residual", "bound"])
    for c in results:
        w.writerow([c.m, c.l, c.key(), f"{c.residual:.3e}", f"{c.bound:.3e}"])
    return buf.getvalue()
