"""Verdict records for the two convention questions settled numerically:
which sigma_u reproduces the shift-mixed finite-temperature measure, and
whether the Fock matrix coefficient at charge n is tau_n or tau_{-n}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fock import fock_tau
from .fredholm import tau_n
from .kernel import DEFAULT_CUTOFF, KernelBuilder, SigmaWeight
from .measures import finite_temp_correlation_bruteforce
from .partitions import HalfInt
from .symfun import ParamSeq

SIGMA_CANDIDATES = ("fermi", "fermi_mirror", "bose")


@dataclass
class Verdict:
    question: str
    tolerance: float
    errors: dict
    verdict: str | None
    details: dict = field(default_factory=dict)

    @property
    def unique(self) -> bool:
        return self.verdict is not None

    def to_json(self) -> dict:
        return {
            "adjudication": self.question,
            "tolerance": self.tolerance,
            "errors": self.errors,
            "verdict": self.verdict,
            "details": self.details,
        }


def finite_temp_times(t_tilde, u: float) -> ParamSeq:
    """t_k = t~_k / (1 - u^k); for index 1 this is t~ / (1 - u)."""
    t_tilde = ParamSeq.of(t_tilde)
    return ParamSeq(tuple((k, v / (1 - u**k)) for k, v in t_tilde.entries))


def candidate_sigma(name: str, u: float) -> SigmaWeight:
    return {"fermi": SigmaWeight.fermi, "fermi_mirror": SigmaWeight.fermi_mirror, "bose": SigmaWeight.bose}[name](u)


def kernel_det(t, tp, sigma: SigmaWeight, X, cutoff: int = DEFAULT_CUTOFF) -> complex:
    """det K(x_i, x_j) with the k-sum cut at |k| <= cutoff.

    No envelope bound is attempted: two of the candidates are not summable.
    """
    pts = np.array([HalfInt.of(x).twice for x in X])
    span = int(np.max(np.abs(pts))) // 2 + cutoff + 2
    kb = KernelBuilder(t, tp, sigma, span, cutoff)
    return complex(np.linalg.det(kb.block(pts, pts)))


def adjudicate_sigma(
    u: float = 0.4,
    t_tilde=(0.2,),
    tp_tilde=(0.2,),
    X_sets=(("1/2",), ("1/2", "3/2")),
    N: int = 10,
    C: int = 6,
    tol: float = 1e-4,
    candidates=SIGMA_CANDIDATES,
) -> Verdict:
    """Compare det K for each candidate sigma_u with the mixed brute force."""
    t, tp = finite_temp_times(t_tilde, u), finite_temp_times(tp_tilde, u)
    bf = {",".join(X): finite_temp_correlation_bruteforce(list(X), u, t_tilde, tp_tilde, N=N, C=C) for X in X_sets}
    errors, values = {}, {}
    for name in candidates:
        sig = candidate_sigma(name, u)
        vals = {}
        for X in X_sets:
            d = kernel_det(t, tp, sig, X)
            d2 = kernel_det(t, tp, sig, X, 2 * DEFAULT_CUTOFF)
            vals[",".join(X)] = {"det": [d.real, d.imag], "cutoff_change": abs(d2 - d)}
        values[name] = vals
        errors[name] = max(abs(complex(*vals[k]["det"]) - bf[k]) for k in bf)
    hits = [name for name, e in errors.items() if e <= tol]
    details = {"bruteforce": bf, "candidates": values, "N": N, "C": C, "u": u}
    return Verdict("sigma_u", tol, errors, hits[0] if len(hits) == 1 else None, details)


def random_table_sigmas(count: int = 20, seed: int = 2024, half_width: int = 7) -> list[SigmaWeight]:
    """Random sigma with values in [0, 1] on {-7/2, ..., 7/2}."""
    rng = np.random.default_rng(seed)
    pts = range(-half_width, half_width + 1, 2)
    return [SigmaWeight.from_table({f"{k2}/2": float(v) for k2, v in zip(pts, rng.uniform(0, 1, len(pts)))}) for _ in range(count)]


def adjudicate_lemma_sign(
    t=(0.5,), tp=(0.5,), sigmas=None, ns=(-2, -1, 0, 1, 2), E_max: int = 12, tol: float = 1e-8
) -> Verdict:
    """Is <Gamma_+(-t) A_sigma Gamma_-(-t') v_n, v_n> equal to tau_n or tau_{-n}?"""
    sigmas = random_table_sigmas() if sigmas is None else sigmas
    worst = {"n": 0.0, "-n": 0.0}
    bounds = 0.0
    for sig in sigmas:
        for n in ns:
            f = fock_tau(t, tp, sig, n, E_max)
            for label, idx in (("n", n), ("-n", -n)):
                tv = tau_n(t, tp, sig, idx)
                worst[label] = max(worst[label], abs(f - tv.value))
                bounds = max(bounds, tv.truncation_bound)
    hits = [k for k, e in worst.items() if e <= tol]
    return Verdict(
        "fock_tau_index",
        tol,
        worst,
        hits[0] if len(hits) == 1 else None,
        {"cases": len(sigmas) * len(ns), "E_max": E_max, "max_tau_bound": bounds},
    )

