"""Fredholm determinants det(1 - K) on l2{n + 1/2, n + 3/2, ...} and the
tau-functions tau_n(t, t'; sigma) = Z_{t,t'} det(1 - K_{t,t',sigma}).

Two independent routes are provided: the direct truncation of K, and the
conjugated operator sigma(. - n) K_1^T obtained by cycling the Hankel
factors (det(1 + AB) = det(1 + BA)).  They share only the J-series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .kernel import (
    DEFAULT_CUTOFF,
    DEFAULT_DIM,
    KernelBuilder,
    SigmaError,
    SigmaWeight,
    _abs_envelopes,
    _envelope_span,
    kernel_matrix,
)
from .symfun import ParamSeq, log_z_norm

_EPS = np.finfo(float).eps


class NumericError(ArithmeticError):
    pass


@dataclass(frozen=True)
class TauValue:
    value: complex
    truncation_bound: float
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "value_re": self.value.real,
            "value_im": self.value.imag,
            "bound": self.truncation_bound,
            "params": self.params,
        }


def _params(t, tp, sigma, n, M, cutoff, route) -> dict:
    return {
        "t": ParamSeq.of(t).to_json(),
        "tp": ParamSeq.of(tp).to_json(),
        "sigma": sigma.to_json(),
        "n": n,
        "M": M,
        "cutoff": cutoff,
        "route": route,
    }


def _check_sigma(sigma: SigmaWeight, allow_nonstandard: bool):
    if not sigma.is_standard and not allow_nonstandard:
        raise SigmaError(f"sigma {sigma.kind} is outside [0,1] or not summable; pass allow_nonstandard=True")


def det_perturbation_bound(diff_norm: float, norm_a: float, norm_b: float) -> float:
    """|det(1-A) - det(1-B)| <= |A-B|_1 exp(1 + |A|_1 + |B|_1)."""
    if diff_norm == 0:
        return 0.0
    expo = 1 + norm_a + norm_b
    if expo > 700:
        return math.inf
    return diff_norm * math.exp(expo)


def _det(mat: np.ndarray, context: dict) -> complex:
    d = complex(np.linalg.det(mat))
    if not np.isfinite(d.real) or not np.isfinite(d.imag):
        raise NumericError(f"non-finite determinant for {context}")
    return d


def det_with_bound(mat: np.ndarray, tail: float, norm: float, context: dict) -> tuple[complex, float]:
    """det(mat) and a bound on |det(mat) - det(1 - K_exact)|.

    ``tail`` bounds the trace norm of the discarded part of K and ``norm``
    the trace norm of K.  Two estimates are combined: the absolute one from
    :func:`det_perturbation_bound`, and the relative one
    |det(1-B-E) - det(1-B)| <= |det(1-B)| expm1(|E|_1 / s_min(1-B)).
    LU rounding is folded in as a backward perturbation of size ~ M^2 eps |mat|.
    """
    d = _det(mat, context)
    m = mat.shape[0]
    svals = np.linalg.svd(mat, compute_uv=False)
    s_min, s_max = float(svals[-1]), float(svals[0])
    rounding = 8 * m * m * _EPS * s_max
    hadamard = rounding * float(np.prod(np.maximum(np.linalg.norm(mat, axis=1), 1.0)))
    crude = det_perturbation_bound(tail, norm, norm) + hadamard
    if s_min > 0:
        ratio = (tail + rounding) / s_min
        rel = abs(d) * math.expm1(ratio) if ratio < 700 else math.inf
        return d, min(crude, rel)
    return d, crude


def fredholm_det(t, tp, sigma: SigmaWeight, n: int, M: int = DEFAULT_DIM, cutoff: int = DEFAULT_CUTOFF) -> tuple[complex, float]:
    """det(1 - K) on l2{n + 1/2, ...}, truncated to M points, with a bound."""
    km = kernel_matrix(t, tp, sigma, n, M, cutoff)
    mat = np.eye(M) - km.entries
    return det_with_bound(mat, km.tail_bound, km.norm_bound, {"n": n, "M": M})


def tau_n(
    t,
    tp,
    sigma: SigmaWeight,
    n: int,
    M: int = DEFAULT_DIM,
    cutoff: int = DEFAULT_CUTOFF,
    allow_nonstandard: bool = False,
) -> TauValue:
    """Z_{t,t'} det(1 - K_{t,t',sigma}) on l2{n + 1/2, ...}."""
    _check_sigma(sigma, allow_nonstandard)
    lz = log_z_norm(t, tp)
    if lz.real > 700:
        raise NumericError(f"Z_{{t,t'}} overflows (log Z = {lz})")
    Z = np.exp(lz)
    d, bound = fredholm_det(t, tp, sigma, n, M, cutoff)
    return TauValue(complex(Z * d), abs(Z) * bound, _params(t, tp, sigma, n, M, cutoff, "direct"))


def gap_probability(t, tp, n: int, M: int = DEFAULT_DIM, cutoff: int = DEFAULT_CUTOFF) -> tuple[float, float]:
    """P(lam_1 <= n) = det(1 - K_{t,t'}) on l2{n + 1/2, ...}; real parameters."""
    t, tp = ParamSeq.of(t), ParamSeq.of(tp)
    if not (t.is_real() and tp.is_real()):
        raise ValueError("gap_probability needs real parameters")
    d, bound = fredholm_det(t, tp, SigmaWeight.indicator(), n, M, cutoff)
    return d.real, bound


def _conjugated_window(sigma: SigmaWeight, n: int, M: int) -> np.ndarray:
    """Doubled points a where sigma(a - n) is kept."""
    if sigma.finitely_supported:
        return np.array([k2 + 2 * n for k2, _ in sigma.table], dtype=int)
    depth = min(sigma.negative_extent(1e-18), M)
    lo = n - depth
    return 2 * (lo + np.arange(2 * M)) + 1


def tau_conjugated(
    t,
    tp,
    sigma: SigmaWeight,
    n: int,
    M: int = DEFAULT_DIM,
    cutoff: int = DEFAULT_CUTOFF,
    allow_nonstandard: bool = False,
) -> TauValue:
    """Z det(1 - sigma(. - n) H-check 1_{>0} H) on l2(Z + 1/2).

    (H-check 1_{>0} H)(a, b) = K_1(b, a) with K_1 the sigma = indicator
    kernel; for finitely supported sigma only the rows on the support of
    sigma(. - n) are non-zero, so the determinant is an exact principal
    minor.
    """
    _check_sigma(sigma, allow_nonstandard)
    t, tp = ParamSeq.of(t), ParamSeq.of(tp)
    lz = log_z_norm(t, tp)
    if lz.real > 700:
        raise NumericError(f"Z_{{t,t'}} overflows (log Z = {lz})")
    Z = np.exp(lz)
    params = _params(t, tp, sigma, n, M, cutoff, "conjugated")
    win = _conjugated_window(sigma, n, M)
    if len(win) == 0:
        return TauValue(complex(Z), 0.0, params)
    span = int(np.max(np.abs(win))) // 2 + cutoff + 2
    kb = KernelBuilder(t, tp, SigmaWeight.indicator(), span, cutoff)
    K1 = kb.block(win, win)
    s = sigma.values(win - 2 * n)
    op = s[:, None] * K1.T
    mat = np.eye(len(win)) - op
    tail, norm = _conjugated_bounds(kb, sigma, n, win)
    d, bound = det_with_bound(mat, tail, norm, params)
    return TauValue(complex(Z * d), abs(Z) * bound, params)


def _conjugated_bounds(kb: KernelBuilder, sigma: SigmaWeight, n: int, win: np.ndarray) -> tuple[float, float]:
    """Entrywise l1 bounds for the conjugated operator.

    Row a, column b carries |sigma(a - n)| |K_1(b, a)| and
    |K_1(b, a)| <= sum_{k > 0} |J_{b+k}| |J'_{-a-k}|.
    """
    span = _envelope_span(kb.span, sigma)
    env = _abs_envelopes(kb.t, kb.tp, kb.J, kb.Jm, span)
    lim = span - 2
    a2 = np.arange(-2 * lim + 1, 2 * lim, 2)
    sig = np.abs(sigma.values(a2 - 2 * n))
    kpos = np.arange(1, 2 * lim, 2)
    inwin = np.isin(a2, win)
    wmin, wmax = (int(win.min()), int(win.max())) if len(win) else (0, 0)
    ca = env.cum(env.a)
    # columns whose rows all vanish can be dropped exactly (block triangular)
    live_below = bool(np.any(sig[a2 < wmin]))
    live_above = bool(np.any(sig[a2 > wmax]))
    total_rows = 0.0
    dropped = 0.0
    full = 0.0
    for idx in np.nonzero(sig)[0]:
        a = a2[idx]
        jj = (-a - kpos) // 2 - env.lo  # position of J'_{-a-k}
        ok = (jj >= 0) & (jj < len(env.b))
        bvals = env.b[jj[ok]]
        kk = (kpos[ok] + 1) // 2  # b + k = (b + 1/2) + (k - 1/2)
        col_all = env.range_sum(ca, env.lo, -env.lo) * np.ones_like(bvals)
        col_win = env.range_sum(ca, (wmin + 1) // 2 + kk - 1, (wmax + 1) // 2 + kk - 1)
        col_out = np.zeros_like(bvals)
        if live_above:
            col_out += env.range_sum(ca, (wmax + 1) // 2 + kk, -env.lo)
        if live_below:
            col_out += env.range_sum(ca, env.lo, (wmin + 1) // 2 + kk - 2)
        row_all = float(np.sum(bvals * col_all))
        # k beyond the cutoff is dropped inside the window
        beyond = kpos[ok] > 2 * kb.cutoff
        row_cut = float(np.sum((bvals * col_win)[beyond]))
        full += sig[idx] * row_all
        if inwin[idx]:
            outside_cols = 0.0 if sigma.finitely_supported else float(np.sum(bvals * col_out))
            dropped += sig[idx] * (outside_cols + row_cut)
        else:
            total_rows += sig[idx] * row_all
    val_err = float(np.sum(np.abs(sigma.values(win - 2 * n)))) * len(win) * (kb.J.err + kb.Jm.err) * 4
    return total_rows + dropped + val_err, full
