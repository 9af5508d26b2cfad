"""Truncated Laurent series on the unit circle.

J(z; t, t') = gamma(z, t) / gamma(1/z, t') is expanded exactly by
convolving the two h-series; contour sampling (DFT) is kept separate and
only used for z-dependent products downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .symfun import ParamSeq, h_coeffs, shift_by_braces  # noqa: F401  (re-export)

MAX_ORDER = 4096
DEFAULT_ORDER = 64
DEFAULT_RADIUS = 0.3
_EPS = np.finfo(float).eps

# radii used when minimising Cauchy bounds
_RADII = np.exp(np.linspace(math.log(1e-4), math.log(1e4), 401))


def _gamma_log_max(t: ParamSeq, radius: float) -> float:
    return t.abs_series_bound(radius)


def cauchy_bound(t: ParamSeq, tp: ParamSeq, k: int) -> float:
    """Upper bound on |J_k(t, t')| from max |J| on circles: min_R M(R) R^-k."""
    best = math.inf
    neg_tp = -tp
    for R in _RADII:
        lm = _gamma_log_max(t, R) + _gamma_log_max(neg_tp, 1.0 / R)
        if not math.isfinite(lm):
            continue
        val = lm - k * math.log(R)
        if val < best:
            best = val
    return math.exp(best) if best < 700 else math.inf


def cauchy_bounds(t: ParamSeq, tp: ParamSeq, ks: np.ndarray) -> np.ndarray:
    """Vectorised :func:`cauchy_bound` over integer indices ``ks``."""
    neg_tp = -tp
    lm = np.array([_gamma_log_max(t, R) + _gamma_log_max(neg_tp, 1.0 / R) for R in _RADII])
    ok = np.isfinite(lm)
    logR = np.log(_RADII[ok])
    vals = lm[ok][None, :] - np.asarray(ks, dtype=float)[:, None] * logR[None, :]
    best = vals.min(axis=1)
    return np.exp(np.minimum(best, 700.0))


def _h_length(t: ParamSeq, tol: float = 1e-18) -> int:
    """Number of h-coefficients needed before they drop below ``tol``."""
    radii = _RADII[_RADII > 1.0001]
    logs = np.array([_gamma_log_max(t, R) for R in radii])
    n = 8
    while n < MAX_ORDER:
        # |h_n| <= min_R M(R) R^-n
        b = np.min(logs - n * np.log(radii))
        if b < math.log(tol):
            return n
        n = int(n * 1.25) + 1
    return MAX_ORDER


@dataclass(frozen=True)
class LaurentWindow:
    """Coefficients c_k for k = -N..N with an absolute error bound ``err``.

    ``decay`` = (C, r) is a fitted envelope |c_k| <= C r^|k| used only for
    reporting.
    """

    N: int
    coeffs: np.ndarray
    err: float = 0.0
    decay: tuple[float, float] | None = None

    def __post_init__(self):
        if len(self.coeffs) != 2 * self.N + 1:
            raise ValueError("coeffs must have 2N+1 entries")

    def __getitem__(self, k: int) -> complex:
        if abs(k) > self.N:
            return 0j
        return self.coeffs[k + self.N]

    def get(self, ks) -> np.ndarray:
        ks = np.asarray(ks)
        out = np.zeros(ks.shape, dtype=complex)
        inside = np.abs(ks) <= self.N
        out[inside] = self.coeffs[ks[inside] + self.N]
        return out

    @classmethod
    def unit(cls, N: int) -> "LaurentWindow":
        c = np.zeros(2 * N + 1, dtype=complex)
        c[N] = 1
        return cls(N, c, 0.0, (1.0, 1e-6))

    @classmethod
    def monomial(cls, N: int, k: int, value: complex = 1.0) -> "LaurentWindow":
        c = np.zeros(2 * N + 1, dtype=complex)
        c[k + N] = value
        return cls(N, c, 0.0, fit_decay(c, N))

    def to_json(self) -> dict:
        return {"N": self.N, "coeffs": [[c.real, c.imag] for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "LaurentWindow":
        N = int(data["N"])
        c = np.array([complex(re, im) for re, im in data["coeffs"]])
        return cls(N, c, 0.0, fit_decay(c, N))


def fit_decay(coeffs: np.ndarray, N: int) -> tuple[float, float]:
    """Least-squares envelope C r^|k| on the outer third, raised to cover all k."""
    ks = np.arange(-N, N + 1)
    mags = np.abs(coeffs)
    outer = np.abs(ks) >= (2 * N) // 3
    sel = outer & (mags > 1e-300)
    if sel.sum() >= 2 and np.ptp(np.abs(ks[sel])) > 0:
        slope = np.polyfit(np.abs(ks[sel]), np.log(mags[sel]), 1)[0]
        r = float(np.clip(math.exp(slope), 1e-6, 0.999))
    else:
        r = 0.5
    nz = mags > 0
    if not nz.any():
        return 0.0, r
    # log space: r^|k| underflows long before the coefficients do
    logC = float(np.max(np.log(mags[nz]) - np.abs(ks[nz]) * math.log(r)))
    return (math.exp(logC) if logC < 700 else math.inf), r


def j_coeffs(t, tp, N: int = DEFAULT_ORDER, cap: int = MAX_ORDER) -> LaurentWindow:
    """Laurent coefficients J_k(t, t') for |k| <= N.

    J_k = sum_m h_{k+m}(t) h_m(-t'), with the inner sum cut once the
    Cauchy envelope of the h-coefficients is below 1e-18.
    """
    if N > cap:
        raise ValueError(f"order {N} exceeds cap {cap}")
    t, tp = ParamSeq.of(t), ParamSeq.of(tp)
    L = N + max(_h_length(t), _h_length(-tp)) + 1
    ha = h_coeffs(t, L - 1)
    hb = h_coeffs(-tp, L - 1)
    full = np.convolve(ha, hb[::-1])  # index j <-> k = j - (L - 1)
    c = full[L - 1 - N : L + N]
    scale = max(1.0, float(np.sum(np.abs(ha)) * np.sum(np.abs(hb))))
    err = 1e-18 * scale + L * _EPS * scale
    return LaurentWindow(N, c, err, fit_decay(c, N))


def multiply(a: LaurentWindow, b: LaurentWindow) -> LaurentWindow:
    """Product truncated to the smaller window; error terms propagated."""
    N = min(a.N, b.N)
    full = np.convolve(a.coeffs, b.coeffs)
    mid = a.N + b.N
    c = full[mid - N : mid + N + 1]
    na, nb = np.sum(np.abs(a.coeffs)), np.sum(np.abs(b.coeffs))
    tail = 0.0
    for w, other in ((a, b), (b, a)):
        if w.decay is not None:
            C, r = w.decay
            tail += C * 2 * r ** (w.N + 1) / (1 - r) * float(np.max(np.abs(other.coeffs)))
    err = a.err * nb + b.err * na + a.err * b.err * (2 * N + 1) + tail
    return LaurentWindow(N, c, err, fit_decay(c, N))


def coeff_extract_dft(
    f: Callable[[complex], complex], k: int, P: int = 64, rho: float = 1.0
) -> tuple[complex, float]:
    """[z^k] f from P samples on |z| = rho.

    Returns (value, alias) where ``alias`` estimates the aliasing error from
    the size of the sampled spectrum in its outermost quarter.
    """
    if P < 4 * (abs(k) + 1):
        raise ValueError(f"P={P} too small for k={k}")
    w = np.exp(2j * np.pi * np.arange(P) / P)
    samples = np.array([f(rho * wj) for wj in w], dtype=complex)
    spec = np.fft.fft(samples) / P  # spec[j] = g_j, g_j = c_j rho^j (mod aliasing)
    value = spec[k % P] * rho ** (-k)
    band = np.abs(np.fft.fftfreq(P, 1.0 / P)) >= 3 * P // 8
    alias = float(np.max(np.abs(spec[band]))) * rho ** (-k) if band.any() else 0.0
    return complex(value), alias
