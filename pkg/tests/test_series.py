import math
import warnings

import numpy as np
import pytest

from schurtoda.series import (
    LaurentWindow,
    cauchy_bounds,
    coeff_extract_dft,
    fit_decay,
    j_coeffs,
    multiply,
)
from schurtoda.symfun import ParamSeq


def bessel_j(k: int, x: float, terms: int = 40) -> float:
    # power series; J_{-k} = (-1)^k J_k
    a = abs(k)
    val = sum((-1) ** m * (x / 2) ** (2 * m + a) / (math.factorial(m) * math.factorial(m + a)) for m in range(terms))
    return (-1) ** a * val if k < 0 else val


def test_bessel_values():
    W = j_coeffs([0.5], [0.5], 10)
    assert abs(W[0] - 0.7651976865579666) < 1e-12
    for k in range(-10, 11):
        assert abs(W[k] - bessel_j(k, 1.0)) < 1e-12


def test_cauchy_bounds_dominate():
    t, tp = ParamSeq.of([0.3, 0.1]), ParamSeq.of([0.2, -0.1j])
    W = j_coeffs(t, tp, 20)
    ks = np.arange(-20, 21)
    b = cauchy_bounds(t, tp, ks)
    assert np.all(np.abs(W.get(ks)) <= b * (1 + 1e-12))


def test_j_at_zero_is_delta():
    W = j_coeffs([], [], 5)
    assert W[0] == 1
    assert all(W[k] == 0 for k in range(-5, 6) if k)


def test_j_with_braces():
    # J(z) = gamma(z, {a}) = 1/(1 - a z)
    W = j_coeffs(ParamSeq().shift(0.4, 1), [], 8)
    for k in range(9):
        assert abs(W[k] - 0.4**k) < 1e-14
    assert abs(W[-1]) < 1e-15


def test_dft_extraction():
    val, alias = coeff_extract_dft(lambda z: np.exp(z), 3, P=64, rho=0.5)
    assert abs(val - 1 / 6) < 1e-12
    assert alias < 1e-10
    with pytest.raises(ValueError):
        coeff_extract_dft(lambda z: z, 20, P=16)


def test_window_json_roundtrip():
    W = j_coeffs([0.3], [0.2], 6)
    back = LaurentWindow.from_json(W.to_json())
    assert np.array_equal(back.coeffs, W.coeffs)
    with pytest.raises(ValueError):
        LaurentWindow(2, np.zeros(3))


def test_multiply_matches_product():
    a = j_coeffs([0.3], [0.2], 30)
    b = j_coeffs([-0.3], [-0.2], 30)
    prod = multiply(a, b)
    # J(t,t') J(-t,-t') = 1
    assert abs(prod[0] - 1) < 1e-12
    assert max(abs(prod[k]) for k in range(-10, 11) if k) < 1e-12
    assert prod.err < 1e-10


def test_fit_decay_quiet():
    c = np.zeros(41)
    c[20] = 1.0
    c[0] = 1e-300
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        C, r = fit_decay(c, 20)
    assert 0 < r < 1 and C >= 1
