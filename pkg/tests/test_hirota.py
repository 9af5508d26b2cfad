import cmath
from dataclasses import replace

import pytest

from schurtoda.fredholm import tau_n
from schurtoda.hirota import (
    HirotaCase,
    HirotaError,
    default_grid,
    hirota_residual,
    suite_csv,
    suite_summary,
    tau_shifted,
)
from schurtoda.kernel import SigmaWeight
from schurtoda.symfun import ParamSeq, z_norm

PL = ParamSeq.of([0.5])
S = ParamSeq.of({1: 0.05 + 0.02j, 2: -0.03j})
SP = ParamSeq.of({1: -0.04, 2: 0.01 + 0.01j})


def case(m=0, l=0, sigma=None, **kw):
    sigma = SigmaWeight.indicator() if sigma is None else sigma
    return HirotaCase(m, l, S, SP, sigma, PL, PL, **kw)


def test_zero_shift_is_plain_tau():
    sig = SigmaWeight.from_table({"1/2": 0.3})
    a = tau_shifted(PL, PL, sig, 1, 0.0, "t_plus")
    assert a.value == tau_n(PL, PL, sig, 1).value


def test_shift_of_z_for_zero_sigma():
    # Z(t, t' + {z}) = Z(t, t') gamma(z, t)
    z = 0.2 * cmath.exp(0.3j)
    t, tp = ParamSeq.of([0.3, 0.1]), ParamSeq.of([0.2])
    v = tau_shifted(t, tp, SigmaWeight.zero(), 0, z, "tprime_plus").value
    gamma = cmath.exp(0.3 * z + 0.1 * z * z)
    assert abs(v - z_norm(t, tp) * gamma) < 1e-13
    with pytest.raises(HirotaError):
        tau_shifted(t, tp, SigmaWeight.zero(), 0, 1.5, "t_plus")
    with pytest.raises(ValueError):
        tau_shifted(t, tp, SigmaWeight.zero(), 0, 0.1, "sideways")


def test_trivial_times_and_shifts():
    c = HirotaCase(0, 0, ParamSeq(), ParamSeq(), SigmaWeight.indicator())
    r = hirota_residual(c)
    assert r.residual < 1e-12


def test_negated_reading_holds():
    r = hirota_residual(case(0, 1))
    assert r.residual < 1e-10
    assert r.bound is not None and r.P >= 64


def test_literal_reading_fails():
    r = hirota_residual(case(0, 0, reading="literal"))
    assert r.residual > 1e-4


def test_radius_independent():
    a = hirota_residual(case(1, 0, rho=0.3))
    b = hirota_residual(case(1, 0, rho=0.2))
    assert abs(a.lhs - b.lhs) < 1e-9 and abs(a.rhs - b.rhs) < 1e-9


def test_conjugate_symmetry():
    # real t, t' and sigma: conjugating s, s' conjugates both sides
    sig = SigmaWeight.from_table({"-1/2": 0.4, "3/2": 0.8})
    conj = lambda p: ParamSeq.of({k: v.conjugate() for k, v in p.entries})  # noqa: E731
    a = hirota_residual(case(-1, 0, sig))
    b = hirota_residual(replace(case(-1, 0, sig), s=conj(S), sp=conj(SP)))
    assert abs(a.lhs.conjugate() - b.lhs) < 1e-12


def test_grid_shape_and_determinism():
    g1, g2 = default_grid(), default_grid()
    assert len(g1) == 27
    assert [c.key() for c in g1] == [c.key() for c in g2]
    for c in g1:
        for k, v in list(c.s.entries) + list(c.sp.entries):
            assert k in (1, 2) and abs(v) <= 0.1


def test_validation_and_reports():
    with pytest.raises(ValueError):
        case(reading="other")
    with pytest.raises(ValueError):
        case(0, 20, P=16)
    with pytest.raises(ValueError):
        hirota_residual(replace(case(), s=ParamSeq().shift(0.1)))
    assert suite_summary([]) == {"cases": 0, "max_residual": None, "worst": None}
    r = hirota_residual(HirotaCase(0, 0, ParamSeq(), ParamSeq(), SigmaWeight.zero()))
    csv_text = suite_csv([r])
    assert csv_text.splitlines()[0] == "m,l,params,residual,bound"
    assert suite_summary([r])["cases"] == 1
