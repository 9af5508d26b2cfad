import cmath
import json

import numpy as np
import pytest

from schurtoda import fock
from schurtoda.cli import audit_tolerance
from schurtoda.fock import (
    FockVector,
    apply_A_sigma,
    apply_alpha,
    apply_gamma,
    apply_psi,
    apply_psi_series,
    apply_psi_star,
    apply_shift,
    apply_z_power_charge,
    fock_correlation,
    fock_tau,
    fock_tau_tilde,
    inner,
    psi_bosonized,
)
from schurtoda.fredholm import tau_n
from schurtoda.kernel import SigmaWeight, kernel_entry
from schurtoda.partitions import enumerate_partitions
from schurtoda.symfun import ParamSeq, schur_value, z_norm

V0 = FockVector.vacuum(0)


def only(v: FockVector):
    assert len(v.terms) == 1
    (key, amp), = v.terms.items()
    return key, amp


def test_basic_moves():
    assert only(apply_psi("1/2", V0)) == ((1, ()), 1)
    assert only(apply_psi("3/2", V0)) == ((1, (1,)), 1)
    assert only(apply_psi_star("-1/2", V0)) == ((-1, ()), 1)
    assert only(apply_alpha(-1, V0)) == ((0, (1,)), 1)
    assert not apply_psi("-1/2", V0).terms
    assert not apply_psi_star("1/2", V0).terms
    assert not apply_alpha(1, V0).terms


def test_signs_follow_position():
    # psi_{3/2} psi_{1/2} v_0 = -psi_{1/2} psi_{3/2} v_0
    a = apply_psi("3/2", apply_psi("1/2", V0))
    b = apply_psi("1/2", apply_psi("3/2", V0))
    assert (a + b).norm_inf() == 0 and a.norm_inf() == 1


@pytest.mark.parametrize("n", [-2, 0, 3])
def test_gamma_plus_fixes_vacuum(n):
    v = FockVector.vacuum(n)
    w = apply_gamma("+", [0.4, -0.2j], v)
    assert w.terms == v.terms


def test_gamma_minus_gives_schur():
    t = ParamSeq.of([0.3, -0.2, 0.1j])
    w = apply_gamma("-", t, FockVector.vacuum(0, E_max=8))
    for lam in enumerate_partitions(8):
        assert abs(w.coeff(0, lam) - schur_value(lam, t)) < 1e-13


def test_vector_json_and_inner():
    v = FockVector.basis(1, (2, 1)).scale(2j)
    data = v.to_json()
    assert data["terms"] == [{"charge": 1, "partition": [2, 1], "amp": [0.0, 2.0]}]
    assert inner(v, v) == 4
    with pytest.raises(ValueError):
        apply_gamma("x", [0.1], v)


def test_cutoff_counts_dropped():
    w = apply_gamma("-", [0.5], FockVector.vacuum(0, E_max=3))
    assert w.dropped > 0
    assert max(sum(k[1]) for k in w.terms) <= 3


def test_audit_suite_within_thresholds():
    audits = fock.run_audit_suite()
    names = {a.name.split("[")[0] for a in audits}
    assert {"psi_psistar", "alpha_commutator", "gamma_psi_exchange", "boson_fermion_psi"} <= names
    for a in audits:
        assert a.cases_checked > 0, a.name
        assert a.max_residual <= audit_tolerance(a.name), json.loads(a.to_json())


def test_boson_fermion_half_power():
    # the bosonized form carries z^(C - 1/2); without the -1/2 it is off by sqrt(z)
    z = 0.3 * cmath.exp(0.4j)
    u = FockVector.basis(0, (1,), E_max=12)
    series = apply_psi_series(z, u)
    boson = psi_bosonized(z, u)
    assert (series - boson).norm_inf() < 1e-9
    wrong = apply_z_power_charge(z, boson, 0.5)
    assert (series - wrong).norm_inf() > 0.1 * series.norm_inf()


def test_shift_is_unitary():
    u = FockVector.basis(0, (2,)) + FockVector.basis(1, (1, 1)).scale(0.5j)
    w = apply_shift(3, u)
    assert abs(inner(w, w) - inner(u, u)) < 1e-15
    assert (apply_shift(-3, w) - u).norm_inf() == 0


def test_a_sigma_diagonal():
    sig = SigmaWeight.from_table({"1/2": 0.3, "-1/2": 0.6})
    for lam in [(), (1,), (2, 1)]:
        w = apply_A_sigma(sig, FockVector.basis(0, lam))
        key, amp = only(w)
        assert key == (0, tuple(lam))
    # v_0 occupies -1/2 but not 1/2
    assert abs(only(apply_A_sigma(sig, V0))[1] - 0.4) < 1e-15


@pytest.mark.parametrize("n", [-1, 0, 2])
def test_tau_trivial_times(n):
    sig = SigmaWeight.from_table({"-3/2": 0.4, "-1/2": 0.7, "3/2": 0.5})
    expect = np.prod([1 - v for k2, v in sig.table if k2 < 2 * n])
    assert abs(fock_tau([], [], sig, n) - expect) < 1e-15
    assert abs(fock_tau([0.3], [0.2], SigmaWeight.zero(), n) - z_norm([0.3], [0.2])) < 1e-13


def test_correlation_matches_kernel():
    t = [0.5]
    Z = z_norm(t, t)
    assert abs(fock_correlation([], t, t) - Z) < 1e-12
    k, _ = kernel_entry(t, t, SigmaWeight.indicator(), "1/2", "1/2")
    assert abs(fock_correlation(["1/2"], t, t) - Z * k) < 1e-8


@pytest.mark.parametrize("n", [-1, 0, 1])
def test_fock_tau_index(n):
    # the matrix coefficient at charge n is tau_{-n} at negated times
    t, tp = ParamSeq.of([0.4, 0.1]), ParamSeq.of([0.3j])
    sig = SigmaWeight.fermi(0.4)
    # fermi sigma puts weight ~u^x on the diagonal, so the window must be wide
    ref = tau_n(-t, -tp, sig, -n, M=48, cutoff=96)
    assert abs(fock_tau(t, tp, sig, n) - ref.value) < 1e-12
    coarse = tau_n(-t, -tp, sig, -n)
    assert abs(fock_tau(t, tp, sig, n) - coarse.value) <= coarse.truncation_bound
    assert abs(fock_tau_tilde(t, tp, sig, n) - tau_n(t, tp, sig, -n, M=48, cutoff=96).value) < 1e-12
