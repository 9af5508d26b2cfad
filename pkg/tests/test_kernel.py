import json
import math

import numpy as np
import pytest

from schurtoda.kernel import SigmaError, SigmaWeight, kernel_entry, kernel_matrix
from schurtoda.measures import correlation_bruteforce

PLANCHEREL = ([0.5], [0.5])


def test_sigma_kinds():
    assert SigmaWeight.indicator()("1/2") == 1.0
    assert SigmaWeight.indicator()("-1/2") == 0.0
    assert SigmaWeight.zero()("3/2") == 0.0
    assert abs(SigmaWeight.fermi(0.5)("1/2") - 1 / (1 + math.sqrt(0.5))) < 1e-15
    assert abs(SigmaWeight.fermi_mirror(0.5)("1/2") - (math.sqrt(2) - 1)) < 1e-15
    assert abs(SigmaWeight.bose(0.5)("1/2") - 1 / (1 - math.sqrt(0.5))) < 1e-12
    assert SigmaWeight.fermi(0.3).is_standard
    assert not SigmaWeight.fermi_mirror(0.3).is_standard
    assert not SigmaWeight.bose(0.3).is_standard
    # fermi tends to the indicator as u -> 0
    assert SigmaWeight.fermi(1e-6)("5/2") > 1 - 1e-14
    assert SigmaWeight.fermi(1e-6)("-5/2") < 1e-14


def test_sigma_validation_and_json():
    with pytest.raises(SigmaError):
        SigmaWeight("nope")
    with pytest.raises(SigmaError):
        SigmaWeight.fermi(1.5)
    with pytest.raises(SigmaError):
        SigmaWeight("table", table=((2, 0.5),))
    s = SigmaWeight.from_table({"1/2": 0.25, "-3/2": 0.5, "5/2": 0.0})
    assert s.table == ((-3, 0.5), (1, 0.25))
    assert SigmaWeight.from_json(json.loads(json.dumps(s.to_json()))) == s
    assert SigmaWeight.from_json(SigmaWeight.fermi(0.2).to_json()) == SigmaWeight.fermi(0.2)


@pytest.mark.parametrize("sigma", [SigmaWeight.indicator(), SigmaWeight.fermi(0.4), SigmaWeight.from_table({"-1/2": 0.3})])
def test_kernel_trivial_times(sigma):
    # J = 1 at t = t' = 0, so K(x, y) = delta_{xy} sigma(-x)
    km = kernel_matrix([], [], sigma, -3, 6)
    expect = np.diag([sigma(-p) for p in km.points])
    assert np.allclose(km.entries, expect, atol=1e-15)


def test_kernel_matches_bruteforce():
    for X in (["1/2"], ["-1/2"], ["1/2", "3/2"], ["-3/2", "1/2"]):
        pts = X
        mat = np.array([[kernel_entry(*PLANCHEREL, SigmaWeight.indicator(), x, y)[0] for y in pts] for x in pts])
        assert abs(np.linalg.det(mat) - correlation_bruteforce(X, *PLANCHEREL, N=16)) < 1e-6


def test_entry_bound_covers_cutoff_change():
    sigma = SigmaWeight.fermi(0.4)
    for cutoff in (4, 8):
        v, b = kernel_entry([0.5], [0.3], sigma, "1/2", "-1/2", cutoff)
        v2, _ = kernel_entry([0.5], [0.3], sigma, "1/2", "-1/2", 2 * cutoff)
        assert abs(v2 - v) <= b


def test_matrix_exports():
    km = kernel_matrix(*PLANCHEREL, SigmaWeight.indicator(), 0, 4)
    data = json.loads(km.dumps())
    assert data["points"] == ["1/2", "3/2", "5/2", "7/2"]
    assert len(data["entries"]) == 4
    rows = km.to_csv().strip().splitlines()
    assert rows[0].startswith("x\\y,1/2")
    assert "np." not in km.to_csv()
    # the window drops mass beyond 7/2; a larger window drops less
    big = kernel_matrix(*PLANCHEREL, SigmaWeight.indicator(), 0, 24)
    assert 1e-6 < km.tail_bound and big.tail_bound < 1e-10
    with pytest.raises(ValueError):
        kernel_matrix([], [], SigmaWeight.indicator(), 0, 0)
