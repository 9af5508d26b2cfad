"""Truncated semi-infinite wedge.

Basis vectors are pairs (charge, partition) standing for
v_S with S = {lam_i - i + 1/2 + charge}.  Vectors are sparse dicts; every
operator that can raise the energy drops terms above ``E_max`` and counts
them in ``FockVector.dropped``.
"""

from __future__ import annotations

import cmath
import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from .kernel import SigmaWeight
from .partitions import HalfInt, Partition, enumerate_partitions, occupies, partition_from_points
from .symfun import ParamSeq, z_norm

DEFAULT_EMAX = 12
DEFAULT_NMAX = 4

Key = tuple[int, tuple[int, ...]]


@dataclass(frozen=True)
class FockBasisVector:
    charge: int
    lam: Partition

    @property
    def energy(self) -> int:
        return self.lam.size

    @property
    def key(self) -> Key:
        return (self.charge, self.lam.parts)

    def points(self, depth: int) -> list[int]:
        """Top ``depth`` points of S, doubled, decreasing."""
        return _points(self.key, depth)


def _points(key: Key, depth: int) -> list[int]:
    n, parts = key
    return [2 * ((parts[i] if i < len(parts) else 0) - i - 1 + n) + 1 for i in range(depth)]


def _energy(key: Key) -> int:
    return sum(key[1])


@dataclass
class FockVector:
    terms: dict = field(default_factory=dict)
    E_max: int = DEFAULT_EMAX
    n_max: int = DEFAULT_NMAX
    dropped: int = 0

    @classmethod
    def basis(cls, charge: int = 0, lam=(), E_max: int = DEFAULT_EMAX, n_max: int = DEFAULT_NMAX) -> "FockVector":
        lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
        return cls({(charge, lam.parts): 1.0 + 0j}, E_max, n_max)

    @classmethod
    def vacuum(cls, charge: int = 0, E_max: int = DEFAULT_EMAX, n_max: int = DEFAULT_NMAX) -> "FockVector":
        return cls.basis(charge, (), E_max, n_max)

    def empty_like(self) -> "FockVector":
        return FockVector({}, self.E_max, self.n_max, self.dropped)

    def add(self, key: Key, amp: complex):
        if amp == 0:
            return
        if _energy(key) > self.E_max or abs(key[0]) > self.n_max:
            self.dropped += 1
            return
        self.terms[key] = self.terms.get(key, 0) + amp

    def prune(self) -> "FockVector":
        self.terms = {k: v for k, v in self.terms.items() if v != 0}
        return self

    def __add__(self, other: "FockVector") -> "FockVector":
        out = FockVector(dict(self.terms), min(self.E_max, other.E_max), min(self.n_max, other.n_max), self.dropped + other.dropped)
        for k, v in other.terms.items():
            out.add(k, v)
        return out.prune()

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + other.scale(-1)

    def scale(self, c: complex) -> "FockVector":
        return FockVector({k: c * v for k, v in self.terms.items()}, self.E_max, self.n_max, self.dropped)

    def coeff(self, charge: int, lam=()) -> complex:
        parts = lam.parts if isinstance(lam, Partition) else Partition(tuple(lam)).parts
        return self.terms.get((charge, parts), 0j)

    def norm_inf(self) -> float:
        return max((abs(v) for v in self.terms.values()), default=0.0)

    def to_json(self) -> dict:
        return {
            "E_max": self.E_max,
            "n_max": self.n_max,
            "terms": [
                {"charge": k[0], "partition": list(k[1]), "amp": [v.real, v.imag]} for k, v in sorted(self.terms.items())
            ],
        }


def inner(u: FockVector, v: FockVector) -> complex:
    """<u, v>, antilinear in v."""
    if len(u.terms) > len(v.terms):
        return sum(a * v.terms[k].conjugate() for k, a in u.terms.items() if k in v.terms)
    return sum(u.terms[k] * b.conjugate() for k, b in v.terms.items() if k in u.terms)


# ---------------------------------------------------------------- fermions


def _depth_for(key: Key, k2: int) -> int:
    # enough rows that the listed points reach strictly below k
    n, parts = key
    return len(parts) + max(0, n - (k2 - 1) // 2) + 2


@lru_cache(maxsize=1 << 20)
def psi_basis(k2: int, key: Key) -> tuple[int, Key | None]:
    """psi_k on a basis vector: (sign, new key) or (0, None)."""
    n, parts = key
    lam = Partition(parts)
    if occupies(lam, n, k2):
        return 0, None
    pts = _points(key, _depth_for(key, k2))
    pos = sum(1 for p in pts if p > k2)
    new = pts[:pos] + [k2] + pts[pos:]
    return (-1) ** pos, (n + 1, partition_from_points(new, n + 1).parts)


@lru_cache(maxsize=1 << 20)
def psi_star_basis(k2: int, key: Key) -> tuple[int, Key | None]:
    n, parts = key
    lam = Partition(parts)
    if not occupies(lam, n, k2):
        return 0, None
    pts = _points(key, _depth_for(key, k2))
    i = pts.index(k2)
    new = pts[:i] + pts[i + 1 :]
    return (-1) ** i, (n - 1, partition_from_points(new, n - 1).parts)


def _half(k) -> int:
    return HalfInt.of(k).twice


def apply_psi(k, v: FockVector) -> FockVector:
    """Exterior multiplication by the half-integer k."""
    k2 = _half(k)
    out = v.empty_like()
    for key, amp in v.terms.items():
        sgn, new = psi_basis(k2, key)
        if sgn:
            out.add(new, sgn * amp)
    return out.prune()


def apply_psi_star(k, v: FockVector) -> FockVector:
    k2 = _half(k)
    out = v.empty_like()
    for key, amp in v.terms.items():
        sgn, new = psi_star_basis(k2, key)
        if sgn:
            out.add(new, sgn * amp)
    return out.prune()


# ---------------------------------------------------------------- bosons


@lru_cache(maxsize=1 << 20)
def alpha_basis(m: int, key: Key) -> tuple[tuple[int, Key], ...]:
    """alpha_m = sum_k psi_{k-m} psi*_k on a basis vector."""
    if m == 0:
        raise ValueError("alpha_0 is not used")
    n, parts = key
    out = []
    depth = len(parts) + abs(m) + 1
    for k2 in _points(key, depth):
        s1, mid = psi_star_basis(k2, key)
        s2, new = psi_basis(k2 - 2 * m, mid)
        if s2:
            out.append((s1 * s2, new))
    return tuple(out)


def apply_alpha(m: int, v: FockVector) -> FockVector:
    out = v.empty_like()
    for key, amp in v.terms.items():
        for sgn, new in alpha_basis(m, key):
            out.add(new, sgn * amp)
    return out.prune()


def _expanded_times(t: ParamSeq, jmax: int) -> dict[int, complex]:
    """Explicit Miwa times up to index jmax, brace shifts included."""
    d = {k: v for k, v in t.entries if k <= jmax}
    for a, e in t.braces:
        for j in range(1, jmax + 1):
            d[j] = d.get(j, 0) + e * a**j / j
    return {k: v for k, v in d.items() if v != 0}


@lru_cache(maxsize=8)
def _sector(E_max: int) -> tuple[tuple[tuple[int, ...], ...], dict, np.ndarray]:
    parts = tuple(lam.parts for lam in enumerate_partitions(E_max))
    index = {p: i for i, p in enumerate(parts)}
    energies = np.array([sum(p) for p in parts])
    return parts, index, energies


@lru_cache(maxsize=256)
def _alpha_matrix(m: int, E_max: int) -> np.ndarray:
    """alpha_m on partitions of size <= E_max; it does not depend on the charge."""
    parts, index, _ = _sector(E_max)
    mat = np.zeros((len(parts), len(parts)))
    for j, p in enumerate(parts):
        for sgn, (_, q) in alpha_basis(m, (0, p)):
            i = index.get(q)
            if i is not None:
                mat[i, j] += sgn
    return mat


def apply_gamma(sign: str, t, v: FockVector) -> FockVector:
    """Gamma_+(t) = exp(sum t_n alpha_n) or Gamma_-(t) = exp(sum t_n alpha_{-n}).

    On states of energy <= E_max the exponent is nilpotent, so the Taylor
    sum stops after E_max terms.  Gamma_+ is exact; for Gamma_- every
    amplitude pushed above E_max is counted in ``dropped``.
    """
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    t = ParamSeq.of(t)
    E = v.E_max
    times = _expanded_times(t, max(E, 1))
    if not times or not v.terms:
        return FockVector(dict(v.terms), E, v.n_max, v.dropped)
    s = 1 if sign == "+" else -1
    parts, index, energies = _sector(E)
    X = sum(tv * _alpha_matrix(s * idx, E) for idx, tv in times.items())
    low = min(times)
    out = FockVector({}, E, v.n_max, v.dropped)
    for charge in sorted({k[0] for k in v.terms}):
        vec = np.zeros(len(parts), dtype=complex)
        for (c, p), amp in v.terms.items():
            if c == charge:
                vec[index[p]] = amp
        total, term = vec.copy(), vec
        for j in range(1, E + 1):
            if s < 0:
                out.dropped += int(np.count_nonzero(term[energies + low > E]))
            term = X @ term / j
            if not term.any():
                break
            total += term
        if s < 0 and term.any():
            out.dropped += int(np.count_nonzero(term[energies + low > E]))
        for i in np.nonzero(total)[0]:
            out.add((charge, parts[i]), total[i])
    return out


def apply_charge(v: FockVector) -> FockVector:
    return FockVector({k: k[0] * a for k, a in v.terms.items()}, v.E_max, v.n_max, v.dropped).prune()


def apply_shift(p: int, v: FockVector) -> FockVector:
    """R^p: every point moves up by p; the partition is unchanged."""
    out = v.empty_like()
    for (n, parts), amp in v.terms.items():
        out.add((n + p, parts), amp)
    return out


def apply_z_power_charge(z: complex, v: FockVector, offset: float = 0.0, power: int = 1) -> FockVector:
    """z^(power * C + offset); every half power goes through the principal sqrt(z)."""
    r = cmath.sqrt(z)
    return FockVector(
        {k: a * r ** int(round(2 * (power * k[0] + offset))) for k, a in v.terms.items()}, v.E_max, v.n_max, v.dropped
    )


def a_sigma_eigenvalue(sigma: SigmaWeight, key: Key, depth: int | None = None) -> float:
    """prod_{s in S} (1 - sigma(s)) for the configuration of ``key``."""
    n, parts = key
    if sigma.kind == "indicator":
        rows = len(parts) + max(n, 0) + 1
    elif sigma.finitely_supported:
        lowest = min((k2 for k2, _ in sigma.table), default=1)
        rows = max(len(parts), (1 - lowest) // 2 + n, 0)
    else:
        rows = max(len(parts), depth or 0, n + sigma.negative_extent(1e-18) + 1)
    pts = np.array(_points(key, rows), dtype=int)
    val = float(np.prod(1.0 - sigma.values(pts))) if rows else 1.0
    if not sigma.finitely_supported and sigma.kind != "indicator":
        # remaining points k < bottom are all occupied
        bottom = (pts[-1] if rows else 2 * n + 1) - 2
        ks = np.arange(bottom, bottom - 2 * 4000, -2)
        s = sigma.values(ks)
        val *= float(np.exp(np.sum(np.log1p(-s[s > 0]))))
    return val


def apply_A_sigma(sigma: SigmaWeight, v: FockVector, depth: int | None = None) -> FockVector:
    """Diagonal operator prod_k (1 - sigma(k) psi_k psi*_k)."""
    return FockVector(
        {k: a * a_sigma_eigenvalue(sigma, k, depth) for k, a in v.terms.items()}, v.E_max, v.n_max, v.dropped
    ).prune()


# ---------------------------------------------------------------- matrix elements


def fock_correlation(X, t, tp, E_max: int = DEFAULT_EMAX) -> complex:
    """<Gamma_+(t) psi_x1 psi*_x1 ... psi_xm psi*_xm Gamma_-(t') v_0, v_0>."""
    w = apply_gamma("-", tp, FockVector.vacuum(0, E_max))
    for x in X:
        w = apply_psi(x, apply_psi_star(x, w))
    w = apply_gamma("+", t, w)
    return w.coeff(0)


def fock_tau(t, tp, sigma: SigmaWeight, n: int, E_max: int = DEFAULT_EMAX) -> complex:
    """<Gamma_+(-t) A_sigma Gamma_-(-t') v_n, v_n>."""
    t, tp = ParamSeq.of(t), ParamSeq.of(tp)
    w = apply_gamma("-", -tp, FockVector.vacuum(n, E_max, max(DEFAULT_NMAX, abs(n))))
    w = apply_A_sigma(sigma, w)
    w = apply_gamma("+", -t, w)
    return w.coeff(n)


def fock_tau_tilde(t, tp, sigma: SigmaWeight, n: int, E_max: int = DEFAULT_EMAX) -> complex:
    """<Gamma_+(t) A_sigma Gamma_-(t') v_n, v_n>, the generic Toda tau of A_sigma."""
    return fock_tau(-ParamSeq.of(t), -ParamSeq.of(tp), sigma, n, E_max)


# ---------------------------------------------------------------- generating series


def _sqrt_pow(z: complex, twice_k: int) -> complex:
    return cmath.sqrt(z) ** twice_k


def apply_psi_series(z: complex, v: FockVector) -> FockVector:
    """psi(z) v = sum_k z^k psi_k v, exact up to the energy cutoff of v."""
    out = v.empty_like()
    for key, amp in v.terms.items():
        n, parts = key
        lo = 2 * (n - len(parts)) - 1  # highest always-filled point
        hi = 2 * (n + v.E_max) + 1
        for k2 in range(lo, hi + 1, 2):
            sgn, new = psi_basis(k2, key)
            if sgn and _energy(new) <= v.E_max:
                out.add(new, sgn * amp * _sqrt_pow(z, k2))
    return out.prune()


def apply_psi_star_series(z: complex, v: FockVector) -> FockVector:
    """psi*(z) v = sum_j z^-j psi*_j v, exact up to the energy cutoff of v."""
    out = v.empty_like()
    for key, amp in v.terms.items():
        n, parts = key
        lo = 2 * (n - len(parts) - v.E_max) - 1
        hi = 2 * (n + (parts[0] if parts else 0)) + 1
        for k2 in range(lo, hi + 1, 2):
            sgn, new = psi_star_basis(k2, key)
            if sgn and _energy(new) <= v.E_max:
                out.add(new, sgn * amp * _sqrt_pow(z, -k2))
    return out.prune()


def _brace(z: complex, sign: int = 1) -> ParamSeq:
    return ParamSeq().shift(z, sign)


def psi_bosonized(z: complex, v: FockVector) -> FockVector:
    """z^(C - 1/2) R Gamma_-({z}) Gamma_+(-{1/z}) v."""
    w = apply_gamma("+", _brace(1 / z, -1), v)
    w = apply_gamma("-", _brace(z, 1), w)
    w = apply_shift(1, w)
    return apply_z_power_charge(z, w, -0.5)


def psi_star_bosonized(z: complex, v: FockVector) -> FockVector:
    """z^(1/2) R^-1 z^-C Gamma_-(-{z}) Gamma_+({1/z}) v."""
    w = apply_gamma("+", _brace(1 / z, 1), v)
    w = apply_gamma("-", _brace(z, -1), w)
    w = apply_z_power_charge(z, w, 0.5, power=-1)
    return apply_shift(-1, w)


# ---------------------------------------------------------------- audits


@dataclass
class OperatorAudit:
    name: str
    max_residual: float = 0.0
    cases_checked: int = 0

    def record(self, residual: float):
        self.max_residual = max(self.max_residual, float(residual))
        self.cases_checked += 1

    def to_json(self) -> str:
        return json.dumps({"name": self.name, "max_residual": self.max_residual, "cases_checked": self.cases_checked})


def basis_keys(E: int, charges: Iterable[int]) -> list[Key]:
    lams = enumerate_partitions(E)
    return [(c, lam.parts) for c in charges for lam in lams]


def _diff_norm(a: FockVector, b: FockVector) -> float:
    keys = set(a.terms) | set(b.terms)
    return max((abs(a.terms.get(k, 0) - b.terms.get(k, 0)) for k in keys), default=0.0)


def check_anticommutation(E: int = 4, charges=(-1, 0, 1), kspan: int = 4) -> list[OperatorAudit]:
    """psi psi* + psi* psi = delta and the two pure anticommutators, plus
    the projector identities, on every basis vector of energy <= E."""
    big = E + 2 * kspan + 4
    ks = [HalfInt(k2) for k2 in range(-2 * kspan + 1, 2 * kspan, 2)]
    mixed, pp, ss, proj = (OperatorAudit(n) for n in ("psi_psistar", "psi_psi", "psistar_psistar", "projectors"))
    for key in basis_keys(E, charges):
        v = FockVector({key: 1.0 + 0j}, big, 99)
        for k, l in itertools.product(ks, ks):
            a = apply_psi(k, apply_psi_star(l, v)) + apply_psi_star(l, apply_psi(k, v))
            mixed.record(_diff_norm(a, v.scale(1.0 if k == l else 0.0)))
            pp.record(_diff_norm(apply_psi(k, apply_psi(l, v)) + apply_psi(l, apply_psi(k, v)), v.empty_like()))
            ss.record(_diff_norm(apply_psi_star(k, apply_psi_star(l, v)) + apply_psi_star(l, apply_psi_star(k, v)), v.empty_like()))
        for k in ks:
            inside = occupies(Partition(key[1]), key[0], k.twice)
            proj.record(_diff_norm(apply_psi(k, apply_psi_star(k, v)), v.scale(1.0 if inside else 0.0)))
            proj.record(_diff_norm(apply_psi_star(k, apply_psi(k, v)), v.scale(0.0 if inside else 1.0)))
    return [mixed, pp, ss, proj]


def check_alpha_commutation(E_max: int = DEFAULT_EMAX, modes=(1, 2, 3), charges=(-1, 0, 1)) -> OperatorAudit:
    """[alpha_n, alpha_m] = n delta_{n,-m} on states of energy <= E_max - |n| - |m|."""
    audit = OperatorAudit("alpha_commutator")
    ms = [m for m in modes] + [-m for m in modes]
    for n, m in itertools.product(ms, ms):
        E = E_max - abs(n) - abs(m)
        if E < 0:
            continue
        for key in basis_keys(min(E, 6), charges):
            v = FockVector({key: 1.0 + 0j}, E_max, 99)
            c = apply_alpha(n, apply_alpha(m, v)) - apply_alpha(m, apply_alpha(n, v))
            audit.record(_diff_norm(c, v.scale(n if n == -m else 0)))
    return audit


def check_charge(E: int = 6, charges=(-2, -1, 0, 1, 2)) -> OperatorAudit:
    """C v = n v on the charge-n sector, and the charge agrees with |S+| - |S-|."""
    audit = OperatorAudit("charge_sectors")
    for key in basis_keys(E, charges):
        v = FockVector({key: 1.0 + 0j}, E, 99)
        audit.record(_diff_norm(apply_charge(v), v.scale(key[0])))
        n, parts = key
        pts = _points(key, len(parts) + abs(n) + 2)
        plus = sum(1 for p in pts if p > 0)
        minus = sum(1 for j in range(1, len(pts) + 1) if -(2 * j - 1) not in pts and -(2 * j - 1) >= pts[-1])
        audit.record(abs((plus - minus) - n))
    return audit


def check_vertex_commutation(
    t, tp, E_max: int = DEFAULT_EMAX, E_basis: int = 2, z: complex = cmath.exp(0.7j)
) -> list[OperatorAudit]:
    """Gamma_+(t) Gamma_-(t') = Z Gamma_-(t') Gamma_+(t), and the exchange of
    Gamma_+- with psi(z), psi*(z), on matrix elements between small states.

    z sits on the unit circle: psi(z) Gamma_-(t) u reaches down to holes of
    depth ~E with weight |z|^-E, which the cutoff only controls for |z| >= 1.
    """
    t, tp = ParamSeq.of(t), ParamSeq.of(tp)
    zz = z_norm(t, tp)
    gg, gpsi = OperatorAudit("gamma_plus_gamma_minus"), OperatorAudit("gamma_psi_exchange")
    keys = basis_keys(E_basis, (0,))
    for key in keys:
        u = FockVector({key: 1.0 + 0j}, E_max, 99)
        lhs = apply_gamma("+", t, apply_gamma("-", tp, u))
        rhs = apply_gamma("-", tp, apply_gamma("+", t, u)).scale(zz)
        for key2 in keys:
            audit_val = abs(lhs.terms.get(key2, 0) - rhs.terms.get(key2, 0))
            gg.record(audit_val)
    def gamma_fn(x: complex, times: ParamSeq) -> complex:
        return cmath.exp(sum(v * x**k for k, v in times.entries))

    for key in keys:
        u = FockVector({key: 1.0 + 0j}, E_max, 99)
        for tag, series, sgn in (("psi", apply_psi_series, 1), ("psi*", apply_psi_star_series, -1)):
            # Gamma_-(t) psi(z) = gamma(1/z, t)^sgn psi(z) Gamma_-(t)
            l1 = apply_gamma("-", t, series(z, u))
            r1 = series(z, apply_gamma("-", t, u)).scale(gamma_fn(1 / z, t) ** sgn)
            # Gamma_+(t) psi(z) = gamma(z, t)^sgn psi(z) Gamma_+(t)
            l2 = apply_gamma("+", t, series(z, u))
            r2 = series(z, apply_gamma("+", t, u)).scale(gamma_fn(z, t) ** sgn)
            for key2 in basis_keys(E_basis, (key[0] + sgn,)):
                gpsi.record(abs(l1.terms.get(key2, 0) - r1.terms.get(key2, 0)))
                gpsi.record(abs(l2.terms.get(key2, 0) - r2.terms.get(key2, 0)))
    return [gg, gpsi]


def check_boson_fermion(z_samples: Iterable[complex], E_max: int = DEFAULT_EMAX, E_basis: int = 4) -> list[OperatorAudit]:
    """Compare psi(z), psi*(z) summed from modes with their vertex-operator
    forms, and check [alpha_n, psi(z)] = z^n psi(z)."""
    bf, bf_star, comm = OperatorAudit("boson_fermion_psi"), OperatorAudit("boson_fermion_psistar"), OperatorAudit("alpha_psi_commutator")
    keys = basis_keys(E_basis, (-1, 0, 1))
    for z in z_samples:
        for key in keys:
            u = FockVector({key: 1.0 + 0j}, E_max, 99)
            a, b = apply_psi_series(z, u), psi_bosonized(z, u)
            c, d = apply_psi_star_series(z, u), psi_star_bosonized(z, u)
            for key2 in basis_keys(E_basis, (key[0] + 1,)):
                bf.record(abs(a.terms.get(key2, 0) - b.terms.get(key2, 0)))
            for key2 in basis_keys(E_basis, (key[0] - 1,)):
                bf_star.record(abs(c.terms.get(key2, 0) - d.terms.get(key2, 0)))
            for m in (1, -1, 2, -2):
                lhs = apply_alpha(m, apply_psi_series(z, u)) - apply_psi_series(z, apply_alpha(m, u))
                rhs = apply_psi_series(z, u).scale(z**m)
                for key2 in basis_keys(max(E_basis - abs(m), 0), (key[0] + 1,)):
                    comm.record(abs(lhs.terms.get(key2, 0) - rhs.terms.get(key2, 0)))
    return [bf, bf_star, comm]


def check_psi_commutation(sigma: SigmaWeight, E: int = 3, charges=(-1, 0, 1)) -> OperatorAudit:
    """(A_sigma x A_sigma) Psi = Psi (A_sigma x A_sigma), Psi = sum_k psi_k x psi*_k,
    on all pairs of basis vectors of energy <= E."""
    audit = OperatorAudit(f"psi_tensor_commutation[{sigma.kind}]")
    keys = basis_keys(E, charges)

    def big_psi(pairs: dict) -> dict:
        out: dict = {}
        for (ku, kv), amp in pairs.items():
            lo = 2 * (ku[0] - len(ku[1])) - 1
            hi = 2 * (kv[0] + (kv[1][0] if kv[1] else 0)) + 1
            for k2 in range(lo - 2, hi + 1, 2):
                s1, nu = psi_basis(k2, ku)
                if not s1:
                    continue
                s2, nv = psi_star_basis(k2, kv)
                if not s2:
                    continue
                out[(nu, nv)] = out.get((nu, nv), 0) + s1 * s2 * amp
        return out

    def a_tensor(pairs: dict) -> dict:
        return {(ku, kv): amp * a_sigma_eigenvalue(sigma, ku) * a_sigma_eigenvalue(sigma, kv) for (ku, kv), amp in pairs.items()}

    for ku, kv in itertools.product(keys, keys):
        start = {(ku, kv): 1.0}
        lhs = a_tensor(big_psi(start))
        rhs = big_psi(a_tensor(start))
        allk = set(lhs) | set(rhs)
        audit.record(max((abs(lhs.get(k, 0) - rhs.get(k, 0)) for k in allk), default=0.0))
    return audit


def check_gamma_adjoint(t, E_max: int = DEFAULT_EMAX, E_basis: int = 4) -> OperatorAudit:
    """<Gamma_-(t) u, v> == <u, Gamma_+(t) v> for real t."""
    t = ParamSeq.of(t)
    if not t.is_real():
        raise ValueError("adjointness is checked for real parameters")
    audit = OperatorAudit("gamma_adjoint")
    keys = basis_keys(E_basis, (0,))
    for ku in keys:
        gu = apply_gamma("-", t, FockVector({ku: 1.0 + 0j}, E_max, 99))
        for kv in keys:
            gv = apply_gamma("+", t, FockVector({kv: 1.0 + 0j}, E_max, 99))
            audit.record(abs(gu.terms.get(kv, 0) - gv.terms.get(ku, 0).conjugate()))
    return audit


def check_psi_adjoint(E: int = 4, charges=(-1, 0, 1), kspan: int = 4) -> OperatorAudit:
    """<psi_k u, v> == <u, psi*_k v> on basis vectors."""
    audit = OperatorAudit("psi_adjoint")
    keys = basis_keys(E, charges)
    for k2 in range(-2 * kspan + 1, 2 * kspan, 2):
        for ku in keys:
            s1, new = psi_basis(k2, ku)
            for kv in keys:
                s2, back = psi_star_basis(k2, kv)
                lhs = s1 if new == kv else 0
                rhs = s2 if back == ku else 0
                audit.record(abs(lhs - rhs))
    return audit


def run_audit_suite(
    t=(0.5,), tp=(0.5,), z_samples=(0.3, 0.3j, -0.3, 0.3 * cmath.exp(1j)), E_max: int = DEFAULT_EMAX, sigmas=None
) -> list[OperatorAudit]:
    """All operator identities; each audit is one JSON line in the CLI."""
    t, tp = ParamSeq.of(t), ParamSeq.of(tp)
    if sigmas is None:
        sigmas = [SigmaWeight.zero(), SigmaWeight.indicator(), SigmaWeight.fermi(0.4)]
    audits = list(check_anticommutation())
    audits.append(check_psi_adjoint())
    audits.append(check_alpha_commutation(E_max))
    audits.append(check_charge())
    # psi(z) u needs room above the basis states: E_basis = 2 plus the reach of Gamma_+
    audits.extend(check_vertex_commutation(t, tp, E_max + 4, E_basis=2))
    if t.is_real():
        audits.append(check_gamma_adjoint(t, E_max))
    audits.extend(check_boson_fermion(z_samples, E_max, E_basis=3))
    audits.extend(check_psi_commutation(s) for s in sigmas)
    return audits
