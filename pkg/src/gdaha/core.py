"""Quantum GDAHA representations built from cabled R-matrices.

Given weights mu_1..mu_m (partitions), central parameters lambda_1..lambda_m
and n copies of C^N, the operators

    T_i = q^{1/N} R_{m+i}
    U_k = q^{2[(N-c)/m + lambda_k/N]} R_m ... R_{k+1} R_k^2 R_{k+1}^{-1} ... R_m^{-1}

with c = (n + sum lambda_k)/N act on the zero-isotypic component E of
V(mu_1) x ... x V(mu_m) x (C^N)^{x n}.  Everything here is exact.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import lcm

from .braiding import BlockStructure, Braider, block_word
from .linalg import (
    Subspace,
    axpy,
    first_nonzero_column,
    identity,
    mat_is_zero,
    mat_mul,
    mat_scale,
    mat_sub,
    prune,
    restrict,
)
from .scalars import ScalarField
from .weights import (
    TensorSubspace,
    Weight,
    casimir,
    f_closure,
    full_space,
    highest_weight_vectors,
    irrep_realization,
    partitions,
    pieri,
    tensor_power_action,
    zero_isotypic,
)

log = logging.getLogger(__name__)

__all__ = [
    "RepSpec",
    "GraphParams",
    "QuantumRep",
    "RelationResult",
    "GdahaReport",
    "derive_root_order",
    "gdaha_parameters",
    "build_quantum_rep",
    "check_gdaha_relations",
    "LongWordResult",
    "long_word_check",
    "r_squared_spectrum_check",
    "u_block_letters",
]


@dataclass(frozen=True)
class RepSpec:
    N: int
    n: int
    mus: tuple
    lambdas: tuple

    def __post_init__(self):
        mus = tuple(m if isinstance(m, Weight) else Weight.of(m) for m in self.mus)
        lams = tuple(Fraction(x) for x in self.lambdas)
        object.__setattr__(self, "mus", mus)
        object.__setattr__(self, "lambdas", lams)
        if self.N < 2:
            raise ValueError("N must be at least 2")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not mus:
            raise ValueError("at least one leg (m >= 1) is required")
        if len(mus) != len(lams):
            raise ValueError("need one lambda per highest weight")
        for mu in mus:
            if mu.N != self.N:
                raise ValueError(f"weight {mu} does not have {self.N} coordinates")
            if not mu.is_partition():
                raise ValueError(f"highest weight {mu} is not dominant with nonnegative entries")

    @classmethod
    def make(cls, N, n, mus, lambdas=None):
        mus = [Weight(tuple(m) + (0,) * (N - len(m))) for m in mus]
        lambdas = [0] * len(mus) if lambdas is None else lambdas
        return cls(N, n, tuple(mus), tuple(lambdas))

    @property
    def m(self):
        return len(self.mus)

    @property
    def c(self):
        return (self.n + sum(self.lambdas)) / self.N

    @property
    def block_sizes(self):
        return tuple(mu.size for mu in self.mus) + (1,) * self.n

    @property
    def strands(self):
        return sum(self.block_sizes)

    @property
    def ambient_dim(self):
        return self.N ** self.strands

    def u_prefactor_exponent(self, k):
        """Exponent of q in the scalar multiplying U_k (1-based k)."""
        return 2 * ((self.N - self.c) / self.m + self.lambdas[k - 1] / self.N)

    def to_dict(self):
        return {
            "N": self.N,
            "n": self.n,
            "m": self.m,
            "mu": [list(mu.coords) for mu in self.mus],
            "lambda": [str(x) for x in self.lambdas],
            "c": str(self.c),
        }


def derive_root_order(spec: RepSpec) -> int:
    """D = N * m * L, with L the common denominator of the lambdas."""
    L = lcm(*(x.denominator for x in spec.lambdas)) if spec.lambdas else 1
    return spec.N * spec.m * L


@dataclass
class GraphParams:
    t: object
    leg_lengths: tuple
    etas: tuple            # per leg, Pieri-ordered highest weights
    u_exponents: tuple     # per leg, exponents of q (Fractions)
    u: tuple               # per leg, field elements

    def to_dict(self):
        return {
            "t": str(self.t),
            "leg_lengths": list(self.leg_lengths),
            "pieri_order": "lexicographically decreasing",
            "legs": [
                {"eta": [list(e.coords) for e in etas],
                 "u_exponent": [str(x) for x in exps],
                 "u": [str(x) for x in us]}
                for etas, exps, us in zip(self.etas, self.u_exponents, self.u)
            ],
        }


def gdaha_parameters(spec: RepSpec, field=None) -> GraphParams:
    field = field or ScalarField(derive_root_order(spec))
    N = spec.N
    eps_term = casimir(Weight.epsilon(N))  # N - 1/N
    legs, etas_all, exps_all, us_all = [], [], [], []
    for k, mu in enumerate(spec.mus, start=1):
        etas = pieri(N, mu)
        pre = spec.u_prefactor_exponent(k)
        exps = tuple(pre - casimir(mu) + casimir(eta) - eps_term for eta in etas)
        legs.append(len(etas))
        etas_all.append(tuple(etas))
        exps_all.append(exps)
        us_all.append(tuple(field.q_pow(e) for e in exps))
    return GraphParams(field.q_pow(1), tuple(legs), tuple(etas_all), tuple(exps_all), tuple(us_all))


def u_block_letters(m, k):
    """Block-level word R_m ... R_{k+1} R_k^2 R_{k+1}^{-1} ... R_m^{-1}."""
    up = list(range(m, k, -1))
    return tuple(up + [k, k] + [-j for j in reversed(up)])


@dataclass
class QuantumRep:
    spec: RepSpec
    field: object
    E: Subspace
    T: list = dc_field(default_factory=list)
    T_inv: list = dc_field(default_factory=list)
    U: list = dc_field(default_factory=list)
    U_inv: list = dc_field(default_factory=list)
    params: GraphParams | None = None
    words: dict = dc_field(default_factory=dict)
    timings: dict = dc_field(default_factory=dict)

    @property
    def dim(self):
        return self.E.dim

    @property
    def vacuous(self):
        return self.E.dim == 0


_IRREP_CACHE = {}


def _irrep(N, mu, field):
    key = (N, mu.coords, field)
    if key not in _IRREP_CACHE:
        _IRREP_CACHE[key] = irrep_realization(N, mu, field)
    return _IRREP_CACHE[key]


def _product_space(N, mus, field, vector_positions):
    """TensorSubspace for blocks V(mu) and C^N in the given order.

    ``mus`` lists the weight for each block, with None meaning C^N.
    """
    cn = full_space(N, 1, field).factors[0]
    factors = [cn if mu is None else _irrep(N, mu, field).carrier for mu in mus]
    return TensorSubspace(factors, N)


def build_quantum_rep(spec: RepSpec, field=None, *, u1_scale=None) -> QuantumRep:
    """Realize E and the restricted operators T_i, U_k (and inverses).

    ``u1_scale`` multiplies U_1 by an extra scalar; it exists for negative
    controls only.
    """
    t0 = time.perf_counter()
    field = field or ScalarField(derive_root_order(spec))
    N, m, n = spec.N, spec.m, spec.n
    sizes = spec.block_sizes
    log.info("building quantum rep: N=%d m=%d n=%d, %d strands, ambient dim %d",
             N, m, n, spec.strands, spec.ambient_dim)
    ambient = tensor_power_action(N, spec.strands, field)
    within = _product_space(N, list(spec.mus) + [None] * n, field, None)
    E = zero_isotypic(ambient, within)
    timings = {"zero_isotypic": time.perf_counter() - t0}
    log.info("dim E = %d (%.2fs)", E.dim, timings["zero_isotypic"])
    params = gdaha_parameters(spec, field)
    rep = QuantumRep(spec, field, E, params=params, timings=timings)
    if E.dim == 0:
        return rep

    br = Braider(N, field)
    blocks = BlockStructure(sizes)
    qn = field.q_pow(Fraction(1, N))
    qn_inv = field.q_pow(Fraction(-1, N))
    for i in range(1, n):
        w, _ = block_word(blocks, (m + i,))
        rep.words[f"T{i}"] = w
        rep.T.append(mat_scale(restrict(br.operator(w), E), qn, field))
        rep.T_inv.append(mat_scale(restrict(br.operator(w.inverse()), E), qn_inv, field))
    for k in range(1, m + 1):
        w, final = block_word(blocks, u_block_letters(m, k))
        assert final == blocks
        rep.words[f"U{k}"] = w
        pre = field.q_pow(spec.u_prefactor_exponent(k))
        if k == 1 and u1_scale is not None:
            pre = pre * u1_scale
        rep.U.append(mat_scale(restrict(br.operator(w), E), pre, field))
        rep.U_inv.append(mat_scale(restrict(br.operator(w.inverse()), E), field.one / pre, field))
    rep.timings["operators"] = time.perf_counter() - t0 - timings["zero_isotypic"]
    log.info("operators restricted to E (%.2fs)", rep.timings["operators"])
    return rep


# ---------------------------------------------------------------------------

@dataclass
class RelationResult:
    number: int
    name: str
    status: str          # "pass", "fail" or "vacuous"
    witness: dict | None = None

    def to_dict(self):
        return {"relation": self.number, "name": self.name, "status": self.status,
                "witness": self.witness}


@dataclass
class GdahaReport:
    results: list
    vacuous: bool = False

    @property
    def passed(self):
        return all(r.status != "fail" for r in self.results)

    @property
    def first_failure(self):
        return next((r for r in self.results if r.status == "fail"), None)

    def to_dict(self):
        return {"verdict": "vacuous" if self.vacuous else ("pass" if self.passed else "fail"),
                "relations": [r.to_dict() for r in self.results]}


def _commutator(a, b, f):
    return mat_sub(mat_mul(a, b, f), mat_mul(b, a, f), f)


def _prod(mats, f, dim):
    out = identity(dim, f)
    for x in mats:
        out = mat_mul(out, x, f)
    return out


def _witness(diff, f, label):
    j = first_nonzero_column(diff, f)
    if j is None:
        return None
    return {"case": label, "basis_index": j, "residual": [str(row[j]) for row in diff]}


def check_gdaha_relations(rep: QuantumRep, params: GraphParams | None = None) -> GdahaReport:
    """Verify relations (1)-(8) of the GDAHA as exact matrix identities on E.

    Relation (4) is read as [U_i, T_j] = 0 for all legs i and 2 <= j <= n-1.
    """
    params = params or rep.params
    names = {
        1: "U_1...U_m T_1...T_{n-1} T_{n-1}...T_1 = 1",
        2: "T_i T_{i+1} T_i = T_{i+1} T_i T_{i+1}",
        3: "[T_i, T_j] = 0 for |i-j| > 1",
        4: "[U_i, T_j] = 0 for j >= 2",
        5: "[U_i, T_1 U_i T_1] = 0",
        6: "[U_i, T_1^-1 U_j T_1] = 0 for i < j",
        7: "prod_j (U_k - u_kj) = 0",
        8: "T_i - T_i^-1 = t - t^-1",
    }
    if rep.vacuous:
        return GdahaReport([RelationResult(k, v, "vacuous") for k, v in names.items()], vacuous=True)
    f = rep.field
    d = rep.dim
    I = identity(d, f)
    n, m = rep.spec.n, rep.spec.m
    T, Ti, U = rep.T, rep.T_inv, rep.U
    cases = {k: [] for k in names}

    long = _prod(U + T + T[::-1], f, d)
    cases[1].append(("", mat_sub(long, I, f)))
    for i in range(n - 2):
        lhs = _prod([T[i], T[i + 1], T[i]], f, d)
        rhs = _prod([T[i + 1], T[i], T[i + 1]], f, d)
        cases[2].append((f"i={i + 1}", mat_sub(lhs, rhs, f)))
    for i in range(n - 1):
        for j in range(i + 2, n - 1):
            cases[3].append((f"i={i + 1},j={j + 1}", _commutator(T[i], T[j], f)))
    for i in range(m):
        for j in range(1, n - 1):
            cases[4].append((f"i={i + 1},j={j + 1}", _commutator(U[i], T[j], f)))
    if n >= 2:
        for i in range(m):
            cases[5].append((f"i={i + 1}", _commutator(U[i], _prod([T[0], U[i], T[0]], f, d), f)))
        for i in range(m):
            for j in range(i + 1, m):
                cases[6].append((f"i={i + 1},j={j + 1}",
                                 _commutator(U[i], _prod([Ti[0], U[j], T[0]], f, d), f)))
    for k in range(m):
        acc = I
        for u in params.u[k]:
            acc = mat_mul(acc, mat_sub(U[k], mat_scale(I, u, f), f), f)
        cases[7].append((f"k={k + 1}", acc))
    tt = params.t - f.one / params.t
    for i in range(n - 1):
        cases[8].append((f"i={i + 1}", mat_sub(mat_sub(T[i], Ti[i], f), mat_scale(I, tt, f), f)))

    results = []
    for k, name in names.items():
        if not cases[k]:
            results.append(RelationResult(k, name, "vacuous"))
            continue
        status, witness = "pass", None
        for label, diff in cases[k]:
            if not mat_is_zero(diff, f):
                status, witness = "fail", _witness(diff, f, label)
                break
        results.append(RelationResult(k, name, status, witness))
    return GdahaReport(results)


# ---------------------------------------------------------------------------

@dataclass
class LongWordResult:
    status: str            # "pass", "fail" or "empty"
    expected_exponent: Fraction
    dim: int
    scalar: str | None = None
    witness: dict | None = None

    def to_dict(self):
        return {"status": self.status, "expected": f"q^({self.expected_exponent})",
                "dim": self.dim, "scalar": self.scalar, "witness": self.witness}


def long_word_check(spec: RepSpec, field=None) -> LongWordResult:
    """R_1...R_{m+n-1} R_{m+n-1}...R_1 on the zero-isotypic part of
    V' = C^N x V_1 x ... x V_m x (C^N)^{x (n-1)} should be q^{-2N+2/N}."""
    field = field or ScalarField(derive_root_order(spec))
    N, m, n = spec.N, spec.m, spec.n
    expected = Fraction(-2 * N) + Fraction(2, N)
    order = [None] + list(spec.mus) + [None] * (n - 1)
    sizes = (1,) + tuple(mu.size for mu in spec.mus) + (1,) * (n - 1)
    ambient = tensor_power_action(N, sum(sizes), field)
    Ep = zero_isotypic(ambient, _product_space(N, order, field, None))
    if Ep.dim == 0:
        return LongWordResult("empty", expected, 0)
    top = m + n - 1
    letters = tuple(range(1, top + 1)) + tuple(range(top, 0, -1))
    word, final = block_word(BlockStructure(sizes), letters)
    assert final.sizes == sizes
    M = restrict(Braider(N, field).operator(word), Ep)
    target = field.q_pow(expected)
    diff = mat_sub(M, mat_scale(identity(Ep.dim, field), target, field), field)
    if mat_is_zero(diff, field):
        return LongWordResult("pass", expected, Ep.dim, str(target))
    return LongWordResult("fail", expected, Ep.dim, None, _witness(diff, field, "long word"))


def r_squared_spectrum_check(N, mu, mu_prime, field=None):
    """Decompose V(mu) x V(mu') and test R^2 on each highest-weight vector.

    Returns one row per summand highest weight; each row records the expected
    exponent -(mu,mu+2rho) - (mu',mu'+2rho) + (lam,lam+2rho) and whether R^2
    acts by that power of q on the whole summand.
    """
    mu = mu if isinstance(mu, Weight) else Weight.of(mu)
    mu_prime = mu_prime if isinstance(mu_prime, Weight) else Weight.of(mu_prime)
    field = field or ScalarField(N)
    sizes = (mu.size, mu_prime.size)
    d = sum(sizes)
    ambient = tensor_power_action(N, d, field)
    within = _product_space(N, [mu, mu_prime], field, None)
    word, _ = block_word(BlockStructure(sizes), (1, 1))
    br = Braider(N, field)
    rows = []
    for lam in partitions(d, N):
        hw = highest_weight_vectors(ambient, lam, within)
        if hw.dim == 0:
            continue
        exponent = -casimir(mu) - casimir(mu_prime) + casimir(lam)
        target = field.q_pow(exponent)
        ok = True
        for v in hw.basis:
            summand = f_closure(ambient, v)
            for b in summand.basis:
                if prune(axpy(br.apply(word, b), -target, b, field), field):
                    ok = False
                    break
            if not ok:
                break
        rows.append({"lambda": list(lam.coords), "multiplicity": hw.dim,
                     "expected_exponent": exponent, "status": "pass" if ok else "fail"})
    return rows
