"""Montarani's representation of the rational GDAHA on E_{n,chi}.

The classical gl_N action on (C^N)^{x d} is the Leibniz rule for matrix units.
Modules are realized with the same echelon machinery as the quantum side, but
over plain rationals; the resulting operators are exact until converted to
floating point for the rGDAHA checks and the monodromy integration.

Operators (positions m+i are the vector factors):

    s_ij   = Omega^gl_{m+i, m+j}            (the flip of two vector factors)
    Y_{i,k} = -nu (Omega^gl_{k, m+i} + (N - c)/m)

where Omega^gl between block k and a vector factor is the sum of flips over
the strands of the block, shifted by (lambda_k - |mu_k|)/N so that the
identity of gl_N acts on V_k by the formal parameter lambda_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product as cartesian

import numpy as np

from .core import RepSpec
from .linalg import Subspace, restrict
from .scalars import RationalField
from .weights import (
    TensorSubspace,
    Weight,
    casimir,
    f_closure,
    full_space,
    highest_weight_vectors,
    pieri,
    weyl_dimension,
    zero_isotypic,
)

__all__ = [
    "ClassicalAmbient",
    "ClassicalFiber",
    "ClassicalRep",
    "RGdahaReport",
    "classical_irrep",
    "classical_realization",
    "montarani_rep",
    "check_rgdaha_relations",
    "omega_eigenvalues",
]

QQ = RationalField()


class ClassicalAmbient:
    """gl_N acting on (C^N)^{x d}: E = E_{i,i+1}, F = E_{i+1,i}, K = identity."""

    def __init__(self, N, d):
        self.N = N
        self.d = d
        self.field = QQ
        self._cache = {}

    @property
    def dim(self):
        return self.N ** self.d

    def words(self):
        return cartesian(range(self.N), repeat=self.d)

    def _word_image(self, gen, i, word):
        key = (gen, i, word)
        hit = self._cache.get(key)
        if hit is None:
            src, dst = (i + 1, i) if gen == "E" else (i, i + 1)
            hit = {}
            for p, a in enumerate(word):
                if a == src:
                    w = word[:p] + (dst,) + word[p + 1:]
                    hit[w] = hit.get(w, 0) + Fraction(1)
            self._cache[key] = hit
        return hit

    def act(self, gen, i, vec):
        if gen in ("K", "Kinv"):
            return dict(vec)
        out = {}
        for w, c in vec.items():
            for k, x in self._word_image(gen, i - 1, w).items():
                s = out.get(k, 0) + c * x
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out


class RealizationError(RuntimeError):
    pass


_CACHE = {}


def classical_irrep(N, mu) -> Subspace:
    """Lowering-span of the classical highest-weight vector of weight mu."""
    key = (N, mu.coords)
    if key not in _CACHE:
        host = ClassicalAmbient(N, mu.size)
        hw = highest_weight_vectors(host, mu)
        if hw.dim == 0:
            raise RealizationError(f"no classical highest-weight vector of weight {mu}")
        carrier = f_closure(host, hw.basis[0])
        if carrier.dim != weyl_dimension(mu):
            raise RealizationError(
                f"classical V{mu} has dimension {carrier.dim}, Weyl formula gives {weyl_dimension(mu)}")
        _CACHE[key] = carrier
    return _CACHE[key]


@dataclass
class ClassicalFiber:
    spec: RepSpec
    ambient: ClassicalAmbient
    basis: Subspace

    @property
    def dim(self):
        return self.basis.dim

    @property
    def vector_offset(self):
        """Strand index (0-based) of the first vector factor."""
        return sum(mu.size for mu in self.spec.mus)

    def block_positions(self, k):
        start = sum(mu.size for mu in self.spec.mus[: k - 1])
        return range(start, start + self.spec.mus[k - 1].size)


def classical_realization(spec: RepSpec) -> ClassicalFiber:
    """E_{n,chi}: weight-zero vectors of V_1 x ... x V_m x (C^N)^n killed by raising."""
    N = spec.N
    ambient = ClassicalAmbient(N, spec.strands)
    cn = full_space(N, 1, QQ).factors[0]
    factors = [classical_irrep(N, mu) for mu in spec.mus] + [cn] * spec.n
    E = zero_isotypic(ambient, TensorSubspace(factors, N))
    return ClassicalFiber(spec, ambient, E)


def _flip(p, r):
    def op(vec):
        out = {}
        for w, c in vec.items():
            k = list(w)
            k[p], k[r] = k[r], k[p]
            out[tuple(k)] = c
        return out
    return op


def _flip_sum(positions, r):
    flips = [_flip(p, r) for p in positions]

    def op(vec):
        out = {}
        for fl in flips:
            for k, c in fl(vec).items():
                s = out.get(k, 0) + c
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out
    return op


def _to_array(mat):
    return np.array([[float(x) for x in row] for row in mat], dtype=float).reshape(len(mat), len(mat))


def omega_eigenvalues(spec: RepSpec, k):
    """Eigenvalues w_j of Omega^gl on the Pieri summands of V_k x C^N (exact)."""
    N = spec.N
    mu = spec.mus[k - 1]
    eps = casimir(Weight.epsilon(N))
    lam = spec.lambdas[k - 1]
    return tuple((casimir(eta) - casimir(mu) - eps) / 2 + lam / N for eta in pieri(N, mu))


@dataclass
class ClassicalRep:
    spec: RepSpec
    nu: float
    fiber: ClassicalFiber
    s: dict                       # (i, j) 1-based, i < j -> array
    Y: list                       # Y[i-1][k-1]
    omega: list                   # exact Omega^gl_{k, m+i} (Fraction matrices) as arrays
    gammas: tuple                 # per leg
    w: tuple                      # per leg, exact
    exact_s: dict = dc_field(default_factory=dict)

    @property
    def dim(self):
        return self.fiber.dim

    def s_op(self, i, j):
        if i == j:
            return np.eye(self.dim)
        return self.s[(min(i, j), max(i, j))]


def montarani_rep(spec: RepSpec, nu: float) -> ClassicalRep:
    """Build s_ij and Y_{i,k} on E_{n,chi}.

    Restriction is exact: any operator leaving the fiber raises
    :class:`~gdaha.linalg.NotInSubspaceError`.
    """
    if nu == 0:
        raise ValueError("nu must be nonzero")
    fiber = classical_realization(spec)
    E = fiber.basis
    N, m, n = spec.N, spec.m, spec.n
    off = fiber.vector_offset
    c = spec.c
    s, exact_s = {}, {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            mat = restrict(_flip(off + i - 1, off + j - 1), E) if E.dim else []
            exact_s[(i, j)] = mat
            s[(i, j)] = _to_array(mat) if E.dim else np.zeros((0, 0))
    Y, omegas = [], []
    for i in range(1, n + 1):
        row, orow = [], []
        for k in range(1, m + 1):
            shift = (spec.lambdas[k - 1] - spec.mus[k - 1].size) / N
            if E.dim:
                mat = restrict(_flip_sum(fiber.block_positions(k), off + i - 1), E)
                om = _to_array(mat) + float(shift) * np.eye(E.dim)
            else:
                om = np.zeros((0, 0))
            orow.append(om)
            row.append(-nu * (om + float((N - c) / m) * np.eye(E.dim)))
        Y.append(row)
        omegas.append(orow)
    ws = tuple(omega_eigenvalues(spec, k) for k in range(1, m + 1))
    gammas = tuple(tuple(-nu * float(w + (N - c) / m) for w in wk) for wk in ws)
    return ClassicalRep(spec, nu, fiber, s, Y, omegas, gammas, ws, exact_s)


@dataclass
class RGdahaReport:
    deviations: dict            # relation number -> max abs deviation (None if vacuous)
    tol: float
    names: dict

    @property
    def passed(self):
        return all(d is None or d <= self.tol for d in self.deviations.values())

    @property
    def first_failure(self):
        for k, d in self.deviations.items():
            if d is not None and d > self.tol:
                return k
        return None

    def to_dict(self):
        return {"tol": self.tol, "verdict": "pass" if self.passed else "fail",
                "relations": [{"relation": k, "name": self.names[k],
                               "max_deviation": d,
                               "status": "vacuous" if d is None else ("pass" if d <= self.tol else "fail")}
                              for k, d in self.deviations.items()]}


def check_rgdaha_relations(rep: ClassicalRep, tol=1e-12) -> RGdahaReport:
    names = {
        1: "s_ij Y_ik = Y_jk s_ij",
        2: "s_ij Y_hk = Y_hk s_ij (h != i,j)",
        3: "prod_j (Y_ik - gamma_kj) = 0",
        4: "sum_k Y_ik = nu sum_{j!=i} s_ij",
        5: "[Y_ik, Y_jk] = nu (Y_ik - Y_jk) s_ij",
        6: "[Y_ik, Y_jl] = 0 (k != l)",
    }
    n, m = rep.spec.n, rep.spec.m
    dev = {k: [] for k in names}
    if rep.dim == 0:
        return RGdahaReport({k: None for k in names}, tol, names)
    I = np.eye(rep.dim)
    Y, nu = rep.Y, rep.nu
    norm = lambda a: float(np.max(np.abs(a))) if a.size else 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            sij = rep.s_op(i + 1, j + 1)
            for k in range(m):
                dev[1].append(norm(sij @ Y[i][k] - Y[j][k] @ sij))
                for h in range(n):
                    if h not in (i, j):
                        dev[2].append(norm(sij @ Y[h][k] - Y[h][k] @ sij))
                comm = Y[i][k] @ Y[j][k] - Y[j][k] @ Y[i][k]
                dev[5].append(norm(comm - nu * (Y[i][k] - Y[j][k]) @ sij))
                for l in range(m):
                    if l != k:
                        dev[6].append(norm(Y[i][k] @ Y[j][l] - Y[j][l] @ Y[i][k]))
    for i in range(n):
        for k in range(m):
            acc = I.copy()
            for g in rep.gammas[k]:
                acc = acc @ (Y[i][k] - g * I)
            dev[3].append(norm(acc))
        total = sum(Y[i][k] for k in range(m))
        rhs = nu * sum((rep.s_op(i + 1, j + 1) for j in range(n) if j != i), np.zeros_like(I))
        dev[4].append(norm(total - rhs))
    return RGdahaReport({k: (max(v) if v else None) for k, v in dev.items()}, tol, names)
