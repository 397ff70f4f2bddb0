"""Monodromy of the EGO connection and comparison with the quantum representation.

Flat sections of

    nabla = d - sum_i A_i dz_i,
    A_i(z) = sum_k Y_{i,k}/(z_i - alpha_k) - sum_{j != i} nu s_ij/(z_i - z_j)

solve Phi'(t) = (sum_i A_i(z(t)) z_i'(t)) Phi(t).  Punctures sit at
alpha_k = -m - 1 + k and the basepoint is z0 = (1, ..., n).
"""

from __future__ import annotations

import cmath
import itertools
import logging
import math
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

from .classical import ClassicalRep, check_rgdaha_relations, montarani_rep
from .core import RepSpec, build_quantum_rep

log = logging.getLogger(__name__)

__all__ = [
    "LoopGeometry",
    "Loop",
    "ClearanceError",
    "TransportError",
    "punctures",
    "basepoint",
    "ego_coefficient",
    "loop_T",
    "loop_U",
    "transport",
    "parallel_transport",
    "rectangle_discrepancy",
    "monodromy_generators",
    "specialize_quantum",
    "MonodromyReport",
    "compare_reps",
    "convergence_table",
    "enumerate_words",
    "random_words",
    "word_product",
]


class ClearanceError(ValueError):
    """A loop comes closer than the allowed clearance to a pole."""


class TransportError(RuntimeError):
    """The adaptive integrator failed (typically step-size underflow)."""


@dataclass(frozen=True)
class LoopGeometry:
    depth: float = 0.5            # how far below the real axis loop_U travels
    radius: float = 0.3           # radius of the circle around the puncture
    exchange_radius: float = 0.5  # half the distance between neighbouring z's
    clearance: float = 0.2

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown geometry keys: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in d.items()})


def punctures(m):
    return np.array([-m - 1 + k for k in range(1, m + 1)], dtype=complex)


def basepoint(n):
    return np.arange(1, n + 1, dtype=complex)


# ---------------------------------------------------------------------------

@dataclass
class Segment:
    """Smooth path s in [0, 1] -> C^n with its derivative."""

    z: object
    dz: object

    def reversed(self):
        z, dz = self.z, self.dz
        return Segment(lambda s: z(1 - s), lambda s: -dz(1 - s))


@dataclass
class Loop:
    segments: list
    n: int
    m: int
    permutation: tuple | None = None   # (i, i+1) for exchange loops, 1-based
    label: str = ""

    def start(self):
        return self.segments[0].z(0.0)

    def end(self):
        return self.segments[-1].z(1.0)

    def reversed(self):
        return Loop([s.reversed() for s in reversed(self.segments)], self.n, self.m,
                    self.permutation, self.label + "^-1")

    def samples(self, per_segment=200):
        s = np.linspace(0.0, 1.0, per_segment)
        return np.concatenate([np.array([seg.z(t) for t in s]) for seg in self.segments])

    def clearance(self, per_segment=200):
        pts = self.samples(per_segment)
        alpha = punctures(self.m)
        best = math.inf
        for row in pts:
            if self.m:
                best = min(best, float(np.min(np.abs(row[:, None] - alpha[None, :]))))
            if self.n > 1:
                diff = np.abs(row[:, None] - row[None, :])
                diff[np.diag_indices(self.n)] = np.inf
                best = min(best, float(np.min(diff)))
        return best

    def check_clearance(self, minimum=0.2, per_segment=200):
        c = self.clearance(per_segment)
        if c < minimum - 1e-12:
            raise ClearanceError(f"loop {self.label} has clearance {c:.3g} < {minimum}")
        return c

    def perturbed(self, amplitude, rng):
        """Add a smooth bump, vanishing at segment ends, of size <= amplitude."""
        out = []
        for seg in self.segments:
            bump = amplitude * rng.random(self.n) * np.exp(2j * np.pi * rng.random(self.n))

            def z(s, seg=seg, bump=bump):
                return seg.z(s) + bump * math.sin(math.pi * s)

            def dz(s, seg=seg, bump=bump):
                return seg.dz(s) + bump * math.pi * math.cos(math.pi * s)
            out.append(Segment(z, dz))
        return Loop(out, self.n, self.m, self.permutation, self.label + "~")

    def to_dict(self, per_segment=16):
        pts = self.samples(per_segment)
        return {"label": self.label, "permutation": list(self.permutation) if self.permutation else None,
                "points": [[[float(c.real), float(c.imag)] for c in row] for row in pts]}


def _move_one(n, base, index, path, dpath):
    """Segment moving coordinate ``index`` (0-based) along path(s), others fixed."""
    def z(s):
        out = base.copy()
        out[index] = path(s)
        return out

    def dz(s):
        out = np.zeros(n, dtype=complex)
        out[index] = dpath(s)
        return out
    return Segment(z, dz)


def loop_T(i, n, m, geometry=LoopGeometry()):
    """z_i and z_{i+1} swap counterclockwise on the circle through them."""
    if not 1 <= i < n:
        raise IndexError(f"T_{i} needs 1 <= i < n = {n}")
    base = basepoint(n)
    center = (2 * i + 1) / 2
    r = geometry.exchange_radius

    def z(s):
        out = base.copy()
        e = cmath.exp(1j * math.pi * s)
        out[i - 1] = center - r * e
        out[i] = center + r * e
        return out

    def dz(s):
        out = np.zeros(n, dtype=complex)
        de = 1j * math.pi * cmath.exp(1j * math.pi * s)
        out[i - 1] = -r * de
        out[i] = r * de
        return out

    loop = Loop([Segment(z, dz)], n, m, (i, i + 1), f"T{i}")
    loop.check_clearance(geometry.clearance)
    return loop


def loop_U(k, n, m, geometry=LoopGeometry()):
    """z_1 dips below the axis, runs left under alpha_m..alpha_{k+1}, circles
    alpha_k once counterclockwise, and comes back the same way."""
    if not 1 <= k <= m:
        raise IndexError(f"U_{k} needs 1 <= k <= m = {m}")
    base = basepoint(n)
    a = float(punctures(m)[k - 1].real)
    h, r = geometry.depth, geometry.radius
    start = complex(base[0])
    legs = [
        _move_one(n, base, 0, lambda s: start - 1j * h * s, lambda s: -1j * h),
        _move_one(n, base, 0, lambda s: start + (a - start.real) * s - 1j * h,
                  lambda s: complex(a - start.real)),
        _move_one(n, base, 0, lambda s: a - 1j * (h - (h - r) * s), lambda s: 1j * (h - r)),
    ]
    circle = _move_one(
        n, base, 0,
        lambda s: a + r * cmath.exp(1j * (-math.pi / 2 + 2 * math.pi * s)),
        lambda s: 2j * math.pi * r * cmath.exp(1j * (-math.pi / 2 + 2 * math.pi * s)))
    segments = legs + [circle] + [seg.reversed() for seg in reversed(legs)]
    loop = Loop(segments, n, m, None, f"U{k}")
    loop.check_clearance(geometry.clearance)
    return loop


# ---------------------------------------------------------------------------

def ego_coefficient(z, rep: ClassicalRep, clearance=0.0):
    """Matrices A_1(z), ..., A_n(z) of the EGO connection."""
    n, m = rep.spec.n, rep.spec.m
    alpha = punctures(m)
    z = np.asarray(z, dtype=complex)
    dim = rep.dim
    out = []
    for i in range(n):
        A = np.zeros((dim, dim), dtype=complex)
        for k in range(m):
            dist = z[i] - alpha[k]
            if abs(dist) < clearance:
                raise ClearanceError(f"z_{i + 1} within {clearance} of alpha_{k + 1}")
            A += rep.Y[i][k] / dist
        for j in range(n):
            if j == i:
                continue
            dist = z[i] - z[j]
            if abs(dist) < clearance:
                raise ClearanceError(f"z_{i + 1} within {clearance} of z_{j + 1}")
            A -= rep.nu * rep.s_op(i + 1, j + 1) / dist
        out.append(A)
    return out


def _rhs(rep, seg):
    dim = rep.dim

    def f(s, y):
        z = seg.z(s)
        dz = seg.dz(s)
        M = sum(A * d for A, d in zip(ego_coefficient(z, rep), dz) if d != 0)
        if isinstance(M, int):
            return np.zeros_like(y)
        return (M @ y.reshape(dim, dim)).ravel()
    return f


def transport(loop: Loop, rep: ClassicalRep, tol=1e-10, start=None):
    """Raw parallel transport operator along ``loop`` (no fiber identification)."""
    dim = rep.dim
    Phi = np.eye(dim, dtype=complex) if start is None else np.array(start, dtype=complex)
    steps = 0
    for seg in loop.segments:
        sol = solve_ivp(_rhs(rep, seg), (0.0, 1.0), Phi.ravel(), method="DOP853",
                        rtol=tol, atol=tol * 1e-2)
        if not sol.success:
            raise TransportError(f"integration along {loop.label} failed: {sol.message}")
        Phi = sol.y[:, -1].reshape(dim, dim)
        steps += sol.t.size - 1
    return Phi, steps


@dataclass
class TransportResult:
    matrix: np.ndarray
    error_estimate: float
    steps: int


def parallel_transport(loop: Loop, rep: ClassicalRep, tol=1e-10) -> TransportResult:
    """Monodromy operator of ``loop`` on the fiber at the basepoint.

    Exchange loops end at the permuted basepoint; the fiber there is
    identified with the fiber at z0 through s_{i,i+1}.  The error estimate is
    the deviation from a solve at ten times the tolerance.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    Phi, steps = transport(loop, rep, tol)
    coarse, _ = transport(loop, rep, tol * 10)
    if loop.permutation is not None:
        s = rep.s_op(*loop.permutation)
        Phi = s @ Phi
        coarse = s @ coarse
    err = float(np.max(np.abs(Phi - coarse))) if Phi.size else 0.0
    return TransportResult(Phi, err, steps)


def rectangle_discrepancy(rep: ClassicalRep, z, i, j, h=0.05, tol=1e-12):
    """Transport z_i then z_j by h versus z_j then z_i; flatness makes them agree."""
    n, m = rep.spec.n, rep.spec.m
    z = np.asarray(z, dtype=complex)

    def step(base, idx, amount):
        b = base.copy()
        return _move_one(n, b, idx, lambda s: b[idx] + amount * s, lambda s: amount)

    def path(first, second):
        a = step(z, first, h)
        mid = z.copy()
        mid[first] += h
        b = step(mid, second, h)
        return Loop([a, b], n, m, None, "rect")

    if rep.dim == 0:
        return 0.0
    P1, _ = transport(path(i, j), rep, tol)
    P2, _ = transport(path(j, i), rep, tol)
    return float(np.max(np.abs(P1 - P2)))


def monodromy_generators(rep: ClassicalRep, tol=1e-10, geometry=LoopGeometry(), perturb=None, jobs=1):
    """rho(T_i) and rho(U_k) as dicts label -> TransportResult."""
    n, m = rep.spec.n, rep.spec.m
    loops = [loop_T(i, n, m, geometry) for i in range(1, n)] + [loop_U(k, n, m, geometry) for k in range(1, m + 1)]
    if perturb is not None:
        amplitude, rng = perturb
        loops = [lp.perturbed(amplitude, rng) for lp in loops]
        for lp in loops:
            lp.check_clearance(geometry.clearance)
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda lp: parallel_transport(lp, rep, tol), loops))
    else:
        results = [parallel_transport(lp, rep, tol) for lp in loops]
    return {lp.label.rstrip("~"): res for lp, res in zip(loops, results)}, loops


# ---------------------------------------------------------------------------

def specialize_quantum(qrep, nu):
    """Quantum generators at q = exp(-i pi nu), as complex arrays.

    The branch is v = exp(-i pi nu / D), so q^a = exp(-i pi nu a) for every
    representable exponent a.
    """
    D = qrep.field.root_order
    v0 = cmath.exp(-1j * math.pi * nu / D)

    def conv(mat):
        return np.array([[x.evaluate(v0) for x in row] for row in mat], dtype=complex).reshape(len(mat), len(mat))

    out = {}
    for i, (a, b) in enumerate(zip(qrep.T, qrep.T_inv), start=1):
        out[f"T{i}"], out[f"T{i}^-1"] = conv(a), conv(b)
    for k, (a, b) in enumerate(zip(qrep.U, qrep.U_inv), start=1):
        out[f"U{k}"], out[f"U{k}^-1"] = conv(a), conv(b)
    return out


def enumerate_words(letters, max_len):
    for length in range(1, max_len + 1):
        yield from itertools.product(letters, repeat=length)


def random_words(letters, count, max_len, rng):
    out = []
    for _ in range(count):
        length = int(rng.integers(1, max_len + 1))
        out.append(tuple(letters[int(x)] for x in rng.integers(0, len(letters), size=length)))
    return out


def word_product(mats, word, dim):
    out = np.eye(dim, dtype=complex)
    for x in word:
        out = out @ mats[x]
    return out


@dataclass
class MonodromyReport:
    spec: RepSpec
    nu: float
    q: complex
    tol: float
    compare_tol: float
    dim_classical: int
    dim_quantum: int
    rgdaha: dict
    monodromy: dict                  # label -> matrix
    error_estimates: dict
    quantum: dict                    # label -> matrix
    charpoly: dict                   # label -> {"monodromy": [...], "quantum": [...], "delta": float}
    eigen_checks: dict
    relation_checks: dict
    trace_deltas: dict               # word string -> delta (only the worst few kept)
    max_trace_delta: float
    words_checked: int
    worst_word: str | None
    loops: list = dc_field(default_factory=list)
    elapsed: float = 0.0
    warnings: list = dc_field(default_factory=list)

    @property
    def max_deviation(self):
        vals = [c["delta"] for c in self.charpoly.values()] + [self.max_trace_delta]
        vals += list(self.eigen_checks.values()) + list(self.relation_checks.values())
        return max(vals) if vals else 0.0

    @property
    def match(self):
        return (self.dim_classical == self.dim_quantum and self.rgdaha["verdict"] != "fail"
                and self.max_deviation <= self.compare_tol)


def _cx(a):
    return [[float(a.real), float(a.imag)] for a in np.ravel(a)] if np.ndim(a) == 1 else \
        [[[float(x.real), float(x.imag)] for x in row] for row in a]


def _charpoly(M):
    return np.poly(M) if M.size else np.array([1.0 + 0j])


def _is_small_rational(nu, max_den=12, eps=1e-9):
    f = Fraction(nu).limit_denominator(max_den)
    return abs(float(f) - nu) < eps


def compare_reps(spec: RepSpec, nu=1 / math.pi, tol=1e-10, compare_tol=1e-6,
                 geometry=LoopGeometry(), max_len=4, n_random=50, random_len=8, seed=0,
                 jobs=1, qrep=None, crep=None) -> MonodromyReport:
    """Monodromy of the EGO connection versus the quantum representation at q = e^{-i pi nu}.

    Equivalence is tested through conjugation-invariant data: characteristic
    polynomials of the generators and traces of words in T_i^{+-1}, U_k^{+-1}.
    """
    t0 = time.perf_counter()
    warnings = []
    if _is_small_rational(nu):
        msg = f"nu = {nu} is a rational with small denominator; q is a root of unity"
        log.warning(msg)
        warnings.append(msg)
    crep = crep or montarani_rep(spec, nu)
    rg = check_rgdaha_relations(crep).to_dict()
    qrep = qrep or build_quantum_rep(spec)
    q = cmath.exp(-1j * math.pi * nu)
    n, m = spec.n, spec.m
    dim = crep.dim
    log.info("monodromy: dim E_(n,chi) = %d, dim E = %d", dim, qrep.dim)
    gens, loops = monodromy_generators(crep, tol, geometry, jobs=jobs)
    rho = {}
    for label, res in gens.items():
        rho[label] = res.matrix
        rho[label + "^-1"] = np.linalg.inv(res.matrix)
    quant = specialize_quantum(qrep, nu) if qrep.dim else {}
    base = [f"T{i}" for i in range(1, n)] + [f"U{k}" for k in range(1, m + 1)]
    report = MonodromyReport(
        spec, nu, q, tol, compare_tol, dim, qrep.dim, rg,
        {k: v for k, v in rho.items() if not k.endswith("^-1")},
        {k: r.error_estimate for k, r in gens.items()}, quant, {}, {}, {}, {}, 0.0, 0, None,
        [lp.to_dict() for lp in loops], warnings=warnings)
    if dim != qrep.dim or dim == 0:
        report.elapsed = time.perf_counter() - t0
        return report

    for label in base:
        a, b = _charpoly(rho[label]), _charpoly(quant[label])
        report.charpoly[label] = {"monodromy": a, "quantum": b, "delta": float(np.max(np.abs(a - b)))}

    I = np.eye(dim)
    for i in range(1, n):
        T = rho[f"T{i}"]
        report.eigen_checks[f"T{i}: (T - q)(T + q^-1)"] = float(np.max(np.abs((T - q * I) @ (T + I / q))))
        report.relation_checks[f"T{i} - T{i}^-1 = q - q^-1"] = float(
            np.max(np.abs(T - rho[f"T{i}^-1"] - (q - 1 / q) * I)))
    for i in range(1, n - 1):
        a, b = rho[f"T{i}"], rho[f"T{i + 1}"]
        report.relation_checks[f"braid T{i} T{i + 1}"] = float(np.max(np.abs(a @ b @ a - b @ a @ b)))
    for k in range(1, m + 1):
        acc = I.astype(complex)
        for g in crep.gammas[k - 1]:
            acc = acc @ (rho[f"U{k}"] - cmath.exp(2j * math.pi * g) * I)
        report.eigen_checks[f"U{k}: prod_j (U - e^(2 pi i gamma_kj))"] = float(np.max(np.abs(acc)))
    long = word_product(rho, [f"U{k}" for k in range(1, m + 1)] + [f"T{i}" for i in range(1, n)]
                        + [f"T{i}" for i in range(n - 1, 0, -1)], dim)
    report.relation_checks["U_1..U_m T_1..T_n-1 T_n-1..T_1 = 1"] = float(np.max(np.abs(long - I)))

    letters = base + [x + "^-1" for x in base]
    words = list(enumerate_words(letters, max_len))
    words += random_words(letters, n_random, random_len, np.random.default_rng(seed))
    worst, worst_word = 0.0, None
    deltas = {}
    for w in words:
        delta = abs(np.trace(word_product(rho, w, dim)) - np.trace(word_product(quant, w, dim)))
        key = " ".join(w)
        deltas[key] = float(delta)
        if delta > worst:
            worst, worst_word = float(delta), key
    report.trace_deltas = dict(sorted(deltas.items(), key=lambda kv: -kv[1])[:10])
    report.max_trace_delta = worst
    report.words_checked = len(words)
    report.worst_word = worst_word
    report.elapsed = time.perf_counter() - t0
    return report


def convergence_table(spec: RepSpec, nu=1 / math.pi, tols=(1e-6, 1e-8, 1e-10, 1e-12),
                      geometry=LoopGeometry(), crep=None):
    """Max entry change of each generator's monodromy relative to the finest tolerance."""
    crep = crep or montarani_rep(spec, nu)
    runs = {t: monodromy_generators(crep, t, geometry)[0] for t in tols}
    finest = runs[min(tols)]
    rows = []
    for t in tols:
        for label, res in runs[t].items():
            rows.append({"tol": t, "generator": label,
                         "delta_vs_finest": float(np.max(np.abs(res.matrix - finest[label].matrix))),
                         "error_estimate": res.error_estimate, "steps": res.steps})
    return rows
