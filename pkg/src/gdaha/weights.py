"""sl_N weight combinatorics and U_q(sl_N)-modules inside tensor powers of C^N.

Everything is realized concretely: the quantum group acts on ``(C^N)^{x d}``
through the iterated coproduct

    Delta(K_i) = K_i x K_i,  Delta(E_i) = E_i x K_i + 1 x E_i,
    Delta(F_i) = F_i x 1 + K_i^{-1} x F_i,

and irreducible modules, tensor products and isotypic components are echelon
subspaces of that ambient space.  Letters of basis words are 0-based, so the
vector ``e_1`` of the text is letter ``0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian

from .linalg import Echelon, Subspace, axpy, kernel_combinations, kron, prune

__all__ = [
    "Weight",
    "AlgebraPresentation",
    "sl_pairing",
    "two_rho",
    "casimir",
    "weyl_dimension",
    "partitions",
    "AmbientRealization",
    "vector_rep",
    "tensor_power_action",
    "UqRelationReport",
    "validate_uq_relations",
    "TensorSubspace",
    "full_space",
    "highest_weight_vectors",
    "IrrepRealization",
    "irrep_realization",
    "zero_isotypic",
    "pieri",
    "multiset_words",
]


@dataclass(frozen=True)
class Weight:
    """gl_N-style integer coordinates; the sl_N weight is the class mod (1,...,1)."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def of(cls, *coords):
        if len(coords) == 1 and not isinstance(coords[0], int):
            coords = tuple(coords[0])
        return cls(tuple(coords))

    @classmethod
    def zero(cls, N):
        return cls((0,) * N)

    @classmethod
    def epsilon(cls, N, j=1):
        return cls(tuple(1 if i == j - 1 else 0 for i in range(N)))

    @classmethod
    def simple_root(cls, N, i):
        c = [0] * N
        c[i - 1], c[i] = 1, -1
        return cls(tuple(c))

    @property
    def N(self):
        return len(self.coords)

    @property
    def size(self):
        return sum(self.coords)

    def __add__(self, other):
        _check_rank(self, other)
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        _check_rank(self, other)
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __mul__(self, k):
        return Weight(tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def shift(self, c):
        return Weight(tuple(a + c for a in self.coords))

    def sl_equal(self, other):
        _check_rank(self, other)
        diff = {a - b for a, b in zip(self.coords, other.coords)}
        return len(diff) <= 1

    def is_dominant(self):
        return all(a >= b for a, b in zip(self.coords, self.coords[1:]))

    def is_partition(self):
        return self.is_dominant() and (not self.coords or self.coords[-1] >= 0)

    def is_sl_zero(self):
        return len(set(self.coords)) <= 1

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def _check_rank(a, b):
    if a.N != b.N:
        raise ValueError(f"weights of different rank: {a} vs {b}")


@dataclass(frozen=True)
class AlgebraPresentation:
    N: int

    @property
    def cartan(self):
        r = self.N - 1
        return tuple(tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(r))
                     for i in range(r))

    def a(self, i, j):
        """Cartan entry with 1-based indices."""
        return self.cartan[i - 1][j - 1]


def sl_pairing(lam, mu):
    """sum lam_i mu_i - (sum lam)(sum mu)/N, invariant under constant shifts."""
    _check_rank(lam, mu)
    N = lam.N
    dot = sum(a * b for a, b in zip(lam.coords, mu.coords))
    return Fraction(dot) - Fraction(lam.size * mu.size, N)


def two_rho(N):
    return Weight(tuple(N - 1 - 2 * i for i in range(N)))


def casimir(lam):
    """Twist exponent (lam, lam + 2 rho)."""
    return sl_pairing(lam, lam + two_rho(lam.N))


def weyl_dimension(mu):
    num = Fraction(1)
    c = mu.coords
    for i in range(len(c)):
        for j in range(i + 1, len(c)):
            num *= Fraction(c[i] - c[j] + j - i, j - i)
    return int(num)


def partitions(d, N):
    """Partitions of d with at most N parts, as Weights, lexicographically decreasing."""
    out = []

    def rec(prefix, remaining, cap):
        if len(prefix) == N:
            if remaining == 0:
                out.append(Weight(tuple(prefix)))
            return
        for k in range(min(remaining, cap), -1, -1):
            rec(prefix + [k], remaining - k, k)

    rec([], d, d)
    return out


def multiset_words(counts):
    """All words with letter ``a`` occurring ``counts[a]`` times, in lex order."""
    counts = list(counts)
    total = sum(counts)
    word = []

    def rec():
        if len(word) == total:
            yield tuple(word)
            return
        for a, k in enumerate(counts):
            if k:
                counts[a] -= 1
                word.append(a)
                yield from rec()
                word.pop()
                counts[a] += 1

    yield from rec()


def content(word, N):
    counts = [0] * N
    for a in word:
        counts[a] += 1
    return tuple(counts)


# ---------------------------------------------------------------------------

def _vector_local(N, field):
    """Generator matrices of the vector representation, keyed by (gen, i)."""
    q, qi = field.q_pow(1), field.q_pow(-1)
    local = {}
    for i in range(N - 1):
        local[("E", i)] = {i + 1: [(i, field.one)]}
        local[("F", i)] = {i: [(i + 1, field.one)]}
        k = {a: field.one for a in range(N)}
        k[i], k[i + 1] = q, qi
        kinv = {a: field.one for a in range(N)}
        kinv[i], kinv[i + 1] = qi, q
        local[("K", i)] = k
        local[("Kinv", i)] = kinv
    return local


class AmbientRealization:
    """U_q(sl_N) acting on (C^N)^{x d} via the iterated coproduct.

    ``local`` holds the single-factor generator matrices; it defaults to the
    vector representation and may be replaced (e.g. for negative controls).
    Images of basis words are cached.
    """

    def __init__(self, N, d, field, local=None):
        if N < 2:
            raise ValueError("N must be at least 2")
        self.N = N
        self.d = d
        self.field = field
        self.local = _vector_local(N, field) if local is None else local
        self._cache = {}

    @property
    def dim(self):
        return self.N ** self.d

    def words(self):
        return cartesian(range(self.N), repeat=self.d)

    def weight_of(self, word):
        return Weight(content(word, self.N))

    def _word_image(self, gen, i, word):
        key = (gen, i, word)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        f = self.field
        if gen in ("K", "Kinv"):
            diag = self.local[(gen, i)]
            c = f.one
            for a in word:
                c = c * diag[a]
            out = {word: c}
        else:
            mat = self.local[(gen, i)]
            if gen == "E":
                tail = self.local[("K", i)]
                out = {}
                for p, a in enumerate(word):
                    for b, c in mat.get(a, ()):
                        coeff = c
                        for r in word[p + 1:]:
                            coeff = coeff * tail[r]
                        w = word[:p] + (b,) + word[p + 1:]
                        out = axpy(out, coeff, {w: f.one}, f)
            else:
                head = self.local[("Kinv", i)]
                out = {}
                for p, a in enumerate(word):
                    for b, c in mat.get(a, ()):
                        coeff = c
                        for r in word[:p]:
                            coeff = coeff * head[r]
                        w = word[:p] + (b,) + word[p + 1:]
                        out = axpy(out, coeff, {w: f.one}, f)
        self._cache[key] = out
        return out

    def act(self, gen, i, vec):
        """Apply generator ``gen`` in {'E','F','K','Kinv'} with 1-based index i."""
        if not 1 <= i < self.N:
            raise IndexError(f"generator index {i} out of range for N={self.N}")
        f = self.field
        out = {}
        for w, c in vec.items():
            out = axpy(out, c, self._word_image(gen, i - 1, w), f)
        return out

    def matrix(self, gen, i):
        """Sparse matrix as {column word: image vector} over all basis words."""
        return {w: self.act(gen, i, {w: self.field.one}) for w in self.words()}


def vector_rep(N, field):
    return AmbientRealization(N, 1, field)


def tensor_power_action(N, d, field):
    if d < 0:
        raise ValueError("d must be nonnegative")
    return AmbientRealization(N, d, field)


# ---------------------------------------------------------------------------

@dataclass
class UqRelationReport:
    passed: bool
    checked: list
    failure: dict | None = None

    def __bool__(self):
        return self.passed


def _vec_eq(x, y, f):
    return not prune(axpy(x, -f.one, y, f), f)


def validate_uq_relations(a: AmbientRealization) -> UqRelationReport:
    """Check every defining relation of U_q(sl_N) on each basis vector, exactly."""
    f = a.field
    N = a.N
    pres = AlgebraPresentation(N)
    q = f.q_pow(1)
    denom = q - f.q_pow(-1)
    act = a.act
    idx = range(1, N)
    checked = []

    def serre(gen, i, j, w):
        aij = pres.a(i, j)
        top = 1 - aij
        total = {}
        for r in range(top + 1):
            v = w
            for _ in range(r):
                v = act(gen, i, v)
            v = act(gen, j, v)
            for _ in range(top - r):
                v = act(gen, i, v)
            coeff = f.q_binom(top, r) * (-1) ** r
            total = axpy(total, coeff, v, f)
        return total

    families = [
        ("K_i K_j = K_j K_i", lambda i, j, w: (act("K", i, act("K", j, w)), act("K", j, act("K", i, w)))),
        ("K_i K_i^-1 = 1", lambda i, j, w: (act("K", i, act("Kinv", i, w)), w) if i == j else None),
        ("K_i^-1 K_i = 1", lambda i, j, w: (act("Kinv", i, act("K", i, w)), w) if i == j else None),
        ("K_i E_j K_i^-1 = q^a_ij E_j", lambda i, j, w: (
            act("K", i, act("E", j, act("Kinv", i, w))),
            {k: c * f.q_pow(pres.a(i, j)) for k, c in act("E", j, w).items()})),
        ("K_i F_j K_i^-1 = q^-a_ij F_j", lambda i, j, w: (
            act("K", i, act("F", j, act("Kinv", i, w))),
            {k: c * f.q_pow(-pres.a(i, j)) for k, c in act("F", j, w).items()})),
        ("[E_i, F_j] = delta_ij (K_i - K_i^-1)/(q - q^-1)", lambda i, j, w: (
            axpy(act("E", i, act("F", j, w)), -f.one, act("F", j, act("E", i, w)), f),
            {k: c / denom for k, c in axpy(act("K", i, w), -f.one, act("Kinv", i, w), f).items()}
            if i == j else {})),
        ("q-Serre (E)", lambda i, j, w: (serre("E", i, j, w), {}) if i != j else None),
        ("q-Serre (F)", lambda i, j, w: (serre("F", i, j, w), {}) if i != j else None),
    ]
    for name, rel in families:
        checked.append(name)
        for i in idx:
            for j in idx:
                for word in a.words():
                    pair = rel(i, j, {word: f.one})
                    if pair is None:
                        continue
                    lhs, rhs = pair
                    if not _vec_eq(lhs, rhs, f):
                        return UqRelationReport(False, checked, {
                            "relation": name, "i": i, "j": j, "basis_word": list(word)})
    return UqRelationReport(True, checked)


# ---------------------------------------------------------------------------

class TensorSubspace:
    """Tensor product of weight-graded subspaces placed on consecutive blocks."""

    def __init__(self, factors, N):
        self.factors = list(factors)
        self.N = N

    @property
    def dim(self):
        d = 1
        for s in self.factors:
            d *= s.dim
        return d

    def weight_vectors(self, counts):
        counts = tuple(counts)
        graded = []
        for s in self.factors:
            by_w = {}
            for b, p in zip(s.basis, s.pivots):
                by_w.setdefault(content(p, self.N), []).append(b)
            graded.append(by_w)
        out = []

        def rec(k, remaining, acc):
            if any(r < 0 for r in remaining):
                return
            if k == len(graded):
                if not any(remaining):
                    out.append(acc)
                return
            for w, vecs in graded[k].items():
                rest = tuple(r - x for r, x in zip(remaining, w))
                for v in vecs:
                    rec(k + 1, rest, kron(acc, v))

        rec(0, counts, {(): self.factors[0].field.one} if self.factors else {})
        return out

    def all_vectors(self):
        acc = [{(): self.factors[0].field.one}]
        for s in self.factors:
            acc = [kron(x, b) for x in acc for b in s.basis]
        return acc


def full_space(N, d, field):
    """(C^N)^{x d} as a TensorSubspace of standard-basis factors."""
    one = Subspace([{(a,): field.one} for a in range(N)], [(a,) for a in range(N)], field, N)
    return TensorSubspace([one] * d, N)


def _hw_kernel(a, vectors):
    """Span of combinations of ``vectors`` killed by every E_i."""
    f = a.field
    images = []
    for v in vectors:
        tagged = {}
        for i in range(1, a.N):
            for k, c in a.act("E", i, v).items():
                tagged[(i,) + k] = c
        images.append(tagged)
    out = []
    for combo in kernel_combinations(images, f):
        x = {}
        for c, v in zip(combo, vectors):
            if not f.is_zero(c):
                x = axpy(x, c, v, f)
        out.append(x)
    return Subspace.span(out, f, a.dim)


def highest_weight_vectors(a: AmbientRealization, mu: Weight, within=None) -> Subspace:
    """Weight-``mu`` vectors (inside ``within``, default everything) killed by all E_i."""
    if mu.N != a.N:
        raise ValueError("weight rank does not match realization")
    if any(c < 0 for c in mu.coords) or mu.size != a.d:
        return Subspace.empty(a.field, a.dim)
    if within is None:
        vectors = [{w: a.field.one} for w in multiset_words(mu.coords)]
    else:
        vectors = within.weight_vectors(mu.coords)
    return _hw_kernel(a, vectors)


@dataclass
class IrrepRealization:
    mu: Weight
    host: AmbientRealization
    carrier: Subspace
    twist_exponent: Fraction

    @property
    def dim(self):
        return self.carrier.dim


class RealizationError(RuntimeError):
    pass


def f_closure(a, seed, lowering=("F",)):
    """Echelon span of the cyclic module generated by ``seed`` under lowering operators."""
    f = a.field
    ech = Echelon(f)
    first = ech.insert(seed)
    frontier = [first] if first is not None else []
    while frontier:
        nxt = []
        for v in frontier:
            for gen in lowering:
                for i in range(1, a.N):
                    w = a.act(gen, i, v)
                    if w:
                        r = ech.insert(w)
                        if r is not None:
                            nxt.append(w)
        frontier = nxt
    return ech.subspace(a.dim)


def irrep_realization(N, mu, field) -> IrrepRealization:
    """V(mu) as the F-span of a highest-weight vector inside (C^N)^{x |mu|}."""
    mu = mu if isinstance(mu, Weight) else Weight.of(mu)
    if mu.N != N:
        raise ValueError(f"weight {mu} has rank {mu.N}, expected {N}")
    if not mu.is_partition():
        raise ValueError(f"highest weight {mu} must be a partition")
    host = tensor_power_action(N, mu.size, field)
    hw = highest_weight_vectors(host, mu)
    if hw.dim == 0:
        raise RealizationError(f"no highest-weight vector of weight {mu}")
    carrier = f_closure(host, hw.basis[0])
    expected = weyl_dimension(mu)
    if carrier.dim != expected:
        raise RealizationError(f"V{mu}: realized dimension {carrier.dim} != Weyl dimension {expected}")
    return IrrepRealization(mu, host, carrier, casimir(mu))


def zero_isotypic(a: AmbientRealization, within) -> Subspace:
    """Weight-zero vectors of ``within`` annihilated by every E_i."""
    if a.d % a.N:
        return Subspace.empty(a.field, a.dim)
    counts = (a.d // a.N,) * a.N
    if within is None:
        vectors = [{w: a.field.one} for w in multiset_words(counts)]
    else:
        vectors = within.weight_vectors(counts)
    return _hw_kernel(a, vectors)


def pieri(N, mu):
    """Dominant weights mu + eps_j, lexicographically decreasing."""
    mu = mu if isinstance(mu, Weight) else Weight.of(mu)
    out = set()
    for j in range(1, N + 1):
        eta = mu + Weight.epsilon(N, j)
        if eta.is_dominant():
            out.add(eta)
    return sorted(out, key=lambda w: w.coords, reverse=True)
