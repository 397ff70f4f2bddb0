"""Sparse vectors, echelon subspaces and small dense matrices over a field.

Vectors are plain dicts mapping a basis key (a tuple of letters, i.e. a pure
tensor ``e_{w1} x ... x e_{wd}``) to a nonzero scalar.  Keys order
lexicographically, which is the Kronecker order of the ambient tensor power.
Every routine takes the field context explicitly so the same code runs over
exact rational functions, exact rationals, or complex floats.
"""

from __future__ import annotations

from typing import Callable, Iterable

__all__ = [
    "NotInSubspaceError",
    "axpy",
    "scale",
    "prune",
    "kron",
    "Subspace",
    "Echelon",
    "kernel_combinations",
    "restrict",
    "mat_mul",
    "mat_add",
    "mat_sub",
    "mat_scale",
    "identity",
    "mat_is_zero",
    "first_nonzero_column",
    "mat_to_strings",
]


class NotInSubspaceError(ArithmeticError):
    """A vector expected to lie in a subspace does not."""


def prune(x, field):
    return {k: c for k, c in x.items() if not field.is_zero(c)}


def axpy(x, a, y, field):
    """Return ``x + a*y``."""
    out = dict(x)
    for k, c in y.items():
        s = out.get(k, field.zero) + a * c
        if field.is_zero(s):
            out.pop(k, None)
        else:
            out[k] = s
    return out


def scale(x, a, field):
    if field.is_zero(a):
        return {}
    return {k: a * c for k, c in x.items()}


def kron(x, y):
    return {kx + ky: cx * cy for kx, cx in x.items() for ky, cy in y.items()}


def _leading(x, field):
    keys = [k for k, c in x.items() if not field.is_zero(c)]
    return min(keys) if keys else None


class Echelon:
    """Incrementally maintained reduced row-echelon basis."""

    def __init__(self, field):
        self.field = field
        self.rows = {}  # pivot key -> row vector (1 at pivot, 0 at other pivots)

    def reduce(self, vec):
        f = self.field
        w = prune(vec, f)
        for p, r in self.rows.items():
            c = w.get(p)
            if c is not None and not f.is_zero(c):
                w = axpy(w, -c, r, f)
        return w

    def insert(self, vec):
        """Add ``vec``; return its reduced nonzero remainder or None if dependent."""
        f = self.field
        w = self.reduce(vec)
        p = _leading(w, f)
        if p is None:
            return None
        lead = w[p]
        w = {k: c / lead for k, c in w.items() if not f.is_zero(c)}
        w[p] = f.one
        for pp, r in list(self.rows.items()):
            c = r.get(p)
            if c is not None and not f.is_zero(c):
                self.rows[pp] = axpy(r, -c, w, f)
        self.rows[p] = w
        return w

    def __len__(self):
        return len(self.rows)

    def subspace(self, ambient_dim=None):
        pivots = sorted(self.rows)
        return Subspace([self.rows[p] for p in pivots], pivots, self.field, ambient_dim)


class Subspace:
    """Subspace given by its reduced row-echelon basis (unique)."""

    def __init__(self, basis, pivots, field, ambient_dim=None):
        self.basis = list(basis)
        self.pivots = list(pivots)
        self.field = field
        self.ambient_dim = ambient_dim

    @classmethod
    def span(cls, vectors: Iterable[dict], field, ambient_dim=None):
        ech = Echelon(field)
        for v in vectors:
            ech.insert(v)
        return ech.subspace(ambient_dim)

    @classmethod
    def empty(cls, field, ambient_dim=None):
        return cls([], [], field, ambient_dim)

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def coordinates(self, vec):
        """Coordinates of ``vec`` in the echelon basis; exact membership check."""
        f = self.field
        coords = [vec.get(p, f.zero) for p in self.pivots]
        resid = prune(vec, f)
        for c, b in zip(coords, self.basis):
            if not f.is_zero(c):
                resid = axpy(resid, -c, b, f)
        if resid:
            key = min(resid)
            raise NotInSubspaceError(
                f"vector has component {resid[key]} at {key} outside the subspace")
        return coords

    def contains(self, vec):
        try:
            self.coordinates(vec)
        except NotInSubspaceError:
            return False
        return True

    def combine(self, coords):
        out = {}
        for c, b in zip(coords, self.basis):
            if not self.field.is_zero(c):
                out = axpy(out, c, b, self.field)
        return out

    def weight_vectors(self, counts):
        """Basis vectors whose pivot word has letter content ``counts``.

        Valid for subspaces spanned by weight vectors, whose echelon rows are
        then weight-homogeneous.
        """
        return [b for b, p in zip(self.basis, self.pivots) if _content(p, len(counts)) == tuple(counts)]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.pivots != other.pivots:
            return False
        return all(_vec_equal(a, b, self.field) for a, b in zip(self.basis, other.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def _content(word, N):
    counts = [0] * N
    for a in word:
        counts[a] += 1
    return tuple(counts)


def _vec_equal(x, y, field):
    return not prune(axpy(x, -field.one, y, field), field)


def kernel_combinations(images, field):
    """Basis of ``{c : sum_i c_i * images[i] == 0}`` as coefficient lists."""
    rows = []  # (pivot, vec, combo)
    kernel = []
    n = len(images)
    for i, w in enumerate(images):
        vec = prune(w, field)
        combo = {i: field.one}
        for p, r, cr in rows:
            c = vec.get(p)
            if c is not None and not field.is_zero(c):
                vec = axpy(vec, -c, r, field)
                combo = axpy(combo, -c, cr, field)
        p = _leading(vec, field)
        if p is None:
            kernel.append([combo.get(j, field.zero) for j in range(n)])
            continue
        lead = vec[p]
        inv = field.one / lead
        rows.append((p, scale(vec, inv, field), scale(combo, inv, field)))
    return kernel


def restrict(op: Callable[[dict], dict], sub: Subspace, target: Subspace | None = None):
    """Matrix of ``op`` from ``sub`` into ``target`` (default ``sub``), column-wise.

    Raises :class:`NotInSubspaceError` if an image leaves ``target``.
    """
    target = sub if target is None else target
    cols = [target.coordinates(op(b)) for b in sub.basis]
    return [[cols[j][i] for j in range(len(cols))] for i in range(target.dim)]


# ---------------------------------------------------------------------------
# small dense matrices (lists of rows)

def identity(n, field):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def mat_mul(a, b, field):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(cols):
            s = field.zero
            for k in range(inner):
                x = row[k]
                if field.is_zero(x):
                    continue
                y = b[k][j]
                if not field.is_zero(y):
                    s = s + x * y
            new.append(s)
        out.append(new)
    return out


def mat_add(a, b, field):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b, field):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, s, field):
    return [[s * x for x in row] for row in a]


def mat_is_zero(a, field):
    return all(field.is_zero(x) for row in a for x in row)


def first_nonzero_column(a, field):
    """Index of the first column with a nonzero entry, or None."""
    if not a:
        return None
    for j in range(len(a[0])):
        if any(not field.is_zero(row[j]) for row in a):
            return j
    return None


def mat_to_strings(a):
    return [[str(x) for x in row] for row in a]
