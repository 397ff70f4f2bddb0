"""Braiding on C^N x C^N, braid words on tensor powers, and cabled block braidings.

The elementary braiding ``Rc`` (the flipped R-matrix ``P o R``) is

    Rc(e_a x e_a) = q^{1-1/N} e_a x e_a
    Rc(e_a x e_b) = q^{-1/N} e_b x e_a                               (a < b)
    Rc(e_b x e_a) = q^{-1/N} (e_a x e_b + (q - q^{-1}) e_b x e_a)   (a < b)

so that ``q^{1/N} Rc`` has eigenvalues ``q`` and ``-q^{-1}``.  Braid words are
written in operator order: ``BraidWord(3, (1, 2))`` is ``Rc_1 Rc_2``, i.e.
``Rc_2`` acts first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import axpy, prune

__all__ = [
    "BraidWord",
    "BlockStructure",
    "Braider",
    "elementary_braiding",
    "braid_word_operator",
    "block_transposition_word",
    "block_word",
    "unflip",
]


@dataclass(frozen=True)
class BraidWord:
    """Signed generators ``+i`` for sigma_i and ``-i`` for sigma_i^{-1}, 1 <= i < strands."""

    strands: int
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        for x in self.letters:
            if x == 0 or abs(x) >= self.strands:
                raise ValueError(f"generator {x} out of range for {self.strands} strands")

    def __mul__(self, other):
        if other.strands != self.strands:
            raise ValueError("strand counts differ")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self):
        return BraidWord(self.strands, tuple(-x for x in reversed(self.letters)))

    def __len__(self):
        return len(self.letters)

    @classmethod
    def from_application_order(cls, strands, applied):
        return cls(strands, tuple(reversed(tuple(applied))))


@dataclass(frozen=True)
class BlockStructure:
    """Consecutive blocks of strands; a size-0 block is a trivial tensor factor."""

    sizes: tuple

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if any(s < 0 for s in self.sizes):
            raise ValueError("block sizes must be nonnegative")

    @property
    def strands(self):
        return sum(self.sizes)

    def offset(self, i):
        """Number of strands before block i (1-based)."""
        return sum(self.sizes[: i - 1])

    def swapped(self, i):
        s = list(self.sizes)
        s[i - 1], s[i] = s[i], s[i - 1]
        return BlockStructure(tuple(s))


def _transposition_applied(a, b, offset):
    """Generators, in application order, braiding a left block of a strands
    positively past a right block of b strands starting after ``offset``."""
    out = []
    for j in range(b):
        for p in range(offset + a + j, offset + j, -1):
            out.append(p)
    return out


def block_transposition_word(blocks, i) -> BraidWord:
    """Positive braid word exchanging blocks i and i+1 (1-based)."""
    blocks = blocks if isinstance(blocks, BlockStructure) else BlockStructure(tuple(blocks))
    if not 1 <= i < len(blocks.sizes):
        raise IndexError(f"block position {i} out of range for {len(blocks.sizes)} blocks")
    a, b = blocks.sizes[i - 1], blocks.sizes[i]
    applied = _transposition_applied(a, b, blocks.offset(i))
    return BraidWord.from_application_order(max(blocks.strands, 1), applied)


def block_word(blocks, letters):
    """Strand-level word for a block-level word given in operator order.

    A letter ``+j`` is the braiding of the blocks currently in positions j, j+1;
    ``-j`` is the inverse braiding landing those blocks in positions j, j+1.
    Block sizes are tracked as blocks move.  Returns the word and the final
    block structure.
    """
    blocks = blocks if isinstance(blocks, BlockStructure) else BlockStructure(tuple(blocks))
    applied = []
    cur = blocks
    for x in reversed(tuple(letters)):
        j = abs(x)
        if not 1 <= j < len(cur.sizes):
            raise IndexError(f"block letter {x} out of range")
        a, b = cur.sizes[j - 1], cur.sizes[j]
        off = cur.offset(j)
        if x > 0:
            applied.extend(_transposition_applied(a, b, off))
        else:
            forward = _transposition_applied(b, a, off)
            applied.extend(-p for p in reversed(forward))
        cur = cur.swapped(j)
    return BraidWord.from_application_order(max(blocks.strands, 1), applied), cur


class Braider:
    """Applies elementary braidings and braid words to sparse vectors."""

    def __init__(self, N, field):
        self.N = N
        self.field = field
        f = field
        s = f.q_pow(Fraction(-1, N))
        diag = f.q_pow(1 - Fraction(1, N))
        cross = f.q_pow(1) - f.q_pow(-1)
        fwd, inv = {}, {}
        # q^{1/N} Rc is the Hecke generator S; S^{-1} = S - (q - q^-1).
        qn = f.q_pow(Fraction(1, N))
        for a in range(N):
            for b in range(N):
                if a == b:
                    fwd[(a, a)] = {(a, a): diag}
                elif a < b:
                    fwd[(a, b)] = {(b, a): s}
                else:
                    fwd[(a, b)] = {(b, a): s, (a, b): s * cross}
        for key, img in fwd.items():
            # Rc^{-1} = q^{1/N} (q^{1/N} Rc - (q - q^{-1}))
            scaled = {k: qn * qn * c for k, c in img.items()}
            inv[key] = prune(axpy(scaled, -qn * cross, {key: f.one}, f), f)
        self.forward = fwd
        self.backward = inv
        self._cache = {}

    def _word_image(self, sign, p, word):
        key = (sign, p, word)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        table = self.forward if sign > 0 else self.backward
        pair = (word[p - 1], word[p])
        out = {word[: p - 1] + k + word[p + 1:]: c for k, c in table[pair].items()}
        self._cache[key] = out
        return out

    def apply_generator(self, letter, vec):
        p, sign = abs(letter), (1 if letter > 0 else -1)
        f = self.field
        out = {}
        for w, c in vec.items():
            for k, x in self._word_image(sign, p, w).items():
                s = out.get(k, f.zero) + c * x
                if f.is_zero(s):
                    out.pop(k, None)
                else:
                    out[k] = s
        return out

    def apply(self, word, vec):
        for x in reversed(word.letters):
            vec = self.apply_generator(x, vec)
        return vec

    def operator(self, word):
        return BraidOperator(self, word)

    def matrix_2x2(self, inverse=False):
        """Rc (or its inverse) as a dense N^2 x N^2 matrix in Kronecker order."""
        table = self.backward if inverse else self.forward
        keys = [(a, b) for a in range(self.N) for b in range(self.N)]
        index = {k: i for i, k in enumerate(keys)}
        out = [[self.field.zero] * len(keys) for _ in keys]
        for col, k in enumerate(keys):
            for r, c in table[k].items():
                out[index[r]][col] = c
        return out


class BraidOperator:
    """Operator of a braid word on (C^N)^{x d}; callable on sparse vectors."""

    def __init__(self, braider, word):
        self.braider = braider
        self.word = word

    def __call__(self, vec):
        return self.braider.apply(self.word, vec)

    def columns(self):
        from itertools import product
        f = self.braider.field
        return {w: self(({w: f.one})) for w in product(range(self.braider.N), repeat=self.word.strands)}

    def __eq__(self, other):
        if not isinstance(other, BraidOperator):
            return NotImplemented
        f = self.braider.field
        a, b = self.columns(), other.columns()
        return all(not prune(axpy(a[w], -f.one, b[w], f), f) for w in a)

    __hash__ = None


def elementary_braiding(N, field):
    """Rc and Rc^{-1} on C^N x C^N as dense matrices."""
    br = Braider(N, field)
    return br.matrix_2x2(), br.matrix_2x2(inverse=True)


def braid_word_operator(word, N, field):
    return Braider(N, field).operator(word)


def unflip(braider, vec, i, j):
    """Apply the non-flipped R-matrix ``P o Rc`` on factors i < j (1-based)."""
    f = braider.field
    out = {}
    for w, c in vec.items():
        pair = (w[i - 1], w[j - 1])
        for (x, y), r in braider.forward[pair].items():
            # P o Rc: Rc lands in (second, first) order; flip back.
            k = list(w)
            k[i - 1], k[j - 1] = y, x
            out = axpy(out, c * r, {tuple(k): f.one}, f)
    return out
