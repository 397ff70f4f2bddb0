"""Independent reference computations used by the tests.

Nothing here imports the package; every value is computed from scratch with
textbook combinatorics so that agreement is meaningful.
"""

from collections import Counter
from fractions import Fraction
from itertools import permutations, product


def hook_content_dim(mu, N):
    """dim of the gl_N irrep with partition mu via the hook-content formula."""
    mu = [x for x in mu if x > 0]
    conj = [sum(1 for r in mu if r > c) for c in range(mu[0])] if mu else []
    out = Fraction(1)
    for r, row in enumerate(mu):
        for c in range(row):
            hook = (row - c) + (conj[c] - r) - 1
            out *= Fraction(N + c - r, hook)
    return int(out)


def ssyt_character(mu, N):
    """Weight multiplicities of V(mu) from semistandard tableaux (Kostka numbers)."""
    shape = [x for x in mu if x > 0]
    cells = [(r, c) for r, row in enumerate(shape) for c in range(row)]
    chars = Counter()
    for filling in product(range(N), repeat=len(cells)):
        t = dict(zip(cells, filling))
        ok = all(
            (c == 0 or t[(r, c - 1)] <= t[(r, c)]) and (r == 0 or t[(r - 1, c)] < t[(r, c)])
            for r, c in cells)
        if ok:
            w = [0] * N
            for x in filling:
                w[x] += 1
            chars[tuple(w)] += 1
    return chars


def tensor_character(mus, N):
    out = Counter({(0,) * N: 1})
    for mu in mus:
        ch = ssyt_character(mu, N)
        nxt = Counter()
        for a, x in out.items():
            for b, y in ch.items():
                nxt[tuple(i + j for i, j in zip(a, b))] += x * y
        out = nxt
    return out


def _sign(perm):
    s, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        s *= (-1) ** (length - 1)
    return s


def multiplicity(chi, lam, N):
    """Multiplicity of V(lam) in a gl_N character via the Weyl numerator trick."""
    rho = list(range(N - 1, -1, -1))
    total = 0
    for perm in permutations(range(N)):
        w_rho = [rho[perm[i]] for i in range(N)]
        target = tuple(lam[i] + rho[i] - w_rho[i] for i in range(N))
        total += _sign(perm) * chi.get(target, 0)
    return total


def trivial_multiplicity(mus, n, N):
    """Number of sl_N-trivial summands in V(mu_1) x ... x V(mu_m) x (C^N)^{x n}."""
    factors = list(mus) + [(1,)] * n
    size = sum(sum(m) for m in factors)
    if size % N:
        return 0
    chi = tensor_character(factors, N)
    return multiplicity(chi, (size // N,) * N, N)


def pairing(lam, mu):
    """(lam, mu) = sum lam_i mu_i - |lam||mu|/N."""
    N = len(lam)
    return Fraction(sum(a * b for a, b in zip(lam, mu))) - Fraction(sum(lam) * sum(mu), N)


def casimir_exponent(lam):
    N = len(lam)
    two_rho = [N - 1 - 2 * i for i in range(N)]
    return pairing(lam, [a + b for a, b in zip(lam, two_rho)])


def laurent_mul(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def q_number_laurent(n):
    """[n]_q as an exponent -> coefficient dict, from the defining finite sum."""
    if n == 0:
        return {}
    sign = 1 if n > 0 else -1
    k = abs(n)
    return {k - 1 - 2 * j: sign for j in range(k)}
