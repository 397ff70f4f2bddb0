import random
from fractions import Fraction
from itertools import product

import pytest

from gdaha.braiding import (
    BlockStructure,
    Braider,
    BraidWord,
    block_transposition_word,
    block_word,
    braid_word_operator,
    elementary_braiding,
    unflip,
)
from gdaha.linalg import Subspace, axpy, identity, mat_add, mat_is_zero, mat_mul, mat_scale, mat_sub, prune
from gdaha.scalars import make_field
from gdaha.weights import TensorSubspace, Weight, full_space, irrep_realization, tensor_power_action


def same(x, y, f):
    return not prune(axpy(x, -f.one, y, f), f)


def basis(N, d, f):
    return [{w: f.one} for w in product(range(N), repeat=d)]


def hecke_generator(N, f):
    R, _ = elementary_braiding(N, f)
    return mat_scale(R, f.q_pow(Fraction(1, N)), f)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_hecke_minimal_polynomial(N):
    f = make_field(N)
    S = hecke_generator(N, f)
    I = identity(N * N, f)
    a = mat_sub(S, mat_scale(I, f.q, f), f)
    b = mat_add(S, mat_scale(I, 1 / f.q, f), f)
    assert mat_is_zero(mat_mul(a, b, f), f)
    # neither linear factor alone kills S, so the minimal polynomial is the product
    assert not mat_is_zero(a, f) and not mat_is_zero(b, f)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_hecke_eigenvalue_multiplicities(N):
    # with the minimal polynomial known, the trace fixes the multiplicities
    f = make_field(N)
    S = hecke_generator(N, f)
    trace = sum((S[i][i] for i in range(N * N)), f.zero)
    sym, alt = N * (N + 1) // 2, N * (N - 1) // 2
    assert trace == f.q * sym - alt / f.q


@pytest.mark.parametrize("N", [2, 3])
def test_inverse(N):
    f = make_field(N)
    R, Ri = elementary_braiding(N, f)
    assert mat_mul(R, Ri, f) == identity(N * N, f)
    assert mat_mul(Ri, R, f) == identity(N * N, f)


@pytest.mark.parametrize("N", [2, 3])
def test_braiding_is_a_module_map(N):
    f = make_field(N)
    br = Braider(N, f)
    a = tensor_power_action(N, 2, f)
    w = BraidWord(2, (1,))
    for gen in ("E", "F", "K", "Kinv"):
        for i in range(1, N):
            for v in basis(N, 2, f):
                assert same(br.apply(w, a.act(gen, i, v)), a.act(gen, i, br.apply(w, v)), f)


@pytest.mark.parametrize("N", [2, 3])
def test_braid_relation_three_strands(N):
    f = make_field(N)
    lhs = braid_word_operator(BraidWord(3, (1, 2, 1)), N, f)
    rhs = braid_word_operator(BraidWord(3, (2, 1, 2)), N, f)
    assert lhs == rhs
    mixed_l = braid_word_operator(BraidWord(3, (1, 2, -1)), N, f)
    mixed_r = braid_word_operator(BraidWord(3, (-2, 1, 2)), N, f)
    assert mixed_l == mixed_r


def test_word_times_inverse_is_identity():
    f = make_field(3)
    br = Braider(3, f)
    w = BraidWord(3, (1, -2, 2, 1))
    for v in basis(3, 3, f):
        assert same(br.apply(w * w.inverse(), v), v, f)
    assert braid_word_operator(BraidWord(2, (1, -1)), 3, f) == braid_word_operator(BraidWord(2, ()), 3, f)


def test_braid_move_inside_longer_word():
    rng = random.Random(3)
    f = make_field(2)
    br = Braider(2, f)
    d = 5
    for _ in range(4):
        pre = tuple(rng.choice([1, 2, 3, 4, -1, -2, -3, -4]) for _ in range(3))
        post = tuple(rng.choice([1, 2, 3, 4, -1, -2, -3, -4]) for _ in range(2))
        i = rng.randint(1, d - 2)
        w1 = BraidWord(d, pre + (i, i + 1, i) + post)
        w2 = BraidWord(d, pre + (i + 1, i, i + 1) + post)
        for v in rng.sample(basis(2, d, f), 8):
            assert same(br.apply(w1, v), br.apply(w2, v), f)


def _r_on(br, vec, i, j):
    return unflip(br, vec, i, j)


@pytest.mark.parametrize("N", [2, 3])
def test_qybe_non_flipped(N):
    # R = P o Rc; R_12 R_13 R_23 = R_23 R_13 R_12 (rightmost acts first)
    f = make_field(N)
    br = Braider(N, f)

    def chain(v, pairs):
        for p in reversed(pairs):
            out = {}
            for w, c in v.items():
                out = axpy(out, c, _r_on(br, {w: f.one}, *p), f)
            v = out
        return v

    for v in basis(N, 3, f):
        assert same(chain(v, [(1, 2), (1, 3), (2, 3)]), chain(v, [(2, 3), (1, 3), (1, 2)]), f)


def test_block_words_small():
    assert block_transposition_word(BlockStructure((1, 1)), 1) == BraidWord(2, (1,))
    # moving a single strand leftwards over a pair: it crosses strand 2 first
    assert block_transposition_word(BlockStructure((2, 1)), 1) == BraidWord(3, (1, 2))
    assert len(block_transposition_word(BlockStructure((2, 3)), 1)) == 6


def test_block_word_index_error():
    with pytest.raises(IndexError):
        block_transposition_word(BlockStructure((1, 1)), 2)


def test_hexagon_for_cabled_braiding():
    # braiding V x V with V equals (Rc x 1)(1 x Rc) as maps on (C^N)^{x 3}
    for N in (2, 3):
        f = make_field(N)
        br = Braider(N, f)
        word = block_transposition_word(BlockStructure((2, 1)), 1)
        for v in basis(N, 3, f):
            step = br.apply(BraidWord(3, (2,)), v)
            assert same(br.apply(word, v), br.apply(BraidWord(3, (1,)), step), f)


@pytest.mark.parametrize("sizes,i", [((2, 1), 1), ((1, 2), 1), ((2, 2), 1), ((1, 2, 1), 2)])
def test_block_braidings_commute_with_action(sizes, i):
    N = 2
    f = make_field(N)
    blocks = BlockStructure(sizes)
    d = blocks.strands
    a = tensor_power_action(N, d, f)
    br = Braider(N, f)
    w = block_transposition_word(blocks, i)
    for gen in ("E", "F", "K"):
        for v in basis(N, d, f):
            assert same(br.apply(w, a.act(gen, 1, v)), a.act(gen, 1, br.apply(w, v)), f)


def test_block_braiding_maps_product_subspaces():
    f = make_field(2)
    carrier = irrep_realization(2, Weight((2, 0)), f).carrier
    cn = full_space(2, 1, f).factors[0]
    src = TensorSubspace([carrier, cn], 2).all_vectors()
    dst = Subspace.span(TensorSubspace([cn, carrier], 2).all_vectors(), f)
    assert len(src) == 6
    br = Braider(2, f)
    w = block_transposition_word(BlockStructure((2, 1)), 1)
    for v in src:
        assert dst.contains(br.apply(w, v))


def test_block_word_inverse_letters_track_sizes():
    w, final = block_word(BlockStructure((2, 1, 1)), (2, 1, 1, -2))
    assert final == BlockStructure((2, 1, 1))
    assert w.strands == 4
    # braidings are module maps, so in particular they preserve weight
    f = make_field(2)
    br = Braider(2, f)
    a = tensor_power_action(2, 4, f)
    for v in basis(2, 4, f):
        out = br.apply(w, v)
        assert all(a.weight_of(k) == a.weight_of(next(iter(v))) for k in out)
