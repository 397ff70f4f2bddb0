import cmath
import dataclasses
import logging
import math

import numpy as np
import pytest

from gdaha.classical import montarani_rep
from gdaha.core import RepSpec, build_quantum_rep
from gdaha.monodromy import (
    ClearanceError,
    LoopGeometry,
    basepoint,
    compare_reps,
    convergence_table,
    ego_coefficient,
    loop_T,
    loop_U,
    monodromy_generators,
    parallel_transport,
    punctures,
    rectangle_discrepancy,
    transport,
)
from gdaha.scalars import ScalarField

NU = 1 / math.pi
Q = cmath.exp(-1j * math.pi * NU)
SMALLEST = RepSpec.make(2, 1, [(1,)])
TARGET = RepSpec.make(2, 2, [(2,)])
THREE = RepSpec.make(2, 3, [(1,)])


@pytest.fixture(scope="module")
def target_rep():
    return montarani_rep(TARGET, NU)


@pytest.fixture(scope="module")
def three_rep():
    return montarani_rep(THREE, NU)


# -- the connection ----------------------------------------------------------

def test_punctures_and_basepoint():
    assert list(punctures(3)) == [-3, -2, -1]
    assert list(basepoint(3)) == [1, 2, 3]


def test_single_point_coefficient():
    rep = montarani_rep(SMALLEST, NU)
    z = np.array([0.3 + 0.7j])
    (A,) = ego_coefficient(z, rep)
    assert np.allclose(A, rep.Y[0][0] / (z[0] - punctures(1)[0]), atol=1e-15)


def test_residue_is_Y(three_rep):
    alpha = punctures(1)[0]
    for eps in (1e-5, 1e-7):
        z = np.array([alpha + eps, 2.0, 3.5j])
        A = ego_coefficient(z, three_rep)[0]
        assert np.max(np.abs(eps * A - three_rep.Y[0][0])) < 1e-4


def test_pole_proximity_rejected(three_rep):
    with pytest.raises(ClearanceError):
        ego_coefficient(np.array([1.0, 1.05, 3.0]), three_rep, clearance=0.2)


@pytest.mark.parametrize("pair", [(0, 1), (1, 2), (0, 2)])
def test_flatness_by_rectangles(three_rep, pair):
    z = np.array([1 + 0.3j, 2.2 - 0.1j, 3.1 + 0.2j])
    assert rectangle_discrepancy(three_rep, z, *pair) <= 1e-8


def test_flatness_with_several_legs():
    rep = montarani_rep(RepSpec.make(2, 3, [(1,), (1,), (1,)], [0, 1, 0]), NU)
    z = np.array([0.5 + 0.5j, 1.7 - 0.4j, 2.6 + 0.1j])
    assert rectangle_discrepancy(rep, z, 0, 2) <= 1e-8


# -- loops --------------------------------------------------------------------

@pytest.mark.parametrize("i", [1, 2])
def test_exchange_loop_swaps_coordinates(i):
    loop = loop_T(i, 3, 1)
    start, end = loop.start(), loop.end()
    expect = start.copy()
    expect[i - 1], expect[i] = start[i], start[i - 1]
    assert np.allclose(end, expect)
    assert loop.permutation == (i, i + 1)
    assert loop.clearance() >= 0.2


@pytest.mark.parametrize("k,m", [(1, 1), (1, 2), (2, 2), (2, 3)])
def test_puncture_loop_is_closed(k, m):
    loop = loop_U(k, 2, m)
    assert np.allclose(loop.start(), loop.end())
    assert loop.clearance() >= 0.2 - 1e-12


def test_bad_geometry_is_rejected():
    with pytest.raises(ClearanceError):
        loop_T(1, 2, 1, LoopGeometry(exchange_radius=0.05))
    with pytest.raises(ClearanceError):
        loop_U(1, 1, 1, LoopGeometry(radius=0.1))
    with pytest.raises(IndexError):
        loop_T(2, 2, 1)


def test_geometry_config_rejects_unknown_keys():
    assert LoopGeometry.from_dict({"radius": "0.25"}).radius == 0.25
    with pytest.raises(ValueError):
        LoopGeometry.from_dict({"wobble": 1})


# -- transport ----------------------------------------------------------------

def test_calibration_smallest_spec():
    rep = montarani_rep(SMALLEST, NU)
    res = parallel_transport(loop_U(1, 1, 1), rep, 1e-10)
    assert np.max(np.abs(res.matrix - np.eye(rep.dim))) <= 1e-6


def test_zero_connection_gives_identity(three_rep):
    flat = dataclasses.replace(
        three_rep, nu=0.0,
        Y=[[np.zeros_like(y) for y in row] for row in three_rep.Y])
    P, _ = transport(loop_U(1, 3, 1), flat, 1e-10)
    assert np.max(np.abs(P - np.eye(flat.dim))) <= 1e-12


@pytest.mark.parametrize("which", ["T", "U"])
def test_path_then_reverse_is_identity(three_rep, which):
    tol = 1e-10
    loop = loop_T(1, 3, 1) if which == "T" else loop_U(1, 3, 1)
    P, _ = transport(loop, three_rep, tol)
    back, _ = transport(loop.reversed(), three_rep, tol, start=P)
    assert np.max(np.abs(back - np.eye(three_rep.dim))) <= 10 * tol


def test_halving_tolerance_within_error_estimate(target_rep):
    for loop in (loop_T(1, 2, 1), loop_U(1, 2, 1)):
        a = parallel_transport(loop, target_rep, 1e-10)
        b = parallel_transport(loop, target_rep, 5e-11)
        assert np.max(np.abs(a.matrix - b.matrix)) < a.error_estimate


def test_nonpositive_tolerance_rejected(target_rep):
    with pytest.raises(ValueError):
        parallel_transport(loop_T(1, 2, 1), target_rep, 0)


def test_homotopy_stability(three_rep):
    rng = np.random.default_rng(42)
    base, _ = monodromy_generators(three_rep, 1e-10)
    for _ in range(2):
        moved, loops = monodromy_generators(three_rep, 1e-10, perturb=(0.05, rng))
        for label in base:
            assert np.max(np.abs(base[label].matrix - moved[label].matrix)) <= 1e-6


def test_parallel_loops_match_sequential(target_rep):
    seq, _ = monodromy_generators(target_rep, 1e-10)
    par, _ = monodromy_generators(target_rep, 1e-10, jobs=2)
    for k in seq:
        assert np.array_equal(seq[k].matrix, par[k].matrix)


def test_convergence_table_shrinks(target_rep):
    rows = convergence_table(TARGET, NU, tols=(1e-6, 1e-8, 1e-10), crep=target_rep)
    by_tol = {}
    for r in rows:
        by_tol.setdefault(r["tol"], []).append(r["delta_vs_finest"])
    assert max(by_tol[1e-10]) == 0.0
    assert max(by_tol[1e-8]) <= max(by_tol[1e-6]) + 1e-15


# -- comparison with the quantum side --------------------------------------------

@pytest.fixture(scope="module")
def target_report():
    return compare_reps(TARGET, NU, tol=1e-10)


def test_target_matches(target_report):
    r = target_report
    assert r.dim_classical == r.dim_quantum == 1
    assert r.match
    assert r.max_trace_delta <= 1e-6
    assert r.words_checked == sum(4 ** k for k in range(1, 5)) + 50


def test_T_eigenvalues(three_rep):
    gens, _ = monodromy_generators(three_rep, 1e-10)
    for label in ("T1", "T2"):
        for ev in np.linalg.eigvals(gens[label].matrix):
            assert min(abs(ev - Q), abs(ev + 1 / Q)) <= 1e-6


def test_U_eigenvalues_are_predicted(three_rep):
    gens, _ = monodromy_generators(three_rep, 1e-10)
    allowed = [cmath.exp(2j * math.pi * g) for g in three_rep.gammas[0]]
    for ev in np.linalg.eigvals(gens["U1"].matrix):
        assert min(abs(ev - a) for a in allowed) <= 1e-6


@pytest.mark.parametrize("spec", [
    THREE,
    RepSpec.make(2, 2, [(1,), (1,)], [0, 0]),
    RepSpec.make(3, 2, [(1,)], ["1/2"]),
])
def test_other_specs_match(spec):
    r = compare_reps(spec, NU, tol=1e-10, n_random=20)
    assert r.match, (r.max_deviation, r.worst_word)


def test_mismatch_names_a_word():
    field = ScalarField(2)
    wrong = build_quantum_rep(TARGET, field, u1_scale=field.q)
    r = compare_reps(TARGET, NU, tol=1e-8, qrep=wrong, n_random=5)
    assert not r.match
    assert r.worst_word is not None
    assert r.charpoly["U1"]["delta"] > 1e-3


def test_small_rational_nu_warns(caplog):
    with caplog.at_level(logging.WARNING, logger="gdaha.monodromy"):
        r = compare_reps(SMALLEST, 0.5, tol=1e-8, n_random=1)
    assert r.warnings and "root of unity" in caplog.text
