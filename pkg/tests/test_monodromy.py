import itertools
import json
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from implicitize import examples
from implicitize.monodromy import (
    DegreeError,
    PseudoWitnessSet,
    Slice,
    initial_witness_pair,
    monodromy_loop,
    new_points,
    numerical_image_degree,
    trace_residual,
    trace_test,
)
from implicitize.polynomial import ProblemSpec, make_cone_map
from implicitize.sampler import build_source_witness

ORACLE_SPECS = {
    "twisted_cubic": examples.twisted_cubic,
    "rational_normal_quartic": lambda: examples.rational_normal_curve(4),
    "veronese_2_3": lambda: examples.veronese(2, 3),
    "conic_2_2": lambda: examples.rational_normal_curve(2),
}


def run_degree(spec, seed, **kw):
    w = build_source_witness(spec, seed=seed)
    return numerical_image_degree(spec, w, make_cone_map(spec), seed=seed, **kw)


@pytest.fixture(scope="module")
def oracle_sets():
    return {name: run_degree(build(), 21) for name, build in ORACLE_SPECS.items()}


def subset(pws, idx):
    idx = list(idx)
    return replace(pws, source_points=pws.source_points[idx], image_points=pws.image_points[idx],
                   loop_log=list(pws.loop_log))


@pytest.mark.parametrize("name", sorted(ORACLE_SPECS))
def test_degree_matches_symbolic_oracle(name, oracle_sets, oracles):
    pws = oracle_sets[name]
    assert pws.is_complete
    assert pws.degree == oracles[name]["degree"]


@pytest.mark.parametrize("name", sorted(ORACLE_SPECS))
def test_trace_test_accepts_full_and_rejects_every_proper_subset(name, oracle_sets):
    pws = oracle_sets[name]
    assert trace_test(pws, seed=0)
    subsets = [s for k in range(1, pws.degree) for s in itertools.combinations(range(pws.degree), k)]
    assert len(subsets) >= 2
    for s in subsets:
        assert not trace_test(subset(pws, s), seed=0), s


def test_trace_residual_scale(oracle_sets):
    full = trace_residual(oracle_sets["veronese_2_3"], seed=1)
    part = trace_residual(subset(oracle_sets["veronese_2_3"], [0, 1]), seed=1)
    assert full <= 1e-10
    assert part >= 1e-5


@pytest.mark.parametrize("name", sorted(ORACLE_SPECS))
def test_loop_log_is_monotone_and_within_bezout(name, oracle_sets):
    pws = oracle_sets[name]
    log = pws.loop_log
    assert all(a <= b for a, b in zip(log, log[1:]))
    assert log[-1] == pws.degree
    assert pws.degree <= pws.bezout_bound()


def test_witness_points_lie_on_the_slice_and_map(oracle_sets):
    pws = oracle_sets["veronese_2_3"]
    assert np.max(np.abs(pws.slice.values(pws.image_points))) <= 1e-6
    assert np.allclose(pws.image(pws.source_points), pws.image_points)


def test_circle_closure_is_a_conic():
    pws = run_degree(examples.circle(), 0)
    assert pws.is_complete and pws.degree == 2


@pytest.mark.parametrize("seed", range(3))
def test_plane_projection_degree_matches_its_equation_degree(seed):
    """Plane projection of a canonical curve: degree 18, the degree of its unique generator."""
    spec = examples.canonical_curve_projection(seed)
    pws = run_degree(spec, seed)
    assert pws.is_complete and pws.degree == 18


def test_fixed_seed_is_byte_identical():
    a = run_degree(examples.veronese(2, 3), 5)
    b = run_degree(examples.veronese(2, 3), 5)
    assert a.image_points.tobytes() == b.image_points.tobytes()
    assert a.loop_log == b.loop_log


@settings(max_examples=8)
@given(st.integers(0, 2**32 - 1))
def test_degree_independent_of_seed(seed):
    assert run_degree(examples.twisted_cubic(), seed).degree == 3


def test_max_loops_caps_the_run():
    pws = run_degree(examples.rational_normal_curve(6), 0, max_loops=1)
    assert len(pws.loop_log) == 1
    assert not pws.is_complete
    assert pws.degree <= 6


def test_single_loop_never_loses_points():
    spec = examples.rational_normal_curve(5)
    w = build_source_witness(spec, seed=3)
    pws = initial_witness_pair(spec, w, make_cone_map(spec), seed=3)
    sizes = [pws.degree]
    rng = np.random.default_rng(3)
    for _ in range(6):
        monodromy_loop(pws, rng)
        sizes.append(pws.degree)
    assert sizes == sorted(sizes) and sizes[-1] <= 5


def test_extra_forms_added_when_the_map_has_positive_fibers():
    # F(s, t, u) = (s + t, u): a 2-dimensional cone fed by 3 source variables
    spec = ProblemSpec.from_strings(["s", "t", "u"], [], ["s + t", "u"], homogeneous=True)
    w = build_source_witness(spec, seed=0)
    pws = initial_witness_pair(spec, w, make_cone_map(spec), seed=0)
    assert pws.extra is not None and len(pws.extra) == 1
    done = run_degree(spec, 0)
    assert done.is_complete and done.degree == 1


def test_affine_point_has_degree_one():
    spec = ProblemSpec.from_strings(["x"], [], ["0*x + 2"], homogeneous=False)
    pws = run_degree(spec, 0)
    assert pws.cone_dim == 1 and pws.degree == 1 and pws.is_complete


def test_zero_dimensional_cone_is_rejected():
    spec = ProblemSpec.from_strings(["x"], [], ["0*x^2"], homogeneous=True)
    w = build_source_witness(spec, seed=0)
    with pytest.raises(DegreeError):
        numerical_image_degree(spec, w, make_cone_map(spec), seed=0)


def test_new_points_dedupes_against_known_and_itself():
    known = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex)
    cand = np.array([[1.0 + 1e-9, 2.0], [5.0, 6.0], [5.0, 6.0 + 1e-9], [7.0, 8.0]], dtype=complex)
    assert list(new_points(known, cand)) == [1, 3]
    assert list(new_points(np.zeros((0, 2)), cand)) == [0, 1, 3]
    assert new_points(known, np.zeros((0, 2))).size == 0


def test_json_roundtrip(oracle_sets):
    pws = oracle_sets["twisted_cubic"]
    back = PseudoWitnessSet.from_json(json.loads(json.dumps(pws.to_json())))
    assert back.degree == 3 and back.is_complete
    assert np.array_equal(back.image_points, pws.image_points)
    assert np.array_equal(back.slice.matrix, pws.slice.matrix)
    bad = pws.to_json()
    bad["degree"] = 4
    with pytest.raises(ValueError):
        PseudoWitnessSet.from_json(bad)


def test_slice_through_contains_point():
    rng = np.random.default_rng(0)
    y = rng.normal(size=5) + 1j * rng.normal(size=5)
    L = Slice.through(rng, 3, y)
    assert np.max(np.abs(L.values(y[None, :]))) <= 1e-12
    back = Slice.from_json(json.loads(json.dumps(L.to_json())))
    assert np.array_equal(back.matrix, L.matrix) and np.array_equal(back.constants, L.constants)


def test_empty_set_trace_test_raises(oracle_sets):
    with pytest.raises(DegreeError):
        trace_test(subset(oracle_sets["twisted_cubic"], []))
