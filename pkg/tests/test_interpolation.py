from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from implicitize import examples
from implicitize.interpolation import (
    build_interpolation_matrix,
    equation_polynomial,
    equation_residuals,
    extract_image_equations,
    interpolation_table,
    monomial_values,
    numerical_hilbert_function,
)
from implicitize.numlin import numerical_kernel_dim
from implicitize.polynomial import evaluate, make_cone_map
from implicitize.sampler import build_source_witness, numerical_image_sample

CASES = {
    "twisted_cubic": (examples.twisted_cubic, [1, 2, 3, 4]),
    "rational_normal_quartic": (lambda: examples.rational_normal_curve(4), [1, 2, 3]),
    "veronese_2_3": (lambda: examples.veronese(2, 3), [1, 2, 3]),
    "conic_2_2": (lambda: examples.rational_normal_curve(2), [1, 2, 3, 4, 5]),
}


def setup(name, seed):
    spec = CASES[name][0]()
    return spec, build_source_witness(spec, seed=seed), make_cone_map(spec)


def test_monomial_values_graded_lex():
    M = monomial_values([[2.0, 1.0]], 2)
    # point scaled to unit max-norm: (1, 0.5); monomials x^2, xy, y^2
    assert np.allclose(M, [[1.0, 0.5, 0.25]])


def test_interpolation_matrix_rows_are_unit():
    A = build_interpolation_matrix(np.random.default_rng(0).normal(size=(7, 3)), 3)
    assert A.shape == (7, 10)
    assert np.allclose(np.linalg.norm(A, axis=1), 1)


def test_interpolation_matrix_input_checks():
    with pytest.raises(ValueError):
        build_interpolation_matrix([], 2)
    with pytest.raises(ValueError):
        build_interpolation_matrix([[1, 2], [1, 2, 3]], 2)


@pytest.mark.parametrize("name", sorted(CASES))
@pytest.mark.parametrize("seed", [0, 1])
def test_hilbert_values_match_symbolic_elimination(name, seed, oracles):
    spec, w, cone = setup(name, seed)
    for d in CASES[name][1]:
        t = numerical_hilbert_function(spec, w, cone, d, seed=seed)
        assert t.num_monomials == comb(cone.target_dim - 1 + d, d)
        assert t.hilbert_value == oracles[name]["ideal_hilbert"][d], (name, d)


@pytest.mark.parametrize("name", sorted(CASES))
def test_stabilization_extra_row(name):
    """One more general point never changes the kernel dimension once rows = columns."""
    spec, w, cone = setup(name, 2)
    for d in CASES[name][1]:
        t = numerical_hilbert_function(spec, w, cone, d, seed=2)
        extra = numerical_image_sample(w, cone, 1, seed=100 + d)
        bigger = build_interpolation_matrix(np.vstack([t.sample_points, extra]), d)
        assert numerical_kernel_dim(bigger) == t.hilbert_value


@pytest.mark.parametrize("name", sorted(CASES))
def test_equations_vanish_at_fresh_samples(name):
    spec, w, cone = setup(name, 3)
    for d in CASES[name][1]:
        t = numerical_hilbert_function(spec, w, cone, d, seed=3)
        eqs = extract_image_equations(t)
        assert len(eqs) == t.hilbert_value
        fresh = numerical_image_sample(w, cone, 10, seed=77)
        for c in eqs:
            assert np.max(equation_residuals(c, fresh, d)) <= 1e-6


def test_twisted_cubic_quadrics_span_the_known_ideal(oracles):
    spec, w, cone = setup("twisted_cubic", 0)
    t = numerical_hilbert_function(spec, w, cone, 2, seed=0)
    eqs = np.array(extract_image_equations(t))  # 3 x 10
    # y0*y2 - y1^2, y0*y3 - y1*y2, y1*y3 - y2^2 in graded-lex order of (y0..y3)
    from implicitize.polynomial import monomial_basis

    basis = monomial_basis(2, 4)
    known = np.zeros((3, 10), dtype=complex)
    for row, terms in zip(known, [{(1, 0, 1, 0): 1, (0, 2, 0, 0): -1},
                                  {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1},
                                  {(0, 1, 0, 1): 1, (0, 0, 2, 0): -1}]):
        for e, c in terms.items():
            row[basis.index(e)] = c
    assert np.linalg.matrix_rank(np.vstack([eqs, known]), tol=1e-8) == 3


def test_equation_polynomial_evaluates_like_residual():
    spec, w, cone = setup("conic_2_2", 0)
    t = numerical_hilbert_function(spec, w, cone, 2, seed=0)
    (c,) = extract_image_equations(t)
    p = equation_polynomial(c, 2, 3)
    y = numerical_image_sample(w, cone, 1, seed=5)[0]
    assert abs(evaluate(p, y)) <= 1e-8 * np.max(np.abs(y)) ** 2


def test_kernel_is_empty_below_the_first_equation():
    spec, w, cone = setup("veronese_2_3", 0)
    t = numerical_hilbert_function(spec, w, cone, 1, seed=0)
    assert t.hilbert_value == 0 and extract_image_equations(t) == []


def test_degree_zero_and_negative():
    spec, w, cone = setup("conic_2_2", 0)
    assert numerical_hilbert_function(spec, w, cone, 0, seed=0).hilbert_value == 0
    with pytest.raises(ValueError):
        numerical_hilbert_function(spec, w, cone, -1, seed=0)


def test_table_json_shape():
    spec, w, cone = setup("conic_2_2", 0)
    t = numerical_hilbert_function(spec, w, cone, 2, seed=0)
    out = t.to_json(include_matrix=True)
    assert out["hilbert_value"] == 1 and out["num_monomials"] == 6
    assert len(out["matrix"]) == 6 and len(out["singular_values"]) == 6


def test_circle_image_equation_is_the_circle():
    spec = examples.circle()
    w = build_source_witness(spec, seed=0)
    cone = make_cone_map(spec)
    t = numerical_hilbert_function(spec, w, cone, 2, seed=0)
    assert t.hilbert_value == 1
    (c,) = extract_image_equations(t)
    # homogenized circle y1^2 + y2^2 - y0^2; basis: y0^2, y0y1, y0y2, y1^2, y1y2, y2^2
    c = c / c[3]
    assert np.allclose(c, [-1, 0, 0, 1, 0, 1], atol=1e-8)


@settings(max_examples=10)
@given(st.integers(0, 2**32 - 1))
def test_hilbert_value_independent_of_seed(seed):
    spec, w, cone = setup("twisted_cubic", seed % 1000)
    assert numerical_hilbert_function(spec, w, cone, 2, seed=seed).hilbert_value == 3


def test_interpolation_table_fixed_seed_bytes():
    spec, w, cone = setup("veronese_2_3", 6)
    a = numerical_hilbert_function(spec, w, cone, 2, seed=6)
    b = numerical_hilbert_function(spec, w, cone, 2, seed=6)
    assert a.singular_values.tobytes() == b.singular_values.tobytes()
    assert a.sample_points.tobytes() == b.sample_points.tobytes()
