import numpy as np
import pytest

from implicitize import examples
from implicitize.numlin import numerical_kernel_dim
from implicitize.polynomial import PolySystem, ProblemSpec, make_cone_map
from implicitize.sampler import (
    SAMPLE_RESIDUAL,
    SamplingError,
    build_source_witness,
    numerical_image_sample,
    numerical_source_sample,
    random_complex,
    sample_cone_pairs,
)


def test_random_complex_moduli():
    z = random_complex(np.random.default_rng(0), (1000,))
    assert np.all((np.abs(z) >= 0.5) & (np.abs(z) <= 1.5))


def test_trivial_witness_when_ideal_is_zero():
    w = build_source_witness(examples.twisted_cubic(), seed=0)
    assert w.trivial and w.source_dim == 2
    pts = numerical_source_sample(w, 5, seed=0)
    assert pts.shape == (5, 2)
    assert len({p.tobytes() for p in pts}) == 5


def test_circle_witness_has_two_points():
    w = build_source_witness(examples.circle(), seed=1)
    assert len(w.points) == 2 and w.source_dim == 1
    assert np.allclose(w.points[:, 0] ** 2 + w.points[:, 1] ** 2, 1, atol=1e-12)


@pytest.mark.parametrize("seed", range(3))
def test_circle_samples_lie_on_the_circle(seed):
    w = build_source_witness(examples.circle(), seed=seed)
    pts = numerical_source_sample(w, 20, seed=seed)
    assert np.max(np.abs(pts[:, 0] ** 2 + pts[:, 1] ** 2 - 1)) <= SAMPLE_RESIDUAL
    assert len({np.round(p, 8).tobytes() for p in pts}) == 20


def test_resultant_samples_satisfy_the_ideal(resultant_setup):
    spec, w, cone, _ = resultant_setup
    ideal = PolySystem(spec.ideal_generators, spec.num_vars)
    pts = numerical_source_sample(w, 10, seed=2)
    assert np.max(np.abs(ideal.values(pts))) <= SAMPLE_RESIDUAL
    for x in pts:
        # general points are smooth points of the 18-dimensional component
        assert numerical_kernel_dim(ideal.jacobian(x)[0]) == 18
        assert np.max(np.abs(x[-3:])) > 1e-3


def test_resultant_witness_avoids_the_degenerate_component(resultant_setup):
    spec, w, _, _ = resultant_setup
    assert w.source_dim == 18
    # points with x = y = z = 0 lie on a second component of V(I) and are dropped
    assert np.min(np.max(np.abs(w.points[:, -3:]), axis=1)) > 1e-6


def test_augmented_cone_points_have_free_scale():
    spec = examples.circle()
    w = build_source_witness(spec, seed=0)
    cone = make_cone_map(spec)
    xt, y = sample_cone_pairs(w, cone, 6, seed=0)
    lam = xt[:, 0]
    assert np.allclose(y[:, 0], lam)
    assert np.allclose((y[:, 1] / lam) ** 2 + (y[:, 2] / lam) ** 2, 1, atol=1e-10)
    assert np.ptp(np.abs(lam)) > 0


def test_sampling_is_deterministic():
    w = build_source_witness(examples.circle(), seed=4)
    a = numerical_image_sample(w, make_cone_map(examples.circle()), 8, seed=9)
    b = numerical_image_sample(w, make_cone_map(examples.circle()), 8, seed=9)
    assert a.tobytes() == b.tobytes()


def test_count_must_be_positive():
    w = build_source_witness(examples.circle(), seed=0)
    with pytest.raises(ValueError):
        numerical_source_sample(w, 0)


def test_inconsistent_ideal_raises():
    spec = ProblemSpec.from_strings(["x", "y"], ["x - 1", "x - 2"], ["x", "y"])
    with pytest.raises(Exception) as err:
        build_source_witness(spec, seed=0)
    assert err.type.__name__ in {"SamplingError", "TrackingError"}


def test_too_many_generators():
    spec = ProblemSpec.from_strings(["x"], ["x", "x - 1"], ["x"])
    with pytest.raises(SamplingError):
        build_source_witness(spec, seed=0)
