import json
import time
from pathlib import Path

import hypothesis
import numpy as np
import pytest

from implicitize import examples
from implicitize.monodromy import numerical_image_degree
from implicitize.polynomial import make_cone_map
from implicitize.sampler import build_source_witness

hypothesis.settings.register_profile("default", deadline=None, max_examples=40)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def oracles():
    return json.loads((FIXTURES / "oracles.json").read_text())


@pytest.fixture(scope="session")
def twisted_cubic_pws():
    spec = examples.twisted_cubic()
    w = build_source_witness(spec, seed=11)
    return numerical_image_degree(spec, w, make_cone_map(spec), seed=11)


@pytest.fixture(scope="session")
def resultant_setup():
    """Three quadrics: problem, witness, cone and a completed pseudo-witness set."""
    start = time.perf_counter()
    spec = examples.resultant_hypersurface()
    w = build_source_witness(spec, seed=5)
    cone = make_cone_map(spec)
    pws = numerical_image_degree(spec, w, cone, seed=5)
    RESULTANT_TIMING["degree"] = time.perf_counter() - start
    return spec, w, cone, pws


RESULTANT_TIMING: dict[str, float] = {}
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_poly(rng, num_vars, num_terms, max_deg):
    from implicitize.polynomial import Polynomial

    terms = {}
    for _ in range(num_terms):
        e = tuple(int(v) for v in rng.integers(0, max_deg + 1, size=num_vars))
        terms[e] = complex(rng.normal(), rng.normal())
    return Polynomial(terms, num_vars)
