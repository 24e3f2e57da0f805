import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from implicitize import examples
from implicitize.serialization import (
    ProblemFileError,
    decode_array,
    encode_array,
    load_problem,
    parse_complex,
    parse_point,
    spec_from_json,
    spec_to_json,
)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=20))
def test_array_roundtrip_is_exact(pairs):
    a = np.array([complex(x, y) for x, y in pairs])
    assert decode_array(json.loads(json.dumps(encode_array(a)))).tobytes() == a.tobytes()


@pytest.mark.parametrize(
    "value, expected",
    [(2, 2), (1.5, 1.5), ([1, -2], 1 - 2j), ({"re": 0, "im": 3}, 3j), ("1-2i", 1 - 2j), ("(0.5+1e-3i)", 0.5 + 1e-3j), ("-i", -1j)],
)
def test_parse_complex(value, expected):
    assert parse_complex(value) == pytest.approx(expected)


@pytest.mark.parametrize("value", ["abc", [1, 2, 3], {"real": 1}, None, True, "1+2k"])
def test_parse_complex_rejects(value):
    with pytest.raises(ValueError):
        parse_complex(value)


def test_parse_point_needs_a_list():
    with pytest.raises(ValueError):
        parse_point({"x": 1})
    assert np.array_equal(parse_point([1, [0, 1]]), [1, 1j])


@pytest.mark.parametrize(
    "spec",
    [examples.twisted_cubic(), examples.circle(), examples.resultant_hypersurface(),
     examples.canonical_curve_projection(3), examples.segre_secant(3)],
)
def test_spec_roundtrip(spec):
    back = spec_from_json(json.loads(json.dumps(spec_to_json(spec))))
    assert back == spec


@pytest.mark.parametrize(
    "data, fragment",
    [
        ({"map": ["x"]}, "missing 'variables'"),
        ({"variables": ["x"]}, "missing 'map'"),
        ({"variables": ["x", "x"], "map": ["x"]}, "duplicate"),
        ({"variables": ["x"], "map": ["y"]}, "unknown variable"),
        ({"variables": ["x"], "map": ["x"], "extra": 1}, "unknown keys"),
        ({"variables": [], "map": ["1"]}, "nonempty"),
        ([1, 2], "JSON object"),
    ],
)
def test_bad_problem_files(data, fragment):
    with pytest.raises(ProblemFileError, match=fragment):
        spec_from_json(data)


def test_problem_files_load(tmp_path):
    from pathlib import Path

    root = Path(__file__).resolve().parents[1] / "problems"
    specs = {p.stem: load_problem(p) for p in root.glob("*.json")}
    assert specs["three_quadrics"] == examples.resultant_hypersurface()
    assert specs["symmetric_tensor_secant"].num_vars == 70
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ProblemFileError):
        load_problem(bad)
