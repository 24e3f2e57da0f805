"""JSON encodings for problems, complex arrays and query points."""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .polynomial import ProblemSpec


class ProblemFileError(ValueError):
    pass


def encode_complex(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def encode_array(a) -> list:
    """Complex arrays as nested lists with ``[re, im]`` leaves."""
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def decode_array(data) -> np.ndarray:
    a = np.asarray(data, dtype=float)
    if a.size == 0:
        return np.zeros(a.shape[:-1] if a.ndim > 1 else (0,), dtype=complex)
    out = np.empty(a.shape[:-1], dtype=complex)
    out.real, out.imag = a[..., 0], a[..., 1]  # keeps signed zeros, unlike re + 1j*im
    return out


_COMPLEX_TEXT = re.compile(r"\s*\(?\s*(.*?)\s*\)?\s*$")


def parse_complex(value) -> complex:
    """Accept ``3``, ``[re, im]``, ``{"re": .., "im": ..}`` or text like ``"1-2i"``."""
    if isinstance(value, bool):
        raise ValueError(f"not a complex number: {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict) and set(value) <= {"re", "im"}:
        return complex(float(value.get("re", 0)), float(value.get("im", 0)))
    if isinstance(value, str):
        text = _COMPLEX_TEXT.match(value).group(1).replace(" ", "")
        text = text.replace("i", "j")
        if text in ("j", "+j", "-j"):
            text = text.replace("j", "1j")
        try:
            return complex(text)
        except ValueError:
            pass
    raise ValueError(f"not a complex number: {value!r}")


def parse_point(data) -> np.ndarray:
    if not isinstance(data, (list, tuple)):
        raise ValueError("a point must be a JSON list")
    return np.array([parse_complex(v) for v in data], dtype=complex)


def spec_to_json(spec: ProblemSpec) -> dict:
    names = list(spec.variables)
    return {
        "variables": names,
        "ideal": [g.to_string(names) for g in spec.ideal_generators],
        "map": [f.to_string(names) for f in spec.map.components],
        "homogeneous": spec.homogeneous,
    }


def spec_from_json(data: dict) -> ProblemSpec:
    if not isinstance(data, dict):
        raise ProblemFileError("problem file must hold a JSON object")
    unknown = set(data) - {"variables", "ideal", "map", "homogeneous", "name", "comment"}
    if unknown:
        raise ProblemFileError(f"unknown keys in problem file: {sorted(unknown)}")
    try:
        variables = data["variables"]
        fmap = data["map"]
    except KeyError as e:
        raise ProblemFileError(f"problem file is missing {e.args[0]!r}") from None
    if not variables or not all(isinstance(v, str) for v in variables):
        raise ProblemFileError("'variables' must be a nonempty list of names")
    if len(set(variables)) != len(variables):
        raise ProblemFileError("duplicate variable names")
    try:
        return ProblemSpec.from_strings(variables, data.get("ideal", []), fmap, data.get("homogeneous", False))
    except ValueError as e:
        raise ProblemFileError(str(e)) from e


def load_problem(path) -> ProblemSpec:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ProblemFileError(f"{path}: invalid JSON ({e})") from e
    return spec_from_json(data)
