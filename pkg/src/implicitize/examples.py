"""Problem builders for the worked examples and small oracle cases."""

from __future__ import annotations

import itertools

import numpy as np

from .polynomial import Polynomial, PolynomialMap, ProblemSpec, monomial_basis


def _monomial_text(names, exps) -> str:
    return "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e) or "1"


def identity(n: int = 3) -> ProblemSpec:
    names = [f"x{i}" for i in range(n)]
    return ProblemSpec.from_strings(names, [], names, homogeneous=True)


def rational_normal_curve(d: int) -> ProblemSpec:
    """``(s^d, s^(d-1) t, ..., t^d)``; d = 3 is the twisted cubic."""
    return ProblemSpec.from_strings(
        ["s", "t"], [], [_monomial_text("st", (d - k, k)) for k in range(d + 1)], homogeneous=True
    )


def twisted_cubic() -> ProblemSpec:
    return rational_normal_curve(3)


def veronese(d: int, n: int) -> ProblemSpec:
    """All degree-``d`` monomials in ``n`` variables: the cone over the Veronese of P^(n-1)."""
    names = [f"x{i}" for i in range(n)]
    return ProblemSpec.from_strings(names, [], [_monomial_text(names, e) for e in monomial_basis(d, n)], True)


def circle() -> ProblemSpec:
    return ProblemSpec.from_strings(["x", "y"], ["x^2 + y^2 - 1"], ["x", "y"])


def symmetric_tensor_secant(rank: int = 14, n: int = 5, d: int = 4) -> ProblemSpec:
    """Sums of ``rank`` powers of linear forms in ``n`` variables."""
    names = [f"s{i}_{j}" for i in range(1, rank + 1) for j in range(1, n + 1)]
    comps = []
    for e in monomial_basis(d, n):
        comps.append(" + ".join(_monomial_text(names[i * n:(i + 1) * n], e) for i in range(rank)))
    return ProblemSpec.from_strings(names, [], comps, homogeneous=True)


def _random_form(rng: np.random.Generator, d: int, n: int) -> Polynomial:
    basis = monomial_basis(d, n)
    coeffs = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
    return Polynomial(dict(zip(basis, coeffs)), n)


def canonical_curve_projection(seed=0) -> ProblemSpec:
    """A random quadric and cubic in P^3 projected by three random cubics."""
    rng = np.random.default_rng(seed)
    ideal = (_random_form(rng, 2, 4), _random_form(rng, 3, 4))
    fmap = PolynomialMap(tuple(_random_form(rng, 3, 4) for _ in range(3)))
    return ProblemSpec(("x0", "x1", "x2", "x3"), ideal, fmap, homogeneous=True)


def segre_secant(k: int = 5) -> ProblemSpec:
    """sigma_2 of (P^1)^k via ``t0 * prod(1 + a_i) + t1 * prod(1 + b_i)``."""
    a = [f"a{i}" for i in range(1, k + 1)]
    b = [f"b{i}" for i in range(1, k + 1)]
    comps = []
    for S in itertools.product([0, 1], repeat=k):
        comps.append(f"t0*{_monomial_text(a, S)} + t1*{_monomial_text(b, S)}")
    return ProblemSpec.from_strings(a + b + ["t0", "t1"], [], comps, homogeneous=False)


RESULTANT_MONOMIALS = ["x^2", "x*y", "x*z", "y^2", "y*z", "z^2"]


def resultant_hypersurface(homogeneous: bool = False) -> ProblemSpec:
    """Coefficients of three ternary quadrics with a common zero."""
    coeffs = [f"{l}{i}" for l in "cde" for i in range(1, 7)]
    ideal = [
        " + ".join(f"{l}{i + 1}*{m}" for i, m in enumerate(RESULTANT_MONOMIALS)) for l in "cde"
    ]
    return ProblemSpec.from_strings(coeffs + ["x", "y", "z"], ideal, coeffs, homogeneous)
