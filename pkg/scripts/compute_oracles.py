"""Symbolic oracles for the desk-scale examples, frozen into tests/fixtures.

The implicit ideal is obtained by Groebner elimination in sympy; its degree
and Hilbert function values are read off the leading-term ideal by counting
standard monomials. Nothing here touches the numerical code paths.
"""

import json
import sys
from math import comb
from pathlib import Path

import sympy as sp
from sympy.polys.orderings import grevlex

OUT = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "oracles.json"


def implicit_ideal(params, comps):
    ys = sp.symbols(f"y0:{len(comps)}")
    G = sp.groebner([y - c for y, c in zip(ys, comps)], *params, *ys, order="lex")
    elim = [g for g in G.exprs if not (g.free_symbols & set(params))]
    return ys, elim


def standard_monomial_counts(ys, gens, dmax):
    G = sp.groebner(gens, *ys, order="grevlex") if gens else None
    leads = []
    if G is not None:
        for g in G.exprs:
            lm = sp.Poly(g, *ys).monoms(order=grevlex)[0]
            leads.append(lm)
    counts = []
    for d in range(dmax + 1):
        total = 0
        for e in _monomials(len(ys), d):
            if not any(all(a >= b for a, b in zip(e, l)) for l in leads):
                total += 1
        counts.append(total)
    return counts


def _monomials(k, d):
    if k == 1:
        yield (d,)
        return
    for i in range(d, -1, -1):
        for rest in _monomials(k - 1, d - i):
            yield (i,) + rest


def main():
    s, t, x, y, z = sp.symbols("s t x y z")
    cases = {
        "twisted_cubic": ([s, t], [s**3, s**2 * t, s * t**2, t**3], 1),
        "rational_normal_quartic": ([s, t], [s**4, s**3 * t, s**2 * t**2, s * t**3, t**4], 1),
        "veronese_2_3": ([x, y, z], [x**2, x * y, x * z, y**2, y * z, z**2], 2),
        "conic_2_2": ([s, t], [s**2, s * t, t**2], 1),
    }
    out = {}
    for name, (params, comps, proj_dim) in cases.items():
        ys, gens = implicit_ideal(params, comps)
        dmax = 8
        quotient = standard_monomial_counts(ys, gens, dmax)
        ideal_dims = [comb(len(ys) - 1 + d, d) - q for d, q in enumerate(quotient)]
        # Hilbert polynomial of a projective variety of dimension k has leading term deg * d^k / k!
        diffs = quotient
        for _ in range(proj_dim):
            diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        out[name] = {
            "degree": int(diffs[-1]),
            "ideal_hilbert": ideal_dims,
            "generators": [str(g) for g in gens],
        }
        print(name, out[name]["degree"], ideal_dims, file=sys.stderr)
    OUT.write_text(json.dumps(out, indent=2) + "\n")


if __name__ == "__main__":
    main()
