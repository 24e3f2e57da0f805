"""Write the example problems as JSON files under problems/."""

import json
from pathlib import Path

from implicitize import examples
from implicitize.serialization import spec_to_json

OUT = Path(__file__).resolve().parents[1] / "problems"

PROBLEMS = {
    "twisted_cubic": (examples.twisted_cubic(), "cone over the twisted cubic in P^3"),
    "veronese_2_3": (examples.veronese(2, 3), "cone over the Veronese surface in P^5"),
    "rational_normal_quartic": (examples.rational_normal_curve(4), "cone over the rational normal quartic"),
    "circle": (examples.circle(), "the unit circle embedded in A^2"),
    "symmetric_tensor_secant": (
        examples.symmetric_tensor_secant(),
        "sums of 14 fourth powers of linear forms in 5 variables",
    ),
    "plane_projection": (
        examples.canonical_curve_projection(0),
        "quadric and cubic in P^3 projected to P^2 by three random cubics (seed 0)",
    ),
    "segre_secant": (examples.segre_secant(5), "secant variety of the Segre embedding of (P^1)^5"),
    "three_quadrics": (examples.resultant_hypersurface(), "coefficients of three ternary quadrics with a common zero"),
}


def main():
    OUT.mkdir(exist_ok=True)
    for name, (spec, comment) in PROBLEMS.items():
        data = {"name": name, "comment": comment, **spec_to_json(spec)}
        (OUT / f"{name}.json").write_text(json.dumps(data, indent=1) + "\n")
        print(OUT / f"{name}.json")


if __name__ == "__main__":
    main()
