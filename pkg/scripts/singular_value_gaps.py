"""Singular value profile of the plane-projection interpolation matrices.

For each seed and degree this prints the Hilbert value, the smallest singular
value counted as nonzero, the largest one counted as zero (both relative to
the top one), and the size of the gap between them. It is the measurement
behind the choice of the absolute floor in ``numlin``.

    python scripts/singular_value_gaps.py --seeds 8
"""

import argparse

from implicitize import examples
from implicitize.interpolation import numerical_hilbert_function
from implicitize.polynomial import make_cone_map
from implicitize.sampler import build_source_witness


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=8)
    ap.add_argument("--degrees", type=int, nargs="+", default=[17, 18, 19])
    args = ap.parse_args()
    print(f"{'seed':>4} {'d':>3} {'H':>3} {'last kept':>10} {'first zero':>10} {'gap':>9}")
    for seed in range(args.seeds):
        spec = examples.canonical_curve_projection(seed)
        w = build_source_witness(spec, seed=seed)
        cone = make_cone_map(spec)
        for d in args.degrees:
            t = numerical_hilbert_function(spec, w, cone, d, seed=seed)
            s = t.singular_values / t.singular_values[0]
            r = len(s) - t.hilbert_value
            kept = s[r - 1]
            zero = s[r] if r < len(s) else float("nan")
            print(f"{seed:>4} {d:>3} {t.hilbert_value:>3} {kept:>10.1e} {zero:>10.1e} {kept / zero:>9.1e}")


if __name__ == "__main__":
    main()
