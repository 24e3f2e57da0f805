"""Monodromy degree run with a timestamped growth transcript.

    python scripts/run_degree.py problems/segre_secant.json --seed 0 --witness-out segre.json

Prints one line per event (elapsed seconds, event) and a final summary.
"""

import argparse
import json
import time

from implicitize.monodromy import numerical_image_degree
from implicitize.polynomial import make_cone_map
from implicitize.sampler import build_source_witness
from implicitize.serialization import load_problem


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("problem")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-loops", type=int, default=None, help="stop after this many loops")
    ap.add_argument("--repetitive", type=int, default=4, help="fruitless loops before a trace test")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--witness-out", default=None)
    args = ap.parse_args()

    spec = load_problem(args.problem)
    start = time.perf_counter()

    def show(event):
        print(f"{time.perf_counter() - start:9.1f}s  {json.dumps(event)}", flush=True)

    w = build_source_witness(spec, seed=args.seed, threads=args.threads)
    pws = numerical_image_degree(
        spec, w, make_cone_map(spec), args.repetitive, seed=args.seed,
        threads=args.threads, progress=show, max_loops=args.max_loops,
    )
    if args.witness_out:
        with open(args.witness_out, "w") as fh:
            json.dump(pws.to_json(), fh)
    print(f"degree {pws.degree}  complete {pws.is_complete}  loops {len(pws.loop_log)}  "
          f"trace failures {pws.trace_tests_failed}  {time.perf_counter() - start:.0f}s")


if __name__ == "__main__":
    main()
