"""Command line driver: ``implicitize dim|hilbert|degree|member|sample problem.json``.

Results go to stdout as one JSON envelope; progress events go to stderr as
JSON lines unless ``--quiet`` is given.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
import time
from pathlib import Path

import numpy as np

from .dimension import DimensionError, numerical_image_dim
from .interpolation import extract_image_equations, equation_polynomial, numerical_hilbert_function
from .membership import IncompleteWitnessError, membership
from .monodromy import DegreeError, PseudoWitnessSet, numerical_image_degree
from .numlin import DEFAULT_GAP_THRESHOLD
from .polynomial import PolynomialSyntaxError, make_cone_map
from .sampler import SamplingError, build_source_witness, numerical_image_sample, numerical_source_sample
from .serialization import ProblemFileError, encode_array, load_problem, parse_point, spec_to_json
from .tracker import TrackingError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_INCOMPLETE = 4


class InputError(ValueError):
    pass


def _progress(args):
    if args.quiet:
        return None

    def emit(event: dict):
        print(json.dumps(event), file=sys.stderr, flush=True)

    return emit


def cmd_dim(spec, args, rng) -> tuple[dict, int]:
    w = build_source_witness(spec, rng, threads=args.threads)
    return {"dimension": numerical_image_dim(spec, w, rng, args.threshold, args.threads)}, EXIT_OK


def cmd_hilbert(spec, args, rng) -> tuple[dict, int]:
    if args.degree_arg is None:
        raise InputError("hilbert needs --degree-arg")
    w = build_source_witness(spec, rng, threads=args.threads)
    cone = make_cone_map(spec)
    table = numerical_hilbert_function(spec, w, cone, args.degree_arg, args.threshold, rng, args.threads)
    payload = table.to_json(include_matrix=args.include_matrix)
    names = [f"y{i}" for i in range(cone.target_dim)]
    payload["equations"] = [
        equation_polynomial(c, table.degree_argument, cone.target_dim).to_string(names)
        for c in extract_image_equations(table)
    ]
    if args.table_out:
        Path(args.table_out).write_text(json.dumps(payload))
    return payload, EXIT_OK


def cmd_degree(spec, args, rng) -> tuple[dict, int]:
    w = build_source_witness(spec, rng, threads=args.threads)
    cone = make_cone_map(spec)
    pws = numerical_image_degree(
        spec, w, cone, args.max_loops, args.max_trace_tests, rng,
        threads=args.threads, progress=_progress(args),
    )
    if args.witness_out:
        Path(args.witness_out).write_text(json.dumps(pws.to_json()))
    payload = {
        "degree": pws.degree,
        "is_complete": pws.is_complete,
        "loop_log": pws.loop_log,
        "trace_tests_failed": pws.trace_tests_failed,
    }
    return payload, EXIT_OK if pws.is_complete else EXIT_INCOMPLETE


def _read_point(text: str):
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    try:
        return parse_point(json.loads(text))
    except (json.JSONDecodeError, ValueError) as e:
        raise InputError(f"bad --point: {e}") from e


def cmd_member(spec, args, rng) -> tuple[dict, int]:
    if not args.witness_in or args.point is None:
        raise InputError("member needs --witness-in and --point")
    try:
        pws = PseudoWitnessSet.from_json(json.loads(Path(args.witness_in).read_text()))
    except (KeyError, json.JSONDecodeError) as e:
        raise InputError(f"unreadable witness file: {e}") from e
    if spec is not None and spec_to_json(spec) != spec_to_json(pws.spec):
        raise InputError("witness file was computed for a different problem")
    try:
        r = membership(pws, _read_point(args.point), seed=rng, threads=args.threads)
    except IncompleteWitnessError as e:
        raise InputError(str(e)) from e
    except ValueError as e:
        raise InputError(str(e)) from e
    payload = {
        "on_image": r.on_image,
        "distance": r.distance,
        "failed_paths": r.failed_paths,
        "singular_paths": r.singular_paths,
    }
    return payload, EXIT_OK


def cmd_sample(spec, args, rng) -> tuple[dict, int]:
    if args.count < 1:
        raise InputError("--count must be positive")
    w = build_source_witness(spec, rng, threads=args.threads)
    if args.which == "source":
        pts = numerical_source_sample(w, args.count, rng, threads=args.threads)
    else:
        pts = numerical_image_sample(w, make_cone_map(spec), args.count, rng, threads=args.threads)
    return {"which": args.which, "points": encode_array(pts)}, EXIT_OK


COMMANDS = {"dim": cmd_dim, "hilbert": cmd_hilbert, "degree": cmd_degree, "member": cmd_member, "sample": cmd_sample}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="implicitize", description="Numerical implicitization of polynomial maps.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("problem", help="problem JSON file (variables, ideal, map, homogeneous)")
    ap.add_argument("--seed", type=int, default=None, help="RNG seed; a random one is drawn and echoed if omitted")
    ap.add_argument("--threshold", type=float, default=DEFAULT_GAP_THRESHOLD, help="SVD gap threshold")
    ap.add_argument("--degree-arg", type=int, default=None, help="degree argument for hilbert")
    ap.add_argument("--max-loops", type=int, default=4, help="consecutive fruitless monodromy loops before a trace test")
    ap.add_argument("--max-trace-tests", type=int, default=10)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--witness-out", default=None)
    ap.add_argument("--witness-in", default=None)
    ap.add_argument("--point", default=None, help="JSON list of complex numbers, or @file")
    ap.add_argument("--count", type=int, default=1)
    ap.add_argument("--which", choices=["source", "image"], default="image")
    ap.add_argument("--table-out", default=None)
    ap.add_argument("--include-matrix", action="store_true")
    ap.add_argument("--quiet", action="store_true")
    return ap


def run(argv=None) -> tuple[dict | None, int]:
    args = build_parser().parse_args(argv)
    seed = args.seed if args.seed is not None else secrets.randbits(63)
    if seed < 0:
        print("error: --seed must be nonnegative", file=sys.stderr)
        return None, EXIT_INPUT
    settings = {
        k: getattr(args, k)
        for k in ("threshold", "degree_arg", "max_loops", "max_trace_tests", "threads", "count", "which")
    }
    start = time.perf_counter()
    try:
        spec = load_problem(args.problem)
        payload, code = COMMANDS[args.command](spec, args, np.random.default_rng(seed))
    except (InputError, ProblemFileError, PolynomialSyntaxError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return None, EXIT_INPUT
    except (SamplingError, TrackingError, DimensionError, DegreeError, np.linalg.LinAlgError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return None, EXIT_NUMERICAL
    envelope = {
        "command": args.command,
        "seed": seed,
        "settings": settings,
        "wall_time": time.perf_counter() - start,
        "payload": payload,
    }
    return envelope, code


def main(argv=None) -> int:
    envelope, code = run(argv)
    if envelope is not None:
        print(json.dumps(envelope))
    return code


if __name__ == "__main__":
    sys.exit(main())
