"""Command-line front end.

Subcommands: hankel, pe-check, member, simulate, mpum, leslie-demo.
Exit codes: 0 success / positive verdict, 2 input error, 3 negative verdict
(NOT_REPRESENTATIVE, infeasible, or reference-value mismatch), 4 undecided.
The default random seed can be overridden with the BEHAVIOR_CONES_SEED
environment variable or the --seed flag.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .behavior import (
    Trajectory,
    behavior_from_json_dict,
    behavior_to_json_dict,
    build_hankel,
    membership,
    trajectory_from_csv,
    trajectory_to_csv,
)
from .mpum import mpum_finite
from .nnrank import DEFAULT_SEED, NnRankConfig
from .pecheck import (
    ModelClass,
    Verdict,
    data_driven_representation,
    pe_check_affine,
    pe_check_linear,
    pe_check_positive,
    pe_check_positive_affine,
    pe_report_to_json_dict,
)
from .statespace import (
    leslie_model,
    model_from_json_dict,
    simulate,
    state_trajectory_from_csv,
    state_trajectory_to_csv,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NEGATIVE = 3
EXIT_UNDECIDED = 4

_VERDICT_EXIT = {
    Verdict.REPRESENTATIVE: EXIT_OK,
    Verdict.NOT_REPRESENTATIVE: EXIT_NEGATIVE,
    Verdict.UNDECIDED: EXIT_UNDECIDED,
}

LESLIE_REFERENCE = {
    "trajectory": [0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0],
    "hankel": [
        [0.0, 0.0, 1.0, 1.0],
        [0.0, 1.0, 1.0, 0.0],
        [1.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 1.0],
    ],
    "ordinaryRank": 3,
    "nnLower": 4,
    "nnUpper": 4,
    "monomialOrder": 4,
    "verdicts": {
        "linear": "NOT_REPRESENTATIVE",
        "positiveLinear": "REPRESENTATIVE",
    },
}


def _default_seed() -> int:
    value = os.environ.get("BEHAVIOR_CONES_SEED")
    if value is None:
        return DEFAULT_SEED
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"BEHAVIOR_CONES_SEED must be an integer, got {value!r}") from None


def _emit(doc: dict, output: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_trajectory(path: str) -> Trajectory:
    return trajectory_from_csv(Path(path).read_text(encoding="utf-8"))


def _nn_config(args) -> NnRankConfig:
    return NnRankConfig(restarts=args.restarts, tol=args.tol, seed=args.seed)


def cmd_hankel(args) -> int:
    H = build_hankel(_read_trajectory(args.trajectory), args.length)
    doc = {
        "rows": H.entries.shape[0],
        "cols": H.entries.shape[1],
        "entries": H.entries.reshape(-1).tolist(),
    }
    _emit(doc, args.output)
    return EXIT_OK


def cmd_pe_check(args) -> int:
    w = _read_trajectory(args.trajectory)
    cls = ModelClass(args.model_class)
    if cls is ModelClass.LINEAR:
        report = pe_check_linear(w, args.order, args.length, args.inputs, tol=0.0)
    elif cls is ModelClass.AFFINE:
        report = pe_check_affine(w, args.order, args.length, args.inputs, tol=0.0)
    else:
        if args.state is None:
            raise ValueError(f"model class {cls.value} requires --state with measured states")
        x = state_trajectory_from_csv(Path(args.state).read_text(encoding="utf-8"))
        check = pe_check_positive if cls is ModelClass.POSITIVE_LINEAR else pe_check_positive_affine
        report = check(w, x, args.order, args.length, args.inputs, config=_nn_config(args))
    _emit(pe_report_to_json_dict(report, embed_representation=True), args.output)
    return _VERDICT_EXIT[report.verdict]


def cmd_member(args) -> int:
    with open(args.behavior, encoding="utf-8") as fh:
        B = behavior_from_json_dict(json.load(fh))
    window = _read_trajectory(args.window)
    if window.q != B.q or window.T != B.L:
        raise ValueError(
            f"window must be {B.L} samples of a q={B.q} signal, "
            f"got T={window.T}, q={window.q}"
        )
    cert = membership(B, window.samples.reshape(-1), tol=args.tol)
    doc = {
        "feasible": cert.feasible,
        "coefficients": cert.coefficients.tolist() if cert.coefficients is not None else None,
        "residualNorm": cert.residual_norm,
        "tolUsed": cert.tol_used,
    }
    _emit(doc, args.output)
    return EXIT_OK if cert.feasible else EXIT_NEGATIVE


def cmd_simulate(args) -> int:
    with open(args.model, encoding="utf-8") as fh:
        ss = model_from_json_dict(json.load(fh))
    x0 = [float(v) for v in args.x0.split(",")] if args.x0 else [0.0] * ss.n
    u = None
    if args.input:
        u = _read_trajectory(args.input).samples
    w, x = simulate(ss, x0, args.steps, u)
    Path(args.output or "trajectory.csv").write_text(trajectory_to_csv(w), encoding="utf-8")
    Path(args.state_output or "state.csv").write_text(
        state_trajectory_to_csv(x), encoding="utf-8"
    )
    return EXIT_OK


def cmd_mpum(args) -> int:
    result = mpum_finite(_read_trajectory(args.trajectory), args.length, ModelClass(args.model_class))
    _emit(behavior_to_json_dict(result.behavior), args.output)
    return EXIT_OK


def cmd_leslie_demo(args) -> int:
    """Reproduce the four-age-class Leslie case study end to end."""
    ss = leslie_model([0.0, 0.0, 0.0, 1.0], [1.0, 1.0, 1.0], k=2)
    w, x = simulate(ss, [1.0, 0.0, 0.0, 0.0], T=7)
    n, L = args.order, args.length
    cfg = _nn_config(args)
    linear = pe_check_linear(w, n, L)
    affine = pe_check_affine(w, n, L)
    positive = pe_check_positive(w, x, n, L, config=cfg)
    positive_affine = pe_check_positive_affine(w, x, n, L, config=cfg)
    H = build_hankel(w, L)
    bounds = positive.nn_bounds
    doc = {
        "trajectory": w.samples.reshape(-1).tolist(),
        "hankelDepth": L,
        "hankel": H.entries.tolist(),
        "ordinaryRank": linear.ordinary_rank,
        "nnLower": bounds.lower,
        "nnUpper": bounds.upper,
        "monomialOrder": positive.monomial.order if positive.monomial else None,
        "verdicts": {
            "linear": linear.verdict.value,
            "affine": affine.verdict.value,
            "positiveLinear": positive.verdict.value,
            "positiveAffine": positive_affine.verdict.value,
        },
        "representation": behavior_to_json_dict(
            data_driven_representation(w, ModelClass.POSITIVE_LINEAR, L)
        ),
    }
    ref = LESLIE_REFERENCE
    mismatches = []
    if doc["trajectory"] != ref["trajectory"]:
        mismatches.append("trajectory")
    if doc["hankel"] != ref["hankel"]:
        mismatches.append("hankel")
    for key in ("ordinaryRank", "nnLower", "nnUpper", "monomialOrder"):
        if doc[key] != ref[key]:
            mismatches.append(key)
    for cls_name, expected in ref["verdicts"].items():
        if doc["verdicts"][cls_name] != expected:
            mismatches.append(f"verdicts.{cls_name}")
    doc["mismatches"] = mismatches
    doc["matchesReference"] = not mismatches
    _emit(doc, args.output)
    return EXIT_OK if not mismatches else EXIT_NEGATIVE


def _add_common(sub: argparse.ArgumentParser, seed: int) -> None:
    sub.add_argument("--tol", type=float, default=1e-8, help="relative tolerance")
    sub.add_argument("--seed", type=int, default=seed, help="random seed")
    sub.add_argument("--restarts", type=int, default=50, help="factorization restarts")
    sub.add_argument("--output", "-o", default=None, help="write the JSON result here")


def build_parser() -> argparse.ArgumentParser:
    seed = _default_seed()
    parser = argparse.ArgumentParser(
        prog="behavior-cones",
        description="Hankel-based data-driven representations of linear, affine, "
        "and positive system behaviors.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    hankel = subs.add_parser("hankel", help="Hankel matrix of a trajectory CSV")
    hankel.add_argument("trajectory", help="trajectory CSV (header u1..um,y1..yp)")
    hankel.add_argument("--length", "-L", type=int, required=True, help="window depth L")
    _add_common(hankel, seed)
    hankel.set_defaults(func=cmd_hankel)

    pe = subs.add_parser("pe-check", help="persistence-of-excitation verdict")
    pe.add_argument("trajectory", help="trajectory CSV")
    pe.add_argument("--state", help="state CSV (header x1..xn); required for positive classes")
    pe.add_argument(
        "--class",
        dest="model_class",
        required=True,
        choices=[c.value for c in ModelClass],
        help="model class",
    )
    pe.add_argument("--inputs", "-m", type=int, default=None, help="number of inputs")
    pe.add_argument("--order", "-n", type=int, required=True, help="state dimension n")
    pe.add_argument("--length", "-L", type=int, required=True, help="window depth L")
    _add_common(pe, seed)
    pe.set_defaults(func=cmd_pe_check)

    member = subs.add_parser("member", help="membership of a window in a behavior")
    member.add_argument("behavior", help="behavior JSON file")
    member.add_argument("window", help="window CSV with exactly L samples")
    _add_common(member, seed)
    member.set_defaults(func=cmd_member)

    sim = subs.add_parser("simulate", help="simulate a state-space model JSON")
    sim.add_argument("model", help="model JSON file")
    sim.add_argument("--x0", help="comma-separated initial state (default: zeros)")
    sim.add_argument("--steps", "-T", type=int, required=True, help="number of samples")
    sim.add_argument("--input", help="input trajectory CSV (needed when m > 0)")
    sim.add_argument("--output", "-o", default=None, help="trajectory CSV path (default trajectory.csv)")
    sim.add_argument("--state-output", default=None, help="state CSV path (default state.csv)")
    sim.add_argument("--seed", type=int, default=seed, help=argparse.SUPPRESS)
    sim.set_defaults(func=cmd_simulate)

    mpum = subs.add_parser("mpum", help="hull of all length-L windows of a trajectory")
    mpum.add_argument("trajectory", help="trajectory CSV")
    mpum.add_argument("--length", "-L", type=int, required=True, help="window depth L")
    mpum.add_argument(
        "--class",
        dest="model_class",
        required=True,
        choices=[c.value for c in ModelClass],
        help="model class picking the hull",
    )
    _add_common(mpum, seed)
    mpum.set_defaults(func=cmd_mpum)

    demo = subs.add_parser("leslie-demo", help="reproduce the Leslie case study")
    demo.add_argument("--order", "-n", type=int, default=4, help="claimed state dimension")
    demo.add_argument("--length", "-L", type=int, default=4, help="window depth")
    _add_common(demo, seed)
    demo.set_defaults(func=cmd_leslie_demo)

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ValueError as exc:  # bad BEHAVIOR_CONES_SEED
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
