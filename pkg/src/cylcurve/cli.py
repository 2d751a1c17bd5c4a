"""Command-line front end: analyze curve specs, fuzz random families, run
the chord-comparison oracle, and perturb curves into general position.

Exit codes: 0 all checks pass, 2 a certification flag failed, 3 input or
validation error.
"""

import argparse
import json
import os
import sys

import numpy as np

from .curves import CurveSpec, reparametrize_arclength
from .errors import CurveError, HypothesisViolated, NonFinite, NonRegular
from .svgplot import write_svg
from .topology import find_crossings, perturb_to_general_position
from .verify import analyze, random_curve, schur_chord_compare

EXIT_OK = 0
EXIT_FLAG = 2
EXIT_INPUT = 3

TOL_ENV = "CYLCURVE_TOL"


def _default_tol():
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return None
    try:
        tol = float(raw)
    except ValueError:
        raise ValueError(f"{TOL_ENV} must be a number, got {raw!r}")
    if tol <= 0.0:
        raise ValueError(f"{TOL_ENV} must be positive, got {raw!r}")
    return tol


def _write_json(path, payload):
    text = json.dumps(payload, indent=2)
    if path == "-":
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def cmd_analyze(args) -> int:
    spec = CurveSpec.from_json(args.spec)
    tol = args.tol if args.tol is not None else _default_tol()
    report = analyze(spec, n_samples=args.samples, tol=tol)
    _write_json(args.report, report.to_dict())
    if args.svg:
        curve = reparametrize_arclength(spec, report.n_samples)
        write_svg(args.svg, curve, report.crossings, report.short_loop)
    return EXIT_OK if report.all_ok else EXIT_FLAG


def _parse_seeds(text):
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValueError(f"seed range must look like A..B, got {text!r}")
    lo, hi = int(lo), int(hi)
    if hi < lo:
        raise ValueError(f"empty seed range {text!r}")
    return range(lo, hi + 1)


def _fuzz_one(seed, harmonics, amplitude, tol):
    spec = random_curve(seed, harmonics, amplitude)
    report = analyze(spec, tol=tol)
    return seed, spec, report


def cmd_fuzz(args) -> int:
    seeds = _parse_seeds(args.seeds)
    tol = args.tol if args.tol is not None else _default_tol()
    results = []
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futs = [pool.submit(_fuzz_one, s, args.harmonics,
                                args.amplitude, tol) for s in seeds]
            results = [f.result() for f in futs]
    else:
        results = [_fuzz_one(s, args.harmonics, args.amplitude, tol)
                   for s in seeds]
    results.sort(key=lambda r: r[0])

    summary = {"total": 0, "crossing_free": 0, "passed": 0,
               "ill_conditioned": 0, "failed": 0, "failed_seeds": []}
    fail_dir = args.fail_dir
    for seed, spec, report in results:
        summary["total"] += 1
        if not report.crossings:
            summary["crossing_free"] += 1
        elif report.ill_conditioned:
            summary["ill_conditioned"] += 1
        elif report.all_ok:
            summary["passed"] += 1
        else:
            summary["failed"] += 1
            summary["failed_seeds"].append(seed)
            os.makedirs(fail_dir, exist_ok=True)
            spec.to_json(os.path.join(fail_dir, f"seed-{seed}.json"))
    _write_json(args.summary, summary)
    return EXIT_FLAG if summary["failed"] else EXIT_OK


def _profile(entry, name):
    if isinstance(entry, (int, float)):
        return lambda s, c=float(entry): c
    if isinstance(entry, list) and len(entry) >= 2:
        return [float(v) for v in entry]
    raise ValueError(f"{name} must be a number or a list of >= 2 samples")


def cmd_schur(args) -> int:
    with open(args.profile) as fh:
        prof = json.load(fh)
    for key in ("kappa1", "kappa2", "S"):
        if key not in prof:
            raise ValueError(f"profile is missing {key!r}")
    report = schur_chord_compare(
        _profile(prof["kappa1"], "kappa1"),
        _profile(prof["kappa2"], "kappa2"),
        float(prof["S"]),
        n_grid=int(prof.get("n_grid", 64)),
    )
    payload = {k: (v.tolist() if isinstance(v, np.ndarray) else v)
               for k, v in report.items()}
    _write_json(args.report, payload)
    return EXIT_OK if report["ok"] else EXIT_FLAG


def cmd_perturb(args) -> int:
    spec = CurveSpec.from_json(args.spec)
    out = perturb_to_general_position(spec, args.magnitude, args.seed,
                                      n_samples=args.samples)

    def pad(c, n):
        return list(c) + [0.0] * (n - len(c))

    diff = 0.0
    for a, b in ((spec.x_cos, out.x_cos), (spec.x_sin, out.x_sin),
                 (spec.y_cos, out.y_cos), (spec.y_sin, out.y_sin)):
        n = max(len(a), len(b))
        diff += sum(abs(x - y) for x, y in zip(pad(a, n), pad(b, n)))
    payload = dict(out.to_dict(), diff_magnitude=diff)
    _write_json(args.out, payload)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="cylcurve",
        description="Self-intersection certification for planar curves "
                    "2*pi-periodic in x.")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="full certification of one curve")
    a.add_argument("spec", help="curve spec JSON path")
    a.add_argument("--samples", type=int, default=None)
    a.add_argument("--tol", type=float, default=None)
    a.add_argument("--report", default="-", help="report JSON path or -")
    a.add_argument("--svg", default=None, help="optional SVG output path")
    a.set_defaults(func=cmd_analyze)

    f = sub.add_parser("fuzz", help="seeded random-curve battery")
    f.add_argument("--seeds", required=True, help="inclusive range A..B")
    f.add_argument("--harmonics", type=int, default=6)
    f.add_argument("--amplitude", type=float, default=2.0)
    f.add_argument("--jobs", type=int, default=1)
    f.add_argument("--tol", type=float, default=None)
    f.add_argument("--summary", default="-", help="summary JSON path or -")
    f.add_argument("--fail-dir", default="fuzz-failures",
                   help="directory for failing curve specs")
    f.set_defaults(func=cmd_fuzz)

    s = sub.add_parser("schur", help="chord-comparison oracle")
    s.add_argument("--profile", required=True,
                   help="JSON with kappa1, kappa2 (number or samples), S")
    s.add_argument("--report", default="-")
    s.set_defaults(func=cmd_schur)

    p = sub.add_parser("perturb", help="jitter into general position")
    p.add_argument("spec", help="curve spec JSON path")
    p.add_argument("--magnitude", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--out", default="-", help="perturbed spec path or -")
    p.set_defaults(func=cmd_perturb)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HypothesisViolated, NonFinite, NonRegular) as exc:
        # bad inputs: hypotheses or curve validity, not certification
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CurveError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FLAG


if __name__ == "__main__":
    sys.exit(main())
