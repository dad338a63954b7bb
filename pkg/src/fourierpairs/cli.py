"""Command-line interface.

Commands
--------
solve    build the doubly vanishing signal for one modulus
pair     build a measure/transform pair and dump windowed atom lists
nu       materialize an overlay truncation and its transform
verify   run seeded Gaussian pairing batches against a target
export   convert an atom dump to CSV or canonical JSON

Windows are written LO:HI with exact rational endpoints ("-12:12",
"1/4:7/2", "-0.5:0.5"); note the --window=-12:12 form is needed for
negative lower endpoints.  All reports are deterministic for a fixed
backend: rerunning a command with the same arguments and seed produces
byte-identical output.

Exit codes: 0 success / all pass, 1 failure, 2 usage error, 3 resource
guard tripped, 4 verification window too small for a meaningful verdict.
"""

from __future__ import annotations

import argparse
import cmath
import json
import sys
from fractions import Fraction

import numpy as np

from ._kernels import active_backend
from .builder import NuResourceError, build_nu, build_pair
from .cyclic import zero_window
from .measures import (
    PeriodicLatticeMeasure,
    WindowedMeasure,
    atoms_to_records,
    restrict_window,
    unit_variation,
    window_variation,
)
from .solver import SolverError, solve_vanishing, spectral_residual
from .verify import (
    gaussian_batch,
    min_gap,
    pairing_residual,
    q_rank,
    vanishing_check,
)

ATOMS_FORMAT = "fourierpairs.atoms.v1"
SIGNAL_FORMAT = "fourierpairs.signal.v1"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_WINDOW = 4


def _parse_window(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(
            f"window must be LO:HI with rational endpoints, got {text!r}"
        )
    try:
        lo, hi = (Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad window endpoint in {text!r}: {exc}")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"window {text!r} is empty")
    return lo, hi


def _emit(doc: dict, human_lines: list[str], as_json: bool) -> None:
    if as_json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in human_lines:
            print(line)


def _write_json(path: str, doc: dict) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _dump_measure(path: str, measure: WindowedMeasure, digits: int) -> None:
    lo, hi = measure.window
    _write_json(
        path,
        {
            "format": ATOMS_FORMAT,
            "window": [str(lo), str(hi)],
            "count": len(measure),
            "atoms": atoms_to_records(measure, digits),
        },
    )


def _cmd_solve(args: argparse.Namespace) -> int:
    try:
        signal = solve_vanishing(args.M * args.M * 100, residual_tol=args.residual_tol)
    except SolverError as exc:
        _emit(
            {"error": str(exc), "best_residual": exc.best_residual},
            [f"solve failed: {exc}"],
            args.json,
        )
        return EXIT_FAIL
    modulus = signal.modulus
    win = zero_window(modulus)
    residual = spectral_residual(signal, win)
    zero_count = int(np.sum(signal.values[win.residues()] == 0))
    doc = {
        "modulus": modulus,
        "zero_radius": win.radius,
        "window_size": len(win),
        "exact_zero_count": zero_count,
        "max_abs": signal.max_abs(),
        "spectral_residual": residual,
        "backend": active_backend(),
    }
    if args.out:
        _write_json(
            args.out,
            {
                "format": SIGNAL_FORMAT,
                "modulus": modulus,
                "values": [[v.real, v.imag] for v in signal.values.tolist()],
            },
        )
        doc["out"] = args.out
    _emit(
        doc,
        [
            f"modulus {modulus}, zero window radius {win.radius} "
            f"({len(win)} residues)",
            f"exact zeros in window: {zero_count}",
            f"spectral residual: {residual:.3e} (backend {active_backend()})",
        ]
        + ([f"signal written to {args.out}"] if args.out else []),
        args.json,
    )
    return EXIT_OK


def _cmd_pair(args: argparse.Namespace) -> int:
    pair = build_pair(args.M)
    mu_w = restrict_window(pair.mu, args.window, prec=args.precision)
    mu_hat_w = restrict_window(pair.mu_hat, args.window, prec=args.precision)
    ok_mu = vanishing_check(pair.mu, args.M)
    ok_mu_hat = vanishing_check(pair.mu_hat, args.M)
    doc = {
        "gap_radius": args.M,
        "modulus": pair.modulus,
        "spacing": str(pair.spacing),
        "window": [str(b) for b in args.window],
        "mu_atoms": len(mu_w),
        "mu_hat_atoms": len(mu_hat_w),
        "mu_vanishes": ok_mu,
        "mu_hat_vanishes": ok_mu_hat,
        "mu_unit_variation": unit_variation(pair.mu),
        "mu_hat_unit_variation": unit_variation(pair.mu_hat),
    }
    lines = [
        f"pair with gap radius {args.M}: modulus {pair.modulus}, "
        f"spacing {pair.spacing}",
        f"atoms in window: {len(mu_w)} (measure), {len(mu_hat_w)} (transform)",
        f"central gap verified: measure {ok_mu}, transform {ok_mu_hat}",
    ]
    if args.out:
        mu_path = f"{args.out}_mu.json"
        mu_hat_path = f"{args.out}_mu_hat.json"
        _dump_measure(mu_path, mu_w, args.digits)
        _dump_measure(mu_hat_path, mu_hat_w, args.digits)
        doc["out"] = [mu_path, mu_hat_path]
        lines.append(f"atom dumps: {mu_path}, {mu_hat_path}")
    _emit(doc, lines, args.json)
    return EXIT_OK if (ok_mu and ok_mu_hat) else EXIT_FAIL


def _cmd_nu(args: argparse.Namespace) -> int:
    try:
        trunc = build_nu(args.n_max, args.window, prec=args.precision)
    except NuResourceError as exc:
        _emit(
            {"error": str(exc), "estimate": exc.estimate},
            [f"resource guard: {exc}"],
            args.json,
        )
        return EXIT_RESOURCE
    gap = min_gap(trunc.nu)
    rank = q_rank([a.position for a in trunc.nu.atoms])
    class_rows = [
        {
            "class": t.eps_class,
            "gap_radius": t.gap_radius,
            "skipped": t.skipped,
            "variation": t.variation,
            "weight_divisor": t.weight_divisor,
        }
        for t in trunc.terms
    ]
    doc = {
        "n_max": trunc.n_max,
        "window": [str(b) for b in trunc.window],
        "classes": class_rows,
        "nu_atoms": len(trunc.nu),
        "nu_hat_atoms": len(trunc.nu_hat),
        "min_gap": gap,
        "q_rank": rank,
        "nu_window_variation": window_variation(trunc.nu),
        "nu_hat_window_variation": window_variation(trunc.nu_hat),
        "variation_bound": trunc.variation_bound,
    }
    lines = [
        f"overlay truncation n_max={trunc.n_max} on "
        f"[{trunc.window[0]}, {trunc.window[1]}]",
    ]
    for t in trunc.terms:
        if t.skipped:
            lines.append(
                f"  class {t.eps_class}: gap {t.gap_radius}, skipped "
                f"(gap covers window)"
            )
        else:
            lines.append(
                f"  class {t.eps_class}: gap {t.gap_radius}, "
                f"variation {t.variation:.6f}, divisor {t.weight_divisor:.6f}"
            )
    lines += [
        f"atoms: {len(trunc.nu)} (direct), {len(trunc.nu_hat)} (transform)",
        f"min gap: {gap}",
        f"q-rank of support: {rank}",
        f"unit-window variation: {window_variation(trunc.nu):.6f} "
        f"(bound {trunc.variation_bound:.6f})",
    ]
    if args.out:
        nu_path = f"{args.out}_nu.json"
        nu_hat_path = f"{args.out}_nu_hat.json"
        _dump_measure(nu_path, trunc.nu, args.digits)
        _dump_measure(nu_hat_path, trunc.nu_hat, args.digits)
        doc["out"] = [nu_path, nu_hat_path]
        lines.append(f"atom dumps: {nu_path}, {nu_hat_path}")
    _emit(doc, lines, args.json)
    return EXIT_OK


def _verify_target(
    args: argparse.Namespace,
) -> tuple[WindowedMeasure, WindowedMeasure, float, float]:
    if args.psf:
        comb = PeriodicLatticeMeasure(spacing=Fraction(1), coeffs=np.ones(1))
        direct = restrict_window(comb, args.window, prec=args.precision)
        return direct, direct, 1.0, 1.0
    if args.M is not None:
        pair = build_pair(args.M)
        return (
            restrict_window(pair.mu, args.window, prec=args.precision),
            restrict_window(pair.mu_hat, args.window, prec=args.precision),
            unit_variation(pair.mu),
            unit_variation(pair.mu_hat),
        )
    trunc = build_nu(args.n_max, args.window, prec=args.precision)
    return trunc.nu, trunc.nu_hat, trunc.variation_bound, trunc.variation_bound


def _cmd_verify(args: argparse.Namespace) -> int:
    try:
        measure, transform, var_m, var_t = _verify_target(args)
    except NuResourceError as exc:
        _emit(
            {"error": str(exc), "estimate": exc.estimate},
            [f"resource guard: {exc}"],
            args.json,
        )
        return EXIT_RESOURCE
    reports = []
    for fn in gaussian_batch(args.seed, args.count):
        reports.append(
            (
                fn,
                pairing_residual(
                    measure,
                    transform,
                    fn,
                    variation_measure=var_m,
                    variation_transform=var_t,
                    prec=args.precision,
                ),
            )
        )
    n_pass = sum(r.passed for _, r in reports)
    n_small = sum(r.verdict == "window_too_small" for _, r in reports)
    n_fail = len(reports) - n_pass - n_small
    doc = {
        "count": len(reports),
        "seed": args.seed,
        "window": [str(b) for b in args.window],
        "pass": n_pass,
        "fail": n_fail,
        "window_too_small": n_small,
        "reports": [
            {
                "center": fn.center,
                "freq": fn.freq,
                "width": fn.width,
                **r.to_dict(),
            }
            for fn, r in reports
        ],
    }
    lines = []
    for i, (fn, r) in enumerate(reports):
        lines.append(
            f"[{i:3d}] width={fn.width:.4f} center={fn.center:+.4f} "
            f"freq={fn.freq:+.4f}  residual={r.residual:.3e} "
            f"tail={r.tail_bound:.3e}  {r.verdict}"
        )
    lines.append(
        f"{n_pass}/{len(reports)} pass, {n_fail} fail, "
        f"{n_small} window too small"
    )
    _emit(doc, lines, args.json)
    if n_small:
        return EXIT_WINDOW
    return EXIT_OK if n_fail == 0 else EXIT_FAIL


def _cmd_export(args: argparse.Namespace) -> int:
    try:
        with open(args.input) as fh:
            doc = json.load(fh)
    except OSError as exc:
        print(f"cannot read {args.input}: {exc.strerror}", file=sys.stderr)
        return EXIT_FAIL
    except json.JSONDecodeError as exc:
        print(f"cannot parse {args.input}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if doc.get("format") != ATOMS_FORMAT:
        print(f"unrecognized input format {doc.get('format')!r}", file=sys.stderr)
        return EXIT_FAIL
    if args.format == "json":
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        rows = ["position_float,class,abs_coeff,arg_coeff"]
        for rec in doc["atoms"]:
            c = complex(rec["coeff_re"], rec["coeff_im"])
            rows.append(
                f"{rec['position_float']},{rec['class']},"
                f"{abs(c)!r},{cmath.phase(c)!r}"
            )
        text = "\n".join(rows) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fourierpairs",
        description="Fourier pairs of atomic measures with central gaps",
    )
    parser.add_argument(
        "--json", action="store_true", help="machine-readable JSON on stdout"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="doubly vanishing signal")
    p_solve.add_argument("--M", type=int, required=True, metavar="INT",
                         help="gap half-width; modulus is 100*M^2")
    p_solve.add_argument("--residual-tol", type=float, default=1e-9)
    p_solve.add_argument("--out", help="write the signal as JSON")
    p_solve.set_defaults(fn=_cmd_solve)

    p_pair = sub.add_parser("pair", help="measure/transform pair atoms")
    p_pair.add_argument("--M", type=int, required=True, metavar="INT")
    p_pair.add_argument("--window", type=_parse_window, required=True,
                        metavar="LO:HI")
    p_pair.add_argument("--out", help="prefix for the two atom dumps")
    p_pair.add_argument("--precision", type=int, default=128, metavar="BITS")
    p_pair.add_argument("--digits", type=int, default=36)
    p_pair.set_defaults(fn=_cmd_pair)

    p_nu = sub.add_parser("nu", help="overlay truncation atoms")
    p_nu.add_argument("--n-max", type=int, required=True, metavar="INT")
    p_nu.add_argument("--window", type=_parse_window, required=True,
                      metavar="LO:HI")
    p_nu.add_argument("--out", help="prefix for the two atom dumps")
    p_nu.add_argument("--precision", type=int, default=128, metavar="BITS")
    p_nu.add_argument("--digits", type=int, default=36)
    p_nu.set_defaults(fn=_cmd_nu)

    p_ver = sub.add_parser("verify", help="seeded Gaussian pairing batch")
    target = p_ver.add_mutually_exclusive_group(required=True)
    target.add_argument("--psf", action="store_true",
                        help="integer comb against itself")
    target.add_argument("--M", type=int, default=None, metavar="INT")
    target.add_argument("--n-max", type=int, default=None, metavar="INT")
    p_ver.add_argument("--window", type=_parse_window, required=True,
                       metavar="LO:HI")
    p_ver.add_argument("--count", type=int, default=20)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--precision", type=int, default=128, metavar="BITS")
    p_ver.set_defaults(fn=_cmd_verify)

    p_exp = sub.add_parser("export", help="convert an atom dump")
    p_exp.add_argument("--input", required=True)
    p_exp.add_argument("--format", choices=("csv", "json"), required=True)
    p_exp.add_argument("--out")
    p_exp.set_defaults(fn=_cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "precision", 128) < 64:
        parser.error("--precision must be at least 64 bits")
    if getattr(args, "M", None) is not None and args.M < 1:
        parser.error("--M must be a positive integer")
    if getattr(args, "n_max", None) is not None and args.n_max < 1:
        parser.error("--n-max must be a positive integer")
    if getattr(args, "count", 1) < 1:
        parser.error("--count must be a positive integer")
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
