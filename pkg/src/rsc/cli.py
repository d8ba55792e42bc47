"""Command-line interface.

Subcommands: sample, classify, phase-slice, betti, degrees, spectra,
cycles, experiment.  Exit codes: 0 on success, 1 when an acceptance-style
check fails, 2 on configuration or usage errors (argparse's own
convention).  RSC_SEED provides the default seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import cycles as cycles_mod
from . import degrees as degrees_mod
from . import experiments, model, phase, sampler, spectra
from .homology import betti, morse_check


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(","))


def _parse_probs(text: str) -> tuple:
    return tuple(Fraction(x) for x in text.split(","))


def _default_seed() -> int:
    return int(os.environ.get("RSC_SEED", "0"))


def _load_complex(path: str) -> model.SimplicialComplex:
    text = Path(path).read_text()
    if path.endswith(".json"):
        return model.from_json(text)
    return model.from_text(text)


def _write_complex(Y: model.SimplicialComplex, path: str | None, fmt: str) -> None:
    out = model.to_json(Y) + "\n" if fmt == "json" else model.to_text(Y)
    if path is None or path == "-":
        sys.stdout.write(out)
    else:
        Path(path).write_text(out)


def _spec_from_args(args) -> sampler.SampleSpec:
    if (args.alpha is None) == (args.p is None):
        raise SystemExit("exactly one of --alpha and --p is required")
    return sampler.SampleSpec(
        n=args.n,
        r=args.r,
        p=args.p,
        alpha=args.alpha,
        seed=args.seed,
        strategy=args.strategy,
    )


def _cmd_sample(args) -> int:
    Y = sampler.sample(_spec_from_args(args))
    fmt = args.format or ("json" if (args.out or "").endswith(".json") else "text")
    _write_complex(Y, args.out, fmt)
    return 0


def _cmd_classify(args) -> int:
    report = phase.phase_report(args.alpha, args.r, args.tolerance)
    json.dump(report.to_dict(), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _cmd_phase_slice(args) -> int:
    free = tuple(int(x) for x in args.free.split(","))
    fixed = {}
    for item in args.fixed or ():
        key, _, val = item.partition("=")
        fixed[int(key)] = float(val)
    rows = phase.phase_slice(
        (free[0], free[1]),
        fixed,
        args.r,
        ((args.min, args.max), (args.min, args.max)),
        args.grid,
        args.tolerance,
    )
    lines = [f"alpha_{free[0]},alpha_{free[1]},domain"]
    lines += [f"{a},{b},{label}" for a, b, label in rows]
    out = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return 0


def _cmd_betti(args) -> int:
    Y = _load_complex(args.input)
    bv = betti(Y, method=args.method)
    report = morse_check(Y, bv)
    json.dump(
        {
            "f_vector": list(Y.f_vector()),
            "betti": list(bv.b),
            "reduced": list(bv.reduced),
            "morse_ok": report.ok,
        },
        sys.stdout,
        indent=2,
        sort_keys=True,
    )
    sys.stdout.write("\n")
    return 0


def _cmd_degrees(args) -> int:
    if args.input:
        Y = _load_complex(args.input)
    else:
        Y = sampler.sample(_spec_from_args(args))
    hist = degrees_mod.degree_histogram(Y, args.d)
    summary: dict = {"d": args.d, "f_d": hist.total}
    lines = ["s,count,expected"]
    alpha = args.alpha
    for s in sorted(hist.counts):
        expected = (
            degrees_mod.expected_fds(Y.n, args.d, s, alpha)
            if alpha is not None and args.d + 1 <= len(alpha) - 1
            else ""
        )
        lines.append(f"{s},{hist.counts[s]},{expected}")
    if alpha is not None and args.d + 1 <= len(alpha) - 1:
        rep = degrees_mod.concentration_report(Y, args.d, args.delta, alpha)
        summary["mu"] = rep.mu
        summary["mu_prime"] = rep.mu_prime
        summary["fraction_out_of_band"] = rep.fraction_out
    iso = degrees_mod.isolated_fraction(Y, args.d)
    summary["isolated_fraction"] = iso
    out = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    json.dump(summary, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _cmd_spectra(args) -> int:
    Y = _load_complex(args.input)
    lines = ["simplex,link_vertices,connected,kappa,pass"]
    report = spectra.garland_check(Y, args.level)
    for row in report.rows:
        kappa = "" if row.kappa is None else row.kappa
        lines.append(
            f"{' '.join(map(str, row.simplex))},{row.link_vertices},"
            f"{int(row.connected)},{kappa},{int(row.passed)}"
        )
    out = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    json.dump(
        {"level": args.level, "threshold": report.threshold, "all_pass": report.all_pass},
        sys.stdout,
        indent=2,
        sort_keys=True,
    )
    sys.stdout.write("\n")
    return 0


def _cmd_cycles(args) -> int:
    if args.input:
        Y = _load_complex(args.input)
    else:
        Y = sampler.sample(_spec_from_args(args))
    supports = cycles_mod.minimal_cycle_support(Y, args.k)
    payload: dict = {
        "k": args.k,
        "supports": [
            {"faces": [list(f) for f in faces], "vertices": nverts}
            for faces, nverts in supports
        ],
    }
    if args.alpha is not None:
        a = phase.alpha_star(args.alpha)
        try:
            payload["cycle_size_bound"] = cycles_mod.cycle_size_bound(args.k, a)
        except ValueError as exc:
            payload["cycle_size_bound_error"] = str(exc)
        if args.k >= 2:
            try:
                payload["sphere_size_bound"] = cycles_mod.sphere_size_bound(args.k, a)
            except ValueError as exc:
                payload["sphere_size_bound_error"] = str(exc)
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _cmd_experiment(args) -> int:
    try:
        config = experiments.ExperimentConfig.from_toml(args.config)
        if args.out_dir:
            config = experiments.ExperimentConfig(
                **{**config.__dict__, "out_dir": args.out_dir}
            )
        result = experiments.run(config)
    except experiments.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    print(f"{result.kind}: {'PASS' if result.passed else 'FAIL'}")
    print(f"rows: {result.rows_path}")
    print(f"summary: {result.summary_path}")
    return 0 if result.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_sample_args(p, require_model=True):
        p.add_argument("--n", type=int, required=require_model)
        p.add_argument("--r", type=int, required=require_model)
        p.add_argument("--alpha", type=_parse_floats, default=None,
                       help="comma-separated exponents; p_i = n^-alpha_i")
        p.add_argument("--p", type=_parse_probs, default=None,
                       help="comma-separated probabilities (rationals ok)")
        p.add_argument("--seed", type=int, default=_default_seed())
        p.add_argument("--strategy", choices=("auto", "keyed", "skip"), default="auto")

    p = sub.add_parser("sample", help="draw one complex")
    add_sample_args(p)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "text"), default=None)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("classify", help="phase report of an exponent vector")
    p.add_argument("--alpha", type=_parse_floats, required=True)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--tolerance", type=float, default=phase.DEFAULT_TOLERANCE)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("phase-slice", help="classify a grid in a 2-plane")
    p.add_argument("--free", required=True, help="two coordinate indices, e.g. 1,2")
    p.add_argument("--fixed", nargs="*", default=(), help="index=value pairs")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--min", type=float, default=0.0)
    p.add_argument("--max", type=float, default=1.5)
    p.add_argument("--grid", type=int, default=41)
    p.add_argument("--tolerance", type=float, default=phase.DEFAULT_TOLERANCE)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_phase_slice)

    p = sub.add_parser("betti", help="Betti numbers of a stored complex")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=("auto", "modp", "exact"), default="auto")
    p.set_defaults(func=_cmd_betti)

    p = sub.add_parser("degrees", help="degree histogram and band summary")
    p.add_argument("--input", default=None)
    add_sample_args(p, require_model=False)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.3)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_degrees)

    p = sub.add_parser("spectra", help="per-simplex link gap report")
    p.add_argument("--input", required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_spectra)

    p = sub.add_parser("cycles", help="minimal cycle supports and size bounds")
    p.add_argument("--input", default=None)
    add_sample_args(p, require_model=False)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_cycles)

    p = sub.add_parser("experiment", help="run a TOML-configured experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (model.InvalidComplexError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
