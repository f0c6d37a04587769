"""``poscon`` command-line front end.

Exit codes: 0 success, 2 input error, 3 spectral/direct disagreement (the
report is still written), 1 any other analysis failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields, replace
from pathlib import Path

from . import __version__, plot, report, specfile
from .controllability import (
    Tolerances,
    analyze,
    check_target,
    make_system,
    target_horizon,
)
from .errors import (
    NegativeEntry,
    PosconError,
    RankDeficient,
    Reducible,
    SpecFileError,
    SvgUnsupportedDim,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_DISAGREEMENT = 3

INPUT_ERRORS = (SpecFileError, NegativeEntry, Reducible, RankDeficient, SvgUnsupportedDim)

# flag name -> Tolerances field
_TOL_FLAGS = {
    "tol_zero": "zero",
    "tol_eig": "eig",
    "tol_angle": "angle",
    "q_max": "q_max",
    "tol_cluster": "cluster",
    "tol_recur": "recur",
    "tol_lp": "lp",
    "tol_lim": "lim",
    "tol_sim": "sim",
    "tol_rank": "rank",
    "tol_coeff": "coeff",
}


def _tolerances(spec: specfile.SystemSpec, args) -> Tolerances:
    """File options first, command-line flags on top."""
    tol = Tolerances()
    names = {f.name for f in fields(Tolerances)}
    from_file = dict(spec.options.get("tolerances", {}))
    if "q_max" in spec.options:
        from_file["q_max"] = spec.options["q_max"]
    for key, value in from_file.items():
        field_name = _TOL_FLAGS.get(key, key)
        if field_name not in names:
            raise SpecFileError(f"unknown tolerance {key!r}")
        tol = replace(tol, **{field_name: type(getattr(tol, field_name))(value)})
    for flag, field_name in _TOL_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            tol = replace(tol, **{field_name: value})
    return tol


def _load_system(args):
    spec = specfile.load(args.file)
    return spec, make_system(spec.A, spec.b, _tolerances(spec, args))


def _k_max(spec, args):
    return args.k_max if args.k_max is not None else spec.options.get("k_max")


def _summary(rep, out) -> None:
    s = rep.system
    print(f"n = {s.n}, h = {s.h}, rho = {s.rho:.10g}, full rank: {s.full_rank}", file=out)
    eig = ", ".join(f"{z.real:.6g}{z.imag:+.6g}i" if abs(z.imag) > 0 else f"{z.real:.6g}"
                    for z in s.spectral.eigenvalues)
    print(f"spectrum: {eig}", file=out)
    for label, v in (("Conset_f", rep.finite), ("Conset_inf", rep.infinite)):
        if v is None:
            continue
        line = f"{label}: {'polyhedral' if v.polyhedral else 'not polyhedral'} [{v.method}]"
        if v.polyhedral:
            line += f", k_vert = {v.k_vert}"
        if v.failing_condition:
            line += f", failing condition {v.failing_condition}"
        if v.simplicial is not None:
            line += f", simplicial: {v.simplicial}"
        print(line, file=out)
    if rep.special_case is not None:
        print(f"special case: b lies in the Perron cone; {rep.special_case.size} ray(s)",
              file=out)
    for kind, t in zip(rep.target_kinds, rep.targets):
        pt = ", ".join(f"{x:.6g}" for x in t.point)
        bound = " (bounded horizon)" if t.horizon_bounded else ""
        print(f"target {kind} [{pt}]: {t.status} at N = {t.horizon}{bound}", file=out)
    for d in rep.disagreements:
        print(f"DISAGREEMENT: {d}", file=out)


def _finish(rep, command, args) -> int:
    _summary(rep, sys.stdout)
    if args.json:
        Path(args.json).write_text(report.dumps(report.build(rep, command)))
    return EXIT_DISAGREEMENT if rep.status == "disagreement" else EXIT_OK


def cmd_analyze(args) -> int:
    spec, system = _load_system(args)
    rep = analyze(system, _k_max(spec, args))
    return _finish(rep, "analyze", args)


def cmd_check(args) -> int:
    spec, system = _load_system(args)
    rep = analyze(system, _k_max(spec, args))
    user_N = args.horizon if args.horizon is not None else spec.options.get("N")
    N, bounded = target_horizon(rep, user_N)
    for t in spec.targets:
        results = check_target(system, t.vertices, t.kind, N, bounded)
        rep.targets.extend(results)
        rep.target_kinds.extend([t.kind] * len(results))
    return _finish(rep, "check", args)


def cmd_plot(args) -> int:
    spec, system = _load_system(args)
    ks = [int(k) for k in args.k.split(",") if k.strip()]
    if not ks or min(ks) < 1:
        raise SpecFileError("--k needs a comma-separated list of positive integers")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = Path(args.file).stem
    if args.format == "svg":
        text = plot.to_svg(system, ks)
    else:
        text = plot.to_csv(system, ks)
    target = out / f"{stem}.{args.format}"
    target.write_text(text)
    print(target)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="poscon",
        description="Controllable subsets of single-input linear positive systems.",
    )
    p.add_argument("--version", action="version", version=f"poscon {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="system description (JSON, schema 1)")
    common.add_argument("--k-max", type=int, default=None,
                        help="largest k searched by direct iteration (default max(20, 5n))")
    tol = common.add_argument_group("tolerances")
    for flag, field_name in _TOL_FLAGS.items():
        default = getattr(Tolerances(), field_name)
        kind = int if isinstance(default, int) else float
        tol.add_argument("--" + flag.replace("_", "-"), dest=flag, type=kind, default=None,
                         help=f"default {default}")

    a = sub.add_parser("analyze", parents=[common], help="polyhedrality verdicts")
    a.add_argument("--json", help="write the JSON report here")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("check", parents=[common], help="controllability of declared targets")
    c.add_argument("--horizon", type=int, default=None,
                   help="horizon N when Conset_f is not polyhedral (default 10n)")
    c.add_argument("--json", help="write the JSON report here")
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("plot", parents=[common], help="simplex projection of conmat_k")
    g.add_argument("--k", default="3,8,19", help="comma-separated k values")
    g.add_argument("--format", choices=("csv", "svg"), default="csv")
    g.add_argument("--out", default=".", help="output directory")
    g.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PosconError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as exc:
        print(f"error [cli.IOError]: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
