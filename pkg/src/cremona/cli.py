"""Command line interface: ``cremona analyze | iterate | screen | conjugate | verify``.

Exit codes: 0 success, 1 violation, 2 unresolved-orbit (or budget) caveat,
64 usage error, 65 input parse error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from . import errors
from .analysis import DEFAULT_KMAX, analyze
from .mapcore import DEFAULT_BUDGET, conjugate, iterate_degrees
from .orbits import DEFAULT_HORIZON
from .parsing import MapFile, dump_map_file, fixture_names, load_fixture, load_map_file, map_to_file, read_hints_file
from .recurrence import DynamicsData, enumerate_candidates, stratum_dimension

EXIT_OK, EXIT_VIOLATION, EXIT_CAVEAT, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 64, 65

HINTS = {
    errors.InfinitelyNearSuspected: "conjugate the map with `cremona conjugate` to one with ordinary F-points",
    errors.CommonFactor: "cancel the common factor of the components",
    errors.NotBirational: "check that the inverse triple really inverts the forward one",
    errors.BudgetExceeded: "raise --budget or lower --kmax",
    errors.UnassignedFactor: "supply principal curves with --hints",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


class InputError(Exception):
    pass


def _load(source: str, params: list[str] | None = None) -> MapFile:
    """A map file path, or the name of a bundled fixture."""
    try:
        if Path(source).exists():
            mf = load_map_file(source)
        elif source in fixture_names():
            mf = load_fixture(source)
        else:
            raise InputError(f"no such map file or bundled fixture: {source}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: invalid JSON ({exc})") from None
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from None
    for item in params or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise InputError(f"--param expects NAME=VALUE, got {item!r}")
        mf.parameters[key.strip()] = val.strip()
    return mf


def _emit_json(doc, out) -> None:
    json.dump(doc, out, indent=2)
    out.write("\n")


# --------------------------------------------------------------------------


def cmd_analyze(args) -> int:
    mf = _load(args.map, args.param)
    hints = read_hints_file(args.hints) if args.hints else None
    rep = analyze(mf, args.horizon, args.budget, args.kmax, args.diagnostics, hints)
    if args.json:
        _emit_json(rep.to_dict(), sys.stdout)
    else:
        print(rep.summary())
        if args.diagnostics and rep.forward.diagnostics:
            for a, g in sorted(rep.forward.diagnostics.items()):
                print(f"gamma_{a}(k): {g}")
    return rep.exit_code


def cmd_iterate(args) -> int:
    mf = _load(args.map, args.param)
    m = mf.birat_map()
    code = EXIT_OK
    try:
        seq = iterate_degrees(m, args.kmax, args.budget, args.method)
    except errors.BudgetExceeded as exc:
        seq = exc.sequence
        print(
            f"budget {exc.budget} exceeded (raw degree {exc.raw_degree}); last good k = {len(seq) - 1}",
            file=sys.stderr,
        )
        code = EXIT_CAVEAT
    rows = [(k, d, math.log(d), meth) for k, (d, meth) in enumerate(zip(seq.values, seq.methods))]
    if args.json:
        _emit_json(
            {"name": mf.name, "kmax": args.kmax, "budget": args.budget, "rows": [{"k": k, "d": d, "log_d": ld, "method": me} for k, d, ld, me in rows]},
            sys.stdout,
        )
    else:
        w = csv.writer(sys.stdout, lineterminator="\r\n")
        w.writerow(["k", "d", "log_d", "method"])
        for k, d, ld, me in rows:
            w.writerow([k, d, repr(ld), me])
    return code


def cmd_screen(args) -> int:
    i_data = None
    if args.i_data:
        with open(args.i_data, encoding="utf-8") as fh:
            try:
                i_data = DynamicsData.from_dict(json.load(fh))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise InputError(f"{args.i_data}: {exc}") from None
    pairing = None
    if args.pairing:
        try:
            pairing = [int(x) for x in args.pairing.split(",")]
        except ValueError:
            raise InputError(f"--pairing expects comma-separated labels, got {args.pairing!r}") from None
    try:
        rows = enumerate_candidates(args.n, args.sigma1, args.m_max, pairing, i_data)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    dim = stratum_dimension(args.sigma1)
    if args.csv:
        w = csv.writer(sys.stdout, lineterminator="\r\n")
        w.writerow(["m", "det", "reduced", "class", "degree", "entropy"])
        for c in rows:
            g = c.growth
            w.writerow([" ".join(map(str, c.ms)), str(c.char_poly), str(c.reduced_poly), g.cls, "" if g.degree is None else g.degree, "" if g.entropy is None else repr(g.entropy)])
    else:
        _emit_json(
            {
                "n": args.n,
                "sigma1": args.sigma1,
                "m_max": args.m_max,
                "note": f"each row is a stratum of codimension {2 * args.sigma1}"
                + (f" (dimension {dim} among quadratic maps)" if args.n == 2 else ""),
                "candidates": [c.to_dict() for c in rows],
            },
            sys.stdout,
        )
    return EXIT_OK


def cmd_conjugate(args) -> int:
    mf = _load(args.map, args.param)
    vf = _load(args.v)
    out = conjugate(mf.birat_map(), vf.birat_map())
    name = args.name or (f"{mf.name}_conj" if mf.name else "")
    text = dump_map_file(map_to_file(out, name))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    """Re-run every exact check; optionally compare against a stored report."""
    mf = _load(args.map, args.param)
    hints = read_hints_file(args.hints) if args.hints else None
    rep = analyze(mf, args.horizon, args.budget, args.kmax, False, hints)
    lines = [(c.passed, c.name) for c in rep.checks]
    if args.report:
        with open(args.report, encoding="utf-8") as fh:
            old = json.load(fh)
        new = rep.to_dict()
        for key, get in (
            ("characteristic", lambda d: d["characteristic"]),
            ("char matrix", lambda d: d["char_matrix"]),
            ("pairs", lambda d: d["decomposition"]["pairs"]),
            ("det(Lambda)", lambda d: d["recurrence"]["secular"]["coefficients"]),
            ("minimal recurrence", lambda d: d["recurrence"]["minimal"]["coefficients"]),
            ("growth class", lambda d: d["growth"]["class"]),
        ):
            try:
                lines.append((get(old) == get(new), f"report {key} reproduced"))
            except (KeyError, TypeError):
                lines.append((False, f"report {key} missing"))
    for ok, name in lines:
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    for c in rep.caveats:
        print(f"CAVEAT {c}")
    if not all(ok for ok, _ in lines):
        return EXIT_VIOLATION
    return EXIT_CAVEAT if rep.caveats else EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cremona", description="Degree growth of birational maps of the projective plane.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def map_args(sp):
        sp.add_argument("map", help="map file (JSON) or bundled fixture name")
        sp.add_argument("--param", action="append", metavar="NAME=VALUE", help="override a parameter value")

    def pipeline_args(sp):
        sp.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        sp.add_argument("--kmax", type=int, default=DEFAULT_KMAX)
        sp.add_argument("--hints", metavar="FILE", help="JSON with points, inverse_points, curves")

    sp = sub.add_parser("analyze", help="full pipeline report")
    map_args(sp)
    pipeline_args(sp)
    sp.add_argument("--json", action="store_true", help="JSON report instead of text")
    sp.add_argument("--diagnostics", action="store_true", help="gamma(k) of the unpaired F-points")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("iterate", help="degree oracle table")
    map_args(sp)
    sp.add_argument("--kmax", type=int, default=10)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--method", choices=("auto", "exact", "line"), default="auto")
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--csv", action="store_true", help="CSV output (default)")
    fmt.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_iterate)

    sp = sub.add_parser("screen", help="catalogue of secular polynomials over m-sets")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--sigma1", type=int, default=3)
    sp.add_argument("--m-max", type=int, default=5)
    sp.add_argument("--pairing", help="beta labels for alpha = 1, 2, ..., e.g. 1,3,2")
    sp.add_argument("--i-data", metavar="FILE", help="custom n, i_fwd, i_inv, i_cross")
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--csv", action="store_true")
    sp.set_defaults(func=cmd_screen)

    sp = sub.add_parser("conjugate", help="V^-1 o map o V, serialised canonically")
    map_args(sp)
    sp.add_argument("v", help="map file of the conjugating map V")
    sp.add_argument("--out", help="write here instead of stdout")
    sp.add_argument("--name", default="")
    sp.set_defaults(func=cmd_conjugate)

    sp = sub.add_parser("verify", help="re-run all exact checks")
    map_args(sp)
    pipeline_args(sp)
    sp.add_argument("--report", help="stored JSON report to compare with")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, errors.ExpressionSyntaxError, errors.NonHomogeneous, errors.UnboundParameter, errors.DegreeMismatch, ValueError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except errors.CremonaError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        hint = next((h for cls, h in HINTS.items() if isinstance(exc, cls)), None)
        if hint:
            print(f"hint: {hint}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
