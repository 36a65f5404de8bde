"""Command-line front-end.

``cubicsod run``      run a verification suite and emit a JSON report
``cubicsod explain``  show the claim, inputs and evidence of one check
``cubicsod replay``   replay a mutation script and print the trace as JSON lines
``cubicsod mukai``    bounded Mukai-pair search (also installed as ``mukai``)
``cubicsod pflab``    finite-field Pfaffian tools (also installed as ``pflab``)
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .checks import SUITES, Config, ConfigError, UnknownCheck, explain, report_exit_code, report_json, run_suite

__all__ = ["main", "mukai_main", "pflab_main", "replay_main", "build_parser"]


def _emit(text: str, out: str | None):
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# run / explain


def _config(args) -> Config:
    return Config(
        box=args.box,
        q=args.q,
        ext=args.ext,
        seed=args.seed,
        workers=args.workers,
        allow_undetermined=args.allow_undetermined,
    )


def _add_run_flags(p):
    p.add_argument("--suite", default="all", choices=sorted(SUITES), help="suite to run (default: all)")
    p.add_argument("--box", type=int, default=25, help="Mukai search box N (default 25)")
    p.add_argument("--q", type=int, default=7, help="prime field size for pflab checks (default 7)")
    p.add_argument("--ext", type=int, default=1, help="extension degree for two-field counts (1 or 2)")
    p.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    p.add_argument("--workers", type=int, default=1, help="worker processes for the searches")
    p.add_argument("--json", dest="json_out", metavar="OUT", help="write the JSON report to OUT")
    p.add_argument("--allow-undetermined", action="store_true", help="do not count undetermined checks as failures")
    p.add_argument("--timing", action="store_true", help="include wall time in the report (breaks byte-identical output)")


def _cmd_run(args) -> int:
    try:
        report = run_suite(args.suite, _config(args), timing=args.timing)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    for c in report["checks"]:
        print(f"{c['status']:>12}  {c['id']}", file=sys.stderr)
    text = report_json(report)
    if args.json_out:
        Path(args.json_out).write_text(text)
    else:
        sys.stdout.write(text)
    return report_exit_code(report, args.allow_undetermined)


def _cmd_explain(args) -> int:
    try:
        sys.stdout.write(explain(args.check_id))
    except UnknownCheck as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    return 0


# --------------------------------------------------------------------------
# replay


def _add_replay_flags(p):
    p.add_argument("script", help="script JSON path, or 'plane' / 'singular' for the shipped scripts")
    p.add_argument("--out", help="write the JSON-lines trace here instead of stdout")
    p.add_argument("--no-shadows", action="store_true", help="skip the Hilbert-shadow checks")


def _cmd_replay(args) -> int:
    from .sodengine import CASES, builtin_script, load_script, replay_script, trace_lines

    source = builtin_script(args.script) if args.script in CASES else Path(args.script)
    try:
        script = load_script(source)
    except (OSError, KeyError, ValueError) as exc:
        print(f"cannot load script: {exc}", file=sys.stderr)
        return 2
    result = replay_script(script, check_shadows=not args.no_shadows)
    _emit(trace_lines(result), args.out)
    print(f"verdict: {result.verdict}", file=sys.stderr)
    return 0 if result.match else 1


# --------------------------------------------------------------------------
# mukai


def _add_mukai_flags(p):
    sub = p.add_subparsers(dest="mukai_cmd", required=True)
    s = sub.add_parser("search", help="look for v1, v2 with chi(v1, v2) = 1 and chi(v2, v2) = 0")
    s.add_argument("--bh", type=Fraction, default=Fraction(1, 2), help="fractional Bh (default 1/2)")
    s.add_argument("--bsq", type=Fraction, default=Fraction(1, 2), help="fractional B^2 (default 1/2)")
    s.add_argument("--box", type=int, default=25, help="box N: entries in [-N, N]")
    s.add_argument("--untwisted", action="store_true", help="use the untwisted Mukai lattice")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--json", dest="json_out", metavar="OUT")


def _cmd_mukai(args) -> int:
    from .mukai import BData, gram_twisted, gram_untwisted, search_report

    if args.box < 0:
        print("configuration error: --box must be nonnegative", file=sys.stderr)
        return 2
    try:
        lattice = gram_untwisted() if args.untwisted else gram_twisted(BData(args.bh, args.bsq))
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    report = search_report(lattice, args.box, workers=args.workers)
    _emit(json.dumps(report, sort_keys=True, indent=2) + "\n", args.json_out)
    return 0


# --------------------------------------------------------------------------
# pflab


def _add_pflab_flags(p):
    sub = p.add_subparsers(dest="pflab_cmd", required=True)
    g = sub.add_parser("gen", help="seeded random skew basis, quadric and cubic")
    g.add_argument("--q", type=int, default=7)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    x = sub.add_parser("xv-count", help="count points of X_V over F_q and F_q^ext")
    x.add_argument("--q", type=int, default=7)
    x.add_argument("--ext", type=int, default=1)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--input", help="instance from 'pflab gen' (default: generate from --q/--seed)")
    x.add_argument("--workers", type=int, default=1)
    x.add_argument("--out")
    s = sub.add_parser("sing", help="singular points of a cubic form")
    s.add_argument("--input", required=True, help="form JSON, or an instance from 'pflab gen' (uses z0 F2 + F3)")
    s.add_argument("--out")
    c = sub.add_parser("s-count", help="points of {F2 = F3 = 0} in P^4 with a smoothness report")
    c.add_argument("--input", help="instance from 'pflab gen'")
    c.add_argument("--q", type=int, default=7)
    c.add_argument("--ext", type=int, default=1)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out")


def _cmd_pflab(args) -> int:
    from .pflab import EnumerationBound, generate_instance, load_form, load_instance, s_count_report, s_points, singular_points, xv_count_report

    try:
        if args.pflab_cmd == "gen":
            doc = generate_instance(args.q, args.seed)
        elif args.pflab_cmd in ("xv-count", "s-count"):
            if args.ext not in (1, 2):
                raise ValueError("--ext must be 1 or 2")
            src = args.input or generate_instance(args.q, args.seed)
            inst = load_instance(src)
            if args.pflab_cmd == "xv-count":
                doc = xv_count_report(inst["basis"], ext=args.ext, workers=args.workers).to_json()
            else:
                _, smooth = s_points(inst["F2"], inst["F3"], report=True)
                doc = s_count_report(inst["F2"], inst["F3"], ext=args.ext).to_json()
                doc["smoothness"] = smooth.to_json()
            doc["seed"] = inst["seed"]
        else:
            form = load_form(args.input)
            pts = singular_points(form)
            doc = {"field": form.field.spec.to_json(), "singular_points": [list(p) for p in pts], "count": len(pts)}
    except (EnumerationBound, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    return 0


# --------------------------------------------------------------------------
# entry points


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cubicsod", description="Exact verification of cubic-fourfold decompositions.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)
    _add_run_flags(sub.add_parser("run", help="run a verification suite"))
    e = sub.add_parser("explain", help="explain one check")
    e.add_argument("check_id")
    _add_replay_flags(sub.add_parser("replay", help="replay a mutation script"))
    _add_mukai_flags(sub.add_parser("mukai", help="Mukai lattice searches"))
    _add_pflab_flags(sub.add_parser("pflab", help="Pfaffian geometry over finite fields"))
    return p


_DISPATCH = {"run": _cmd_run, "explain": _cmd_explain, "replay": _cmd_replay, "mukai": _cmd_mukai, "pflab": _cmd_pflab}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return _DISPATCH[args.cmd](args)


def _standalone(prog, adder, handler, argv):
    p = argparse.ArgumentParser(prog=prog)
    adder(p)
    return handler(p.parse_args(argv))


def mukai_main(argv=None) -> int:
    return _standalone("mukai", _add_mukai_flags, _cmd_mukai, argv)


def pflab_main(argv=None) -> int:
    return _standalone("pflab", _add_pflab_flags, _cmd_pflab, argv)


def replay_main(argv=None) -> int:
    return _standalone("sodreplay", _add_replay_flags, _cmd_replay, argv)


if __name__ == "__main__":
    sys.exit(main())
