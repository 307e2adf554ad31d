"""Command line: ``hocc check FILE``, ``hocc reduce FILE TERM``, ``hocc print FILE``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .certificate import certificate_to_json
from .closure import CheckerConfig, auto_search, call_graph_config, check_system, verify_certificate
from .errors import FuelExhausted, HoccError, ParseError
from .orderings import Family, OrderingConfig, Precedence
from .parser import parse_problem, parse_term, print_problem
from .patterns import complete
from .reduction import normalize
from .system import RewriteSystem

YES, MAYBE, ERROR = 0, 1, 2


def config_from(system: RewriteSystem, interp: str | None = None, order: str | None = None,
                **kw) -> CheckerConfig:
    """Checker configuration from the file's pragmas, overridden by flags."""
    h = system.hints
    if h.prec_gt or h.prec_eq:
        prec = Precedence(h.prec_gt, h.prec_eq)
    else:
        prec = call_graph_config(system)
    family = Family(order or h.order or "subterm-stat")
    ordering = OrderingConfig(family, prec, dict(h.filters), dict(h.statuses))
    return CheckerConfig(interpretation=interp or h.interp or "basic", ordering=ordering, **kw)


def _load(path: str) -> RewriteSystem:
    return parse_problem(Path(path).read_text(encoding="utf-8"))


def cmd_check(args) -> int:
    system = _load(args.file)
    if args.complete:
        system = system.with_rules(complete(system.rules))
    extra = dict(max_depth=args.depth, red_fuel=args.red_fuel,
                 assume_commutation=args.assume_commutation)
    cfg = config_from(system, args.interp, args.order, **extra)
    if args.auto:
        found, report = auto_search(system, seed=cfg, **extra)
        cfg = found or cfg
    else:
        report = check_system(system, cfg)
    verdict = report.verdict
    if verdict == "YES" and not verify_certificate(system, cfg, report.certificate):
        verdict = "MAYBE"
    if args.trace:
        print(f"# config: {cfg.describe(system)}")
        if system.mode == "modulo":
            from .equational import admissibility
            for line in admissibility(system).lines():
                print(f"# {line}")
    for line in report.lines()[:-1]:
        print(line)
    if args.trace:
        for ob in report.obligations:
            if ob.derivation is not None:
                print(f"# derivation of {ob.id}")
                for line in ob.derivation.pretty(1):
                    print("#" + line)
    if args.cert and verdict == "YES":
        Path(args.cert).write_text(certificate_to_json(report.certificate), encoding="utf-8")
    print(verdict)
    return YES if verdict == "YES" else MAYBE


def cmd_reduce(args) -> int:
    system = _load(args.file)
    variables = {n: system.var(n) for n, _ in system.variables}
    term = parse_term(args.term, system.signature, variables, system.sorts)
    trace: list = []
    try:
        nf = normalize(system.rules, term, args.fuel, args.strategy, trace)
    except FuelExhausted as e:
        for step in trace:
            print(step)
        print(f"FUEL EXHAUSTED after {e.steps} steps")
        return MAYBE
    if args.trace:
        for step in trace:
            print(step)
    print(nf)
    return YES


def cmd_print(args) -> int:
    sys.stdout.write(print_problem(_load(args.file)))
    return YES


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hocc", description="Termination checking with the computability closure.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="check termination of a problem file")
    c.add_argument("file")
    c.add_argument("--interp", choices=["basic", "acc"])
    c.add_argument("--order", choices=[f.value for f in Family])
    c.add_argument("--auto", action="store_true", help="search for a configuration")
    c.add_argument("--complete", action="store_true", help="add the β- and η-completion rules first")
    c.add_argument("--depth", type=int, default=64, help="maximal search depth")
    c.add_argument("--red-fuel", type=int, default=3, help="reduction steps explored from the arguments")
    c.add_argument("--cert", metavar="PATH", help="write the certificate as JSON")
    c.add_argument("--trace", action="store_true", help="print configuration and derivations")
    c.add_argument("--assume-commutation", action="store_true",
                   help="take commutation of =E with β for granted")
    c.set_defaults(run=cmd_check)

    r = sub.add_parser("reduce", help="normalize a term")
    r.add_argument("file")
    r.add_argument("term")
    r.add_argument("--fuel", type=int, default=10_000)
    r.add_argument("--strategy", choices=["leftmost", "full"], default="leftmost")
    r.add_argument("--trace", action="store_true")
    r.set_defaults(run=cmd_reduce)

    p = sub.add_parser("print", help="parse and pretty-print a problem file")
    p.add_argument("file")
    p.set_defaults(run=cmd_print)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except ParseError as e:
        print(f"error: {e.kind}: {e}", file=sys.stderr)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
    except HoccError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
    return ERROR


if __name__ == "__main__":
    sys.exit(main())
