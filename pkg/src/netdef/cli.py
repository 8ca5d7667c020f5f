"""Command-line front end: ``netdef solve|evaluate|generate|compare``.

Results go to stdout, diagnostics to stderr. Exit codes: 0 success,
1 parse/validation/parameter error, 2 model mismatch, 3 size limit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from netdef import instances, solvers
from netdef.errors import (
    InvalidParams,
    ModelMismatch,
    NetdefError,
    ParseError,
    SizeLimit,
    UnknownNode,
)
from netdef.model import (
    defending_power,
    defending_result,
    network_warnings,
    validate_network,
    validate_strategy,
)

log = logging.getLogger("netdef")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_MISMATCH = 2
EXIT_SIZE = 3

ALGORITHM_NAMES = tuple(solvers.ALGORITHMS)
GENERATOR_KINDS = ("integrality-gap", "greedy-hard-isolated", "greedy-hard-single", "dnf", "random")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, ModelMismatch):
        return EXIT_MISMATCH
    if isinstance(exc, SizeLimit):
        return EXIT_SIZE
    return EXIT_INPUT


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from None


def load_instance(path: str):
    try:
        net = instances.parse_instance(_read(path))
    except ParseError as exc:
        raise CliError(f"{path}: {exc}") from None
    problems = validate_network(net)
    if problems:
        raise CliError(f"{path}: invalid instance:\n  " + "\n  ".join(problems))
    for warning in network_warnings(net):
        log.warning("%s: %s", path, warning)
    return net


def _run(name: str, net, max_crucial: int):
    fn = solvers.ALGORITHMS[name]
    if name == "exact":
        return fn(net, max_crucial=max_crucial)
    return fn(net)


def _report_dict(report) -> dict:
    return {
        "algorithm": report.algorithm,
        "alpha": report.alpha,
        "evaluated_result": report.evaluated_result,
        "budget_used": report.budget_used,
        "notes": report.notes,
    }


def cmd_solve(args) -> int:
    net = load_instance(args.instance)
    try:
        report = _run(args.algorithm, net, args.max_crucial)
    except (ModelMismatch, SizeLimit) as exc:
        raise CliError(str(exc), _exit_code(exc)) from None
    if args.output:
        _write(args.output, instances.serialize_strategy(report.strategy))
    if args.json:
        doc = _report_dict(report)
        doc["allocation"] = dict(report.strategy.allocation)
        print(json.dumps(doc, indent=2))
    else:
        print(f"algorithm         {report.algorithm}")
        print(f"alpha             {report.alpha!r}")
        print(f"evaluated result  {report.evaluated_result!r}")
        print(f"budget used       {report.budget_used!r} of {net.resource!r}")
        if report.notes:
            print(f"notes             {report.notes}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    net = load_instance(args.instance)
    try:
        strategy = instances.parse_strategy(_read(args.strategy))
    except ParseError as exc:
        raise CliError(f"{args.strategy}: {exc}") from None
    problems = validate_strategy(net, strategy)
    if problems:
        raise CliError(f"{args.strategy}: invalid strategy:\n  " + "\n  ".join(problems))
    try:
        power = defending_power(net, strategy)
        attack = defending_result(net, strategy)
    except UnknownNode as exc:
        raise CliError(str(exc)) from None
    if args.json:
        print(json.dumps({"power": dict(power.power), "gains": dict(attack.gains),
                          "result": attack.result, "argmax": attack.argmax}, indent=2))
        return EXIT_OK
    width = max([len("node")] + [len(u) for u in net.ids])
    print(f"{'node':<{width}}  {'power':>12}  {'gain':>12}")
    for u in net.ids:
        print(f"{u:<{width}}  {power.power[u]:>12.6g}  {attack.gains[u]:>12.6g}")
    print(f"result {attack.result!r} (attack {attack.argmax})")
    return EXIT_OK


def cmd_generate(args) -> int:
    kind = args.kind
    try:
        if kind == "integrality-gap":
            net = instances.gen_integrality_gap()
        elif kind == "greedy-hard-isolated":
            net = instances.gen_greedy_hard("isolated")
        elif kind == "greedy-hard-single":
            net = instances.gen_greedy_hard("single_threshold")
        elif kind == "dnf":
            if not args.formula or args.t is None:
                raise CliError("--kind dnf needs --formula and --t")
            try:
                formula = instances.parse_formula(_read(args.formula))
            except ParseError as exc:
                raise CliError(f"{args.formula}: {exc}") from None
            net = instances.gen_dnf_reduction(formula, args.t)
        else:
            if args.seed is None or args.n is None or args.m is None:
                raise CliError("--kind random needs --seed, --n and --m")
            net = instances.gen_random(args.seed, args.n, args.m,
                                       isolated=args.isolated,
                                       single_threshold=args.single_threshold)
    except InvalidParams as exc:
        raise CliError(str(exc)) from None
    _write(args.output, instances.serialize_instance(net))
    print(f"wrote {args.output}: {net.n} nodes, {net.m} edges, resource {net.resource!r}")
    return EXIT_OK


def _parse_csv(text: str, what: str) -> list[str]:
    items = [x.strip() for x in text.split(",") if x.strip()]
    if not items:
        raise CliError(f"empty {what} list")
    return items


def cmd_compare(args) -> int:
    names = _parse_csv(args.algorithms, "algorithm")
    unknown = [a for a in names if a not in solvers.ALGORITHMS]
    if unknown:
        raise CliError(f"unknown algorithm(s): {', '.join(unknown)}; "
                       f"choose from {', '.join(ALGORITHM_NAMES)}")
    try:
        scales = [float(x) for x in _parse_csv(args.budget_scale, "budget-scale")]
    except ValueError:
        raise CliError(f"bad --budget-scale {args.budget_scale!r}") from None
    if any(s < 0 for s in scales):
        raise CliError("budget scales must be nonnegative")
    net = load_instance(args.instance)

    rows = []
    code = EXIT_OK
    for name in names:
        for scale in scales:
            scaled = net.with_resource(net.resource * scale)
            row = {"algorithm": name, "scale": scale, "resource": scaled.resource}
            try:
                report = _run(name, scaled, args.max_crucial)
            except NetdefError as exc:
                row["error"] = f"{type(exc).__name__}: {exc}"
                log.warning("skipped %s at scale %g: %s", name, scale, exc)
                code = max(code, _exit_code(exc))
            else:
                row.update(alpha=report.alpha, evaluated_result=report.evaluated_result,
                           budget_used=report.budget_used)
            rows.append(row)

    if args.json:
        print(json.dumps({"instance": args.instance, "rows": rows}, indent=2))
        return code
    header = ("algorithm", "scale", "resource", "alpha", "result", "budget used")
    table = [header]
    for row in rows:
        if "error" in row:
            tail = ("-", "-", row["error"].split(":")[0])
        else:
            tail = (f"{row['alpha']:.6g}", f"{row['evaluated_result']:.6g}",
                    f"{row['budget_used']:.6g}")
        table.append((row["algorithm"], f"{row['scale']:g}", f"{row['resource']:.6g}") + tail)
    widths = [max(len(r[k]) for r in table) for k in range(len(header))]
    for r in table:
        print("  ".join(cell.ljust(widths[k]) if k == 0 else cell.rjust(widths[k])
                        for k, cell in enumerate(r)).rstrip())
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netdef", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one algorithm on an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--algorithm", required=True, choices=ALGORITHM_NAMES)
    p.add_argument("--output", help="write the strategy file here")
    p.add_argument("--max-crucial", type=int, default=20)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("evaluate", help="attacker best response to a strategy")
    p.add_argument("--instance", required=True)
    p.add_argument("--strategy", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("generate", help="write a fixture or random instance")
    p.add_argument("--kind", required=True, choices=GENERATOR_KINDS)
    p.add_argument("--output", required=True)
    p.add_argument("--formula", help="DNF formula file (kind dnf)")
    p.add_argument("--t", type=int, help="clause target (kind dnf)")
    p.add_argument("--seed", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--isolated", action="store_true", help="all edge weights 0")
    p.add_argument("--single-threshold", action="store_true", help="ub = lb everywhere")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("compare", help="several algorithms side by side")
    p.add_argument("--instance", required=True)
    p.add_argument("--algorithms", required=True, help="comma-separated algorithm names")
    p.add_argument("--budget-scale", default="1.0", help="comma-separated budget multipliers")
    p.add_argument("--max-crucial", type=int, default=20)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; that code means model mismatch here.
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
