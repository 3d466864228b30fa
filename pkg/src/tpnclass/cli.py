"""Command-line interface: ``tpnclass explore|simulate|check``.

Exit codes: 0 success, 1 a checked property failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import checks
from . import explorer as ex
from . import semantics as sem
from .model import NetError, SafetyViolation, load_net, translate_p_to_a


def _grid(text):
    try:
        g = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad grid {text!r} (expected a/b)")
    if g <= 0:
        raise argparse.ArgumentTypeError("grid must be positive")
    return g


def _positive(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tpnclass", description="State class graphs of P-TPN and A-TPN.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("net", help="net file")
        p.add_argument("--model", choices=["ptpn", "atpn"], help="assert the net kind")
        p.add_argument("-o", "--output", help="output file (default: stdout)")

    p = sub.add_parser("explore", help="build a class graph")
    common(p)
    p.add_argument("--graph", choices=["scg", "cscg"], default="cscg")
    p.add_argument("--reduce", choices=list(ex.REDUCTIONS), default="none")
    p.add_argument("--format", choices=["dot", "json", "text"], default="dot")
    p.add_argument("--budget", type=_positive, default=100_000)
    p.add_argument("--jobs", type=_positive, default=1)

    p = sub.add_parser("simulate", help="enumerate timed runs on a grid")
    common(p)
    p.add_argument("--horizon", type=int, default=4)
    p.add_argument("--grid", type=_grid, default=Fraction(1, 2))
    p.add_argument("--budget", type=_positive, default=100_000)
    p.add_argument("--err-bound", choices=["upper", "lower"], default="upper")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("check", help="run the cross-validation suites on a net")
    common(p)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--horizon", type=int, default=4)
    p.add_argument("--grid", type=_grid, default=Fraction(1, 2))
    p.add_argument("--err-bound", choices=["upper", "lower"], default="upper")
    return ap


def _write(args, text):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_explore(args, net) -> int:
    cfg = ex.ExploreConfig(model=args.model, graph=args.graph, reduce=args.reduce,
                           budget=args.budget, jobs=args.jobs)
    g = ex.explore(net, cfg)
    out = {"dot": ex.to_dot, "json": ex.to_json, "text": ex.to_text}[args.format](g)
    _write(args, out)
    if g.truncated:
        print(f"warning: node budget {args.budget} exhausted, graph truncated", file=sys.stderr)
    return 0


def cmd_simulate(args, net) -> int:
    if args.horizon < 0:
        raise ValueError("--horizon must be >= 0")
    runs = sorted(sem.enumerate_runs(net, args.horizon, args.grid, budget=args.budget, err_bound=args.err_bound),
                  key=lambda r: (len(r), [(d, str(x)) for d, x in r]))
    if args.format == "json":
        data = [[[str(d), x] for d, x in r] for r in runs]
        _write(args, json.dumps(data) + "\n")
    else:
        _write(args, "".join((sem.format_run(r) or "(empty)") + "\n" for r in runs))
    return 0


def cmd_check(args, net) -> int:
    nets = [net]
    if net.kind == "ptpn":
        nets.append(translate_p_to_a(net))
    ok = True
    lines = []
    for n in nets:
        for rep in checks.run_all(n, args.depth, args.horizon, args.grid, args.err_bound):
            lines.append(f"[{n.kind}] {rep.line()}")
            for f in rep.failures[:3]:
                lines.append(f"    {f}")
            ok &= rep.ok
    _write(args, "\n".join(lines) + "\n")
    return 0 if ok else 1


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        net = load_net(args.net)
        if args.model and args.model != net.kind:
            raise ValueError(f"--model {args.model} does not match the {net.kind} net")
        return {"explore": cmd_explore, "simulate": cmd_simulate, "check": cmd_check}[args.cmd](args, net)
    except NetError as e:
        print(f"error: {args.net}: {e}", file=sys.stderr)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
    except SafetyViolation as e:
        print(f"error: unsafe net: {e}", file=sys.stderr)
    except (ValueError, sem.BudgetExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
