"""Command-line front end: constructions, certificate tables, JSON dumps, property suite.

Exit status is 0 when every check in the invocation holds, 1 when one fails,
and 2 for malformed arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from typing import Optional, Sequence

from . import families, fusion, oracles
from .errors import BudgetExhausted, ConstructionError, DomainError, InvariantViolation
from .intervals import RationalInterval, as_fraction, frac_decimal, frac_str, minkowski, minkowski_union, normalize
from .recipes import parse_set, parse_tree
from .suite import run_suite
from .trees import TREE_KINDS, classify, stem, truncate

COMMANDS = ("classify", "fuse", "gdelta", "adtree", "embed", "oracle", "sumset", "suite")


@dataclass(frozen=True)
class RunConfig:
    command: str
    tree_recipe: Optional[str]
    depth: int
    width: int
    probe: int
    seed: int
    output: str  # "text" | "json"
    decimal: bool = False


class Printer:
    def __init__(self, cfg: RunConfig, out=None):
        self.cfg = cfg
        self.out = out or sys.stdout

    def num(self, x: Fraction) -> str:
        s = frac_str(x)
        return f"{s} {frac_decimal(x)}" if self.cfg.decimal else s

    def line(self, text=""):
        print(text, file=self.out)

    def json(self, data):
        print(json.dumps(data), file=self.out)

    def table(self, header, rows):
        rows = [[str(c) for c in r] for r in rows]
        widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
        self.line("  ".join(h.ljust(w) for h, w in zip(header, widths)))
        for r in rows:
            self.line("  ".join(c.ljust(w) for c, w in zip(r, widths)))


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _natural(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text}")
    return v


def _node(text):
    text = text.strip()
    try:
        return tuple(_natural(p) for p in text.split(",")) if text else ()
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated naturals, got {text!r}") from None


def _interval(text):
    try:
        lo, hi = text.split(",")
        return RationalInterval(as_fraction(lo), as_fraction(hi))
    except (ValueError, ZeroDivisionError, DomainError) as exc:
        raise argparse.ArgumentTypeError(f"bad interval {text!r}: {exc}") from None


def _tree_arg(text):
    try:
        parse_tree(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _set_arg(text):
    try:
        parse_set(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(add_help=False)
    top.add_argument("--json", action="store_true", help="emit JSON instead of tables")
    top.add_argument("--decimal", action="store_true", help="append approximate decimals to exact values")
    # repeated on every subcommand; SUPPRESS keeps a flag given before the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON instead of tables")
    common.add_argument("--decimal", action="store_true", default=argparse.SUPPRESS,
                        help="append approximate decimals to exact values")

    parser = argparse.ArgumentParser(prog="treeideals", description=__doc__.splitlines()[0], parents=[top])
    sub = parser.add_subparsers(dest="command", required=True)

    def budgets(p, depth=5, width=5):
        p.add_argument("--depth", type=_positive, default=depth)
        p.add_argument("--width", type=_positive, default=width)

    p = sub.add_parser("classify", parents=[common], help="tri-state kind verdicts on a window")
    p.add_argument("--tree", type=_tree_arg, default="full")
    budgets(p)

    p = sub.add_parser("fuse", parents=[common], help="interval-driven fusion with bound certificates")
    p.add_argument("--tree", type=_tree_arg, default="full")
    p.add_argument("--mode", choices=("miller", "laver"), default="miller")
    p.add_argument("--stages", type=_positive, default=6)
    p.add_argument("--base", type=_positive, default=4, help="I_n has length base^-n")
    p.add_argument("--lock-stem", action="store_true")
    p.add_argument("--probe", type=_positive, default=fusion.DEFAULT_PROBE)

    p = sub.add_parser("gdelta", parents=[common], help="dense G-delta construction with tail certificates")
    p.add_argument("--tree", type=_tree_arg, default="full")
    p.add_argument("--mode", choices=("miller", "laver", "complete-laver"), default="miller")
    p.add_argument("--stages", type=_positive, default=6)
    p.add_argument("--pieces", type=_positive, default=4)
    p.add_argument("--probe", type=_positive, default=fusion.DEFAULT_PROBE)

    p = sub.add_parser("adtree", parents=[common], help="truncation of the a.d. tree and agreement matrix")
    budgets(p, 2, 3)
    p.add_argument("--selector", type=_node, action="append", default=None,
                   help="comma-separated child choices; repeatable")

    p = sub.add_parser("embed", parents=[common], help="dominating image f(d) of a prefix d")
    p.add_argument("d", type=_node)

    p = sub.add_parser("oracle", parents=[common], help="witness search for ideal membership")
    osub = p.add_subparsers(dest="query", required=True)
    for name in ("avoid", "measure"):
        q = osub.add_parser(name, parents=[common])
        q.add_argument("--tree", type=_tree_arg, default="full")
        q.add_argument("--kind", choices=[k.value for k in TREE_KINDS], required=True)
        q.add_argument("--set", type=_set_arg, required=True, dest="set_spec")
        budgets(q)
    q = osub.add_parser("sigma", parents=[common])
    q.add_argument("--N", type=_positive, default=8)
    budgets(q, 3, 3)
    q = osub.add_parser("bernstein", parents=[common])
    q.add_argument("--set", type=_set_arg, required=True, dest="set_spec")
    q.add_argument("--tree", type=_tree_arg, action="append", default=None)
    budgets(q, 3, 3)

    p = sub.add_parser("sumset", parents=[common], help="measure of a union and its Minkowski sums")
    p.add_argument("--interval", type=_interval, action="append", required=True, help="lo,hi; repeatable")
    p.add_argument("--add", type=_interval, action="append", default=[], help="summand lo,hi; repeatable")

    p = sub.add_parser("suite", parents=[common], help="seeded property trials over every module")
    p.add_argument("--seed", type=_natural, default=0)
    p.add_argument("--trials", type=_positive, default=100)
    return parser


def config_from(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        tree_recipe=getattr(args, "tree", None) if isinstance(getattr(args, "tree", None), str) else None,
        depth=getattr(args, "depth", 0),
        width=getattr(args, "width", 0),
        probe=getattr(args, "probe", fusion.DEFAULT_PROBE),
        seed=getattr(args, "seed", 0),
        output="json" if args.json else "text",
        decimal=args.decimal,
    )


# --- commands -----------------------------------------------------------------------


def cmd_classify(args, pr: Printer) -> bool:
    T = parse_tree(args.tree)
    verdicts = classify(T, args.depth, args.width)
    if pr.cfg.output == "json":
        pr.json({"tree": T.recipe, "depth": args.depth, "width": args.width,
                 "verdicts": [v.to_dict() for v in verdicts]})
    else:
        rows = [(v.kind.value, v.status.value, "" if v.witness is None else list(v.witness)) for v in verdicts]
        pr.table(("kind", "status", "witness"), rows)
    return True


def _cert_rows(pr, certs):
    return [(c.stage, pr.num(c.lhs), pr.num(c.rhs), str(c.holds).lower()) for c in certs]


def cmd_fuse(args, pr: Printer) -> bool:
    T = parse_tree(args.tree)
    dense = list(islice(fusion.dyadic_dense(), args.stages + 1))
    ints = [RationalInterval.centered(d, Fraction(1, args.base**k)) for k, d in enumerate(dense)]
    states = fusion.run_fusion(T, ints, args.mode, args.lock_stem, args.probe)
    base = fusion.base_certificate(states[0])
    certs = [fusion.verify_bound(s) for s in states[1:]]
    conds = [fusion.verify_conditions(s) for s in states]
    _, retention = fusion.fusion_limit(states)
    ok = base.holds and all(c.holds for c in certs) and all(c.ok for c in conds)
    if pr.cfg.output == "json":
        pr.json({"tree": T.recipe, "mode": args.mode, "base": base.to_json(),
                 "certificates": [c.to_json() for c in certs],
                 "conditions": [{"stage": c.stage, "ok": c.ok, "failures": [[w, list(n)] for w, n in c.failures]}
                                for c in conds],
                 "retention": retention.to_json(), "holds": ok})
    else:
        pr.table(("stage", "lhs", "rhs", "holds"), _cert_rows(pr, [base] + certs))
        pr.line(f"grid conditions: {'ok' if all(c.ok for c in conds) else 'VIOLATED'}")
        pr.line(f"grid retention: {sum(retention.checked_per_stage)} nodes checked, 0 lost")
        if args.lock_stem:
            pr.line(f"stem: {list(stem(states[-1].tree, fusion.STEM_BUDGET))}")
    return ok


def cmd_gdelta(args, pr: Printer) -> bool:
    T = parse_tree(args.tree)
    res = fusion.gdelta_construction(T, args.mode, args.stages, pieces=args.pieces, probe=args.probe)
    if pr.cfg.output == "json":
        pr.json(res.to_json())
        return res.holds
    for run in res.runs:
        if run.piece is not None:
            pr.line(f"piece {run.piece}: stem kept = {str(run.stem_kept).lower()}")
        rows = [(t.stage, pr.num(t.lhs), pr.num(t.target), t.factor, t.nominal_factor, str(t.holds).lower())
                for t in run.targets]
        pr.table(("stage", "lhs", "target", "factor", "n^(n-1)", "holds"), rows)
        rows = [(t.n, pr.num(t.total), pr.num(t.bound), str(t.holds).lower()) for t in run.tails]
        pr.table(("n", "tail sum", "bound", "holds"), rows)
        pr.line()
    return res.holds


def cmd_adtree(args, pr: Printer) -> bool:
    T = families.ad_tree()
    F = truncate(T.lazy(), args.depth, args.width)
    sels = args.selector or [(0,) * 6, (0, 1) + (0,) * 4, (1,) + (0,) * 5]
    branches = [families.ad_branch(T, s) for s in sels]
    matrix = [[families.ed_status(f, g)[0] for g in branches] for f in branches]
    if pr.cfg.output == "json":
        pr.json({"truncation": F.to_dict(), "partition": T.partition.to_json(),
                 "branches": [list(b) for b in branches], "agreements": matrix})
    else:
        pr.line(f"truncation depth={F.depth} width={F.width}: {len(F)} nodes")
        for t in F.sorted_nodes():
            pr.line(f"  {list(t)}")
        for s, b in zip(sels, branches):
            pr.line(f"selector {list(s)} -> {list(b)}")
        pr.table(["#"] + [str(i) for i in range(len(branches))], [[i] + row for i, row in enumerate(matrix)])
    return True


def cmd_embed(args, pr: Printer) -> bool:
    T = families.ad_tree()
    f = families.embed(T, args.d)
    g = families.scale4(f)
    ok = all(a >= b for a, b in zip(f, args.d)) and all(a >= b for a, b in zip(g, args.d))
    if pr.cfg.output == "json":
        pr.json({"d": list(args.d), "f": list(f), "scaled": list(g), "dominates": ok})
    else:
        pr.line(f"d      = {list(args.d)}")
        pr.line(f"f(d)   = {list(f)}")
        pr.line(f"4 f(d) = {list(g)}")
        pr.line(f"d <= f(d) pointwise: {str(ok).lower()}")
    return ok


def cmd_oracle(args, pr: Printer) -> bool:
    if args.query in ("avoid", "measure"):
        T, A = parse_tree(args.tree), parse_set(args.set_spec)
        search = oracles.avoid_subtree if args.query == "avoid" else oracles.measurability_witness
        rep = search(T, args.kind, A, args.depth, args.width)
        # the witness is itself a JSON document, so it is printed as one either way
        pr.json(rep.to_json())
        return rep.found and oracles.verify_witness(rep, A)
    if args.query == "sigma":
        rep = oracles.sigma_union_check(args.N, args.depth, args.width)
        if pr.cfg.output == "json":
            pr.json(rep.to_json())
        else:
            rows = [(n, w.outcome.value, w.subtree.children(()) if w.found else "")
                    for n, w in enumerate(rep.witnesses)]
            pr.table(("n", "outcome", "root successors"), rows)
            pr.line(f"level-1 nodes covered: {all(rep.level_cover)}; node union matches: {rep.node_union}")
        return rep.holds
    A = parse_set(args.set_spec)
    specs = args.tree or ["full"]
    pairs = oracles.bernstein_check(A, [parse_tree(s) for s in specs], args.depth, args.width)
    if pr.cfg.output == "json":
        pr.json([{"tree": s, "hit": h, "miss": m} for s, (h, m) in zip(specs, pairs)])
    else:
        pr.table(("tree", "hit", "miss"), [(s, str(h).lower(), str(m).lower()) for s, (h, m) in zip(specs, pairs)])
    return True


def cmd_sumset(args, pr: Printer) -> bool:
    U = normalize(args.interval)
    raw_total = sum((iv.measure for iv in args.interval), Fraction(0))
    sums = [minkowski(U, I) for I in args.add]
    both = minkowski_union(U, normalize(args.add)) if args.add else None
    ok = U.measure <= raw_total
    if pr.cfg.output == "json":
        pr.json({"union": U.to_json(), "measure": frac_str(U.measure),
                 "sums": [{"summand": I.to_json(), "union": S.to_json(), "measure": frac_str(S.measure)}
                          for I, S in zip(args.add, sums)],
                 "sum_with_union": None if both is None else both.to_json()})
    else:
        pr.line(f"union:   {[p.to_json() for p in U]}  measure {pr.num(U.measure)}")
        for I, S in zip(args.add, sums):
            pr.line(f"+ {I.to_json()}: {[p.to_json() for p in S]}  measure {pr.num(S.measure)}")
    return ok


def cmd_suite(args, pr: Printer) -> bool:
    report = run_suite(args.seed, args.trials)
    if pr.cfg.output == "json":
        pr.json(report)
    else:
        pr.table(("property", "trials", "failures"),
                 [(p["name"], p["trials"], p["failures"]) for p in report["properties"]])
    return report["holds"]


HANDLERS = {
    "classify": cmd_classify,
    "fuse": cmd_fuse,
    "gdelta": cmd_gdelta,
    "adtree": cmd_adtree,
    "embed": cmd_embed,
    "oracle": cmd_oracle,
    "sumset": cmd_sumset,
    "suite": cmd_suite,
}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    pr = Printer(config_from(args), out)
    try:
        ok = HANDLERS[args.command](args, pr)
    except DomainError as exc:
        parser.error(str(exc))
    except (ConstructionError, InvariantViolation, BudgetExhausted) as exc:
        pr.line(f"error: {exc}")
        return 1
    return 0 if ok else 1


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
