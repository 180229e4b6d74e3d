"""Finite-budget witness search for tree-ideal membership and tree measurability.

Sets are clopen combinations of cones, so membership of the whole cone above
a node is decided by looking at the node alone.  A search never refutes an
existential; it returns a witness subtree or reports the budget exhausted.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import DomainError
from .trees import (
    FiniteTreeApprox,
    Kind,
    LazyTree,
    Node,
    VerdictStatus,
    as_node,
    classify,
    cylinder_tree,
    full_tree,
    is_prefix,
    restrict,
    truncate,
    verdict_for,
)


class Decision(str, enum.Enum):
    IN = "all-branches-in"
    OUT = "all-branches-out"
    UNDETERMINED = "undetermined"


IN, OUT, UND = Decision.IN, Decision.OUT, Decision.UNDETERMINED


def _join(decisions, absorbing: Decision, neutral: Decision) -> Decision:
    seen_und = False
    for d in decisions:
        if d is absorbing:
            return absorbing
        if d is not neutral:
            seen_und = True
    return UND if seen_und else neutral


def _any(ds):
    return _join(ds, IN, OUT)


def _all(ds):
    return _join(ds, OUT, IN)


def _flip(d: Decision) -> Decision:
    return {IN: OUT, OUT: IN, UND: UND}[d]


@dataclass(frozen=True, eq=False)
class PrefixSet:
    """A set of branches whose membership is settled by finite prefixes.

    ``profile(s)`` returns ``(values, default)``: the finitely many successor
    values of ``s`` whose decision may differ from ``default``, the decision
    at every other ``s + (k,)``.
    """

    decide: Callable[[Node], Decision]
    profile: Callable[[Node], tuple]
    description: dict

    def __call__(self, t) -> Decision:
        return self.decide(tuple(t))

    def decide_child(self, s: Node, k: int, prof=None) -> Decision:
        values, default = self.profile(s) if prof is None else prof
        return self.decide(s + (k,)) if k in values else default

    def __or__(self, other):
        return union(self, other)

    def __and__(self, other):
        return intersection(self, other)

    def __invert__(self):
        return complement(self)


def cone(tau) -> PrefixSet:
    """Branches through ``tau``."""
    tau = as_node(tau)

    def decide(s):
        if is_prefix(tau, s):
            return IN
        if is_prefix(s, tau):
            return UND
        return OUT

    def profile(s):
        if is_prefix(tau, s):
            return frozenset(), IN
        if is_prefix(s, tau):
            return frozenset((tau[len(s)],)), OUT
        return frozenset(), OUT

    return PrefixSet(decide, profile, {"set": "cone", "node": list(tau)})


def cylinder_set(n: int) -> PrefixSet:
    p = cone((n,))
    return PrefixSet(p.decide, p.profile, {"set": "cylinder", "n": n})


def everything() -> PrefixSet:
    return PrefixSet(lambda s: IN, lambda s: (frozenset(), IN), {"set": "all"})


def empty() -> PrefixSet:
    return PrefixSet(lambda s: OUT, lambda s: (frozenset(), OUT), {"set": "empty"})


def _combine(parts, join, name) -> PrefixSet:
    parts = tuple(parts)

    def profile(s):
        profs = [p.profile(s) for p in parts]
        values = frozenset().union(*(v for v, _ in profs))
        return values, join(d for _, d in profs)

    return PrefixSet(
        lambda s: join(p.decide(s) for p in parts),
        profile,
        {"set": name, "parts": [p.description for p in parts]},
    )


def union(*parts) -> PrefixSet:
    return _combine(parts, _any, "union")


def intersection(*parts) -> PrefixSet:
    return _combine(parts, _all, "intersection")


def complement(A: PrefixSet) -> PrefixSet:
    def profile(s):
        values, default = A.profile(s)
        return values, _flip(default)

    return PrefixSet(lambda s: _flip(A.decide(s)), profile, {"set": "complement", "of": A.description})


def cylinder(n: int) -> tuple:
    """The tree of ``C_n = {x : x(0) = n}`` and the matching set."""
    return cylinder_tree(n), cylinder_set(n)


# --- filtered trees -----------------------------------------------------------------


def avoiding(P: LazyTree, A: PrefixSet, drop: Decision) -> LazyTree:
    """The subtree of ``P`` of nodes that do not decide ``drop``.

    Monotone coherence makes this prefix-closed.  Successor streams never
    stall: past the finitely many profiled values every child shares the
    default decision.
    """

    def member(t):
        return P.member(t) and all(A.decide(t[:i]) is not drop for i in range(len(t) + 1))

    def succ_from(t, lo):
        values, default = prof = A.profile(t)
        top = max(values, default=-1)
        for v in P.successors_from(t, lo):
            if default is drop and v > top:
                return
            if A.decide_child(t, v, prof) is not drop:
                yield v

    def omega(t):
        _, default = A.profile(t)
        return False if default is drop else P.declared_omega(t)

    def excluded(t):
        values, default = A.profile(t)
        if default is drop:
            return False
        ex = P.declared_exclusions(t)
        if isinstance(ex, frozenset):
            return ex | frozenset(v for v in values if A.decide(t + (v,)) is drop)
        return ex

    return LazyTree(
        member=member,
        succ_stream=lambda t: succ_from(t, 0),
        kind_claim=P.kind_claim,
        recipe={"recipe": "avoid", "tree": dict(P.recipe), "drop": drop.value, "set": A.description},
        omega=omega,
        excluded=excluded,
        succ_from=succ_from,
        finitely_branching=P.finitely_branching,
    )


# --- witness reports ----------------------------------------------------------------


class Outcome(str, enum.Enum):
    DISJOINT = "disjoint-witness"
    INSIDE = "inside-witness"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True, eq=False)
class WitnessReport:
    outcome: Outcome
    depth: int
    width: int
    tree: Optional[LazyTree] = None
    subtree: Optional[FiniteTreeApprox] = None

    @property
    def found(self) -> bool:
        return self.outcome is not Outcome.EXHAUSTED

    def to_json(self) -> dict:
        out = {"outcome": self.outcome.value, "depth": self.depth, "width": self.width}
        if self.subtree is not None:
            out["subtree"] = self.subtree.to_dict()
            out["recipe"] = dict(self.tree.recipe)
        return out


def _frontier_decides(F: FiniteTreeApprox, A: PrefixSet, want: Decision) -> bool:
    level = F.level(F.depth)
    return bool(level) and all(A.decide(t) is want for t in level)


def _kind_holds(Q: LazyTree, kind: Kind, depth: int, width: int) -> bool:
    if kind is Kind.UNKNOWN:
        return True
    return verdict_for(classify(Q, depth, width), kind).status is not VerdictStatus.REFUTED


def _check_kind(P: LazyTree, kind, depth: int, width: int) -> Kind:
    kind = Kind.parse(kind)
    if depth < 1 or width < 2:
        raise DomainError("search needs depth >= 1 and width >= 2")
    if not _kind_holds(P, kind, depth, width):
        raise DomainError(f"{P.recipe} is refuted as a {kind.value} tree")
    return kind


def _search(P: LazyTree, kind: Kind, A: PrefixSet, depth: int, width: int, want: Decision):
    """A subtree of ``P`` of the given kind whose window frontier decides ``want``."""
    drop = _flip(want)
    if A.decide(()) is want:
        return P, truncate(P, depth, width)
    if A.decide(()) is drop:
        return None
    Q = avoiding(P, A, drop)
    F = truncate(Q, depth, width)
    if _kind_holds(Q, kind, depth, width) and _frontier_decides(F, A, want):
        return Q, F
    if kind.complete:
        return None
    for t in truncate(P, depth, width).sorted_nodes():
        if A.decide(t) is want:
            R = restrict(P, t)
            G = truncate(R, depth, width)
            if _kind_holds(R, kind, depth, width) and _frontier_decides(G, A, want):
                return R, G
            return None
    return None


def avoid_subtree(P: LazyTree, kind, A: PrefixSet, depth: int = 5, width: int = 5) -> WitnessReport:
    """Look for ``Q`` inside ``P`` of the same kind with ``[Q]`` disjoint from ``A``.

    First drop every successor whose cone lies in ``A`` (least values first);
    failing that, restrict to the least node whose cone misses ``A``.
    """
    kind = _check_kind(P, kind, depth, width)
    hit = _search(P, kind, A, depth, width, OUT)
    if hit is None:
        return WitnessReport(Outcome.EXHAUSTED, depth, width)
    return WitnessReport(Outcome.DISJOINT, depth, width, *hit)


def measurability_witness(P: LazyTree, kind, A: PrefixSet, depth: int = 5, width: int = 5) -> WitnessReport:
    """Look for ``Q`` inside ``P`` with ``[Q]`` disjoint from ``A`` or contained in it."""
    kind = _check_kind(P, kind, depth, width)
    hit = _search(P, kind, A, depth, width, OUT)
    if hit is not None:
        return WitnessReport(Outcome.DISJOINT, depth, width, *hit)
    hit = _search(P, kind, A, depth, width, IN)
    if hit is not None:
        return WitnessReport(Outcome.INSIDE, depth, width, *hit)
    return WitnessReport(Outcome.EXHAUSTED, depth, width)


def verify_witness(report: WitnessReport, A: PrefixSet) -> bool:
    """Re-check a report's frontier against ``A`` from scratch."""
    if not report.found:
        return True
    want = OUT if report.outcome is Outcome.DISJOINT else IN
    F = truncate(report.tree, report.depth, report.width)
    return F == report.subtree and _frontier_decides(F, A, want)


@dataclass(frozen=True)
class SigmaUnionReport:
    N: int
    witnesses: tuple
    level_cover: tuple
    node_union: bool

    @property
    def holds(self) -> bool:
        return (
            all(w.outcome is Outcome.DISJOINT for w in self.witnesses)
            and all(self.level_cover)
            and self.node_union
        )

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "witnesses": [w.to_json() for w in self.witnesses],
            "level_cover": list(self.level_cover),
            "node_union": self.node_union,
            "holds": self.holds,
        }


def sigma_union_check(N: int, depth: int = 3, width: int = 3) -> SigmaUnionReport:
    """Each ``C_n`` (n < N) is avoided below the full tree, yet level one is covered by them."""
    if N < 1:
        raise DomainError("N must be >= 1")
    full = full_tree()
    witnesses = tuple(
        avoid_subtree(full, Kind.COMPLETE_LAVER, cylinder_set(n), depth, width) for n in range(N)
    )
    sets = [cylinder_set(n) for n in range(N)]
    level_cover = tuple(any(C.decide((k,)) is IN for C in sets) for k in range(N))
    union_nodes = set()
    for n in range(N):
        union_nodes |= truncate(cylinder_tree(n), depth, width).nodes
    union_nodes.discard(())
    expected = {
        t for t in truncate(full, depth, max(N, width)).nodes
        if t and t[0] < N and all(v < width for v in t[1:])
    }
    return SigmaUnionReport(N, witnesses, level_cover, union_nodes == expected)


def bernstein_check(B: PrefixSet, trees, depth: int = 3, width: int = 3) -> list:
    """``(hit, miss)`` per tree: a frontier node of T inside B, an all-in node of B outside T."""
    probe = truncate(full_tree(), depth, width).sorted_nodes()
    inside = [t for t in probe if B.decide(t) is IN]
    out = []
    for entry in trees:
        T = entry[0] if isinstance(entry, tuple) else entry
        F = truncate(T, depth, width)
        hit = any(B.decide(t) is IN for t in F.level(depth))
        miss = any(not T.member(t) for t in inside)
        out.append((hit, miss))
    return out
