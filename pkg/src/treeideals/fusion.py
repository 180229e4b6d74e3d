"""Miller and Laver fusion sequences driven by intervals, with exact measure certificates.

A stage tree is the base tree plus *commitments*: at a committed node only the
successor values ``explicit | [tail, oo)`` survive.  The grid ``B_n`` maps
words of ``n^{<=n}`` to nodes.  Grid nodes whose children were never chosen
explicitly get them by a fixed rule (the j-th successor in the stage tree),
so the newest layer stays lazy and a stage-8 run never builds its 19 million
leaves.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count, islice, product
from types import MappingProxyType
from typing import Iterator, NamedTuple, Optional

from .errors import ConstructionError, DomainError, InvariantViolation
from .intervals import (
    RationalInterval,
    as_fraction,
    child_dyadic,
    dyadic_clopen,
    first_inside_dyadic,
    frac_str,
    union_measure_of_shifts,
)
from .trees import (
    Kind,
    LazyTree,
    Node,
    consistent_with,
    is_prefix,
    restrict,
    stem,
    truncate,
)

DEFAULT_PROBE = 8
STEM_BUDGET = 64
WALK_BUDGET = 256


def bound_factor(n: int) -> int:
    """``1 + sum_{k<n} (n-1)^k`` with ``0^0 = 1``."""
    if n < 1:
        raise DomainError("the bound factor is defined for n >= 1")
    return 1 + sum((n - 1) ** k for k in range(n))


def grid_size(n: int) -> int:
    """``|n^{<=n}|``."""
    return sum(n**k for k in range(n + 1))


def parse_mode(mode) -> Kind:
    kind = Kind.parse(mode)
    if kind not in (Kind.MILLER, Kind.LAVER):
        raise DomainError(f"fusion mode must be miller or laver, got {mode!r}")
    return kind


# --- commitments and stage trees ----------------------------------------------------


class Commitment(NamedTuple):
    """Allowed successor values: ``explicit`` plus everything from ``tail`` on."""

    explicit: frozenset
    tail: Optional[int] = None

    def allows(self, v: int) -> bool:
        return v in self.explicit or (self.tail is not None and v >= self.tail)

    def meet(self, other: "Commitment") -> "Commitment":
        e1, t1 = self.explicit, self.tail
        e2, t2 = other.explicit, other.tail
        keep = set(e1 & e2)
        if t2 is not None:
            keep.update(v for v in e1 if v >= t2)
        if t1 is not None:
            keep.update(v for v in e2 if v >= t1)
        tail = None if t1 is None or t2 is None else max(t1, t2)
        return Commitment.of(keep, tail)

    @classmethod
    def of(cls, explicit, tail=None) -> "Commitment":
        if tail is None:
            return cls(frozenset(explicit), None)
        return cls(frozenset(v for v in explicit if v < tail), tail)

    @classmethod
    def single(cls, v: int) -> "Commitment":
        return cls(frozenset((v,)), None)


def stage_tree(base: LazyTree, commitments: Mapping, kind: Kind) -> LazyTree:
    """The subtree of ``base`` cut down by ``commitments``."""
    get = commitments.get

    def member(t):
        for i in range(len(t)):
            c = get(t[:i])
            if c is not None and not c.allows(t[i]):
                return False
        return base.member(t)

    def succ_from(t, lo=0):
        c = get(t)
        if c is None:
            yield from base.successors_from(t, lo)
            return
        for v in sorted(c.explicit):
            if v >= lo and base.member(t + (v,)):
                yield v
        if c.tail is not None:
            yield from base.successors_from(t, max(lo, c.tail))

    def omega(t):
        c = get(t)
        if c is not None and c.tail is None:
            return False
        return base.declared_omega(t)

    def excluded(t):
        c = get(t)
        ex = base.declared_exclusions(t)
        if c is None:
            return ex
        if c.tail is None:
            return False
        if isinstance(ex, frozenset):
            return ex | frozenset(v for v in range(c.tail) if v not in c.explicit)
        return ex

    return LazyTree(
        member=member,
        succ_stream=lambda t: succ_from(t, 0),
        kind_claim=kind,
        recipe={"recipe": "fusion-stage", "tree": dict(base.recipe), "commitments": len(commitments)},
        omega=omega,
        excluded=excluded,
        succ_from=succ_from,
        finitely_branching=base.finitely_branching,
    )


def next_omega(T: LazyTree, t: Node, probe: int = DEFAULT_PROBE) -> Node:
    """The first node at or above ``t`` along least successors that is omega-split.

    A node counts when it is declared infinitely splitting, or shows ``probe``
    successors without a declaration to the contrary.
    """
    for _ in range(WALK_BUDGET):
        om = T.declared_omega(t)
        if om is True:
            return t
        head = list(islice(T.succ_stream(t), probe))
        if len(head) >= probe and om is not False:
            return t
        if not head:
            raise ConstructionError(f"dead end at {t} while looking for an omega-split node")
        t = t + (head[0],)
    raise ConstructionError(f"no omega-split node found above {t} within {WALK_BUDGET} levels")


# --- grids and covers ---------------------------------------------------------------


def _words(n: int) -> Iterator[tuple]:
    for k in range(n + 1):
        yield from product(range(n), repeat=k)


class Grid(Mapping):
    """The fixed nodes ``tau_sigma`` for words ``sigma`` in ``n^{<=n}``."""

    def __init__(self, n: int, tree: LazyTree, nodes: Mapping, mode: Kind, probe: int):
        self.n = n
        self.tree = tree
        self.nodes = MappingProxyType(dict(nodes))
        self.mode = mode
        self.probe = probe

    def _valid(self, word) -> bool:
        return (
            isinstance(word, tuple)
            and len(word) <= self.n
            and all(isinstance(j, int) and 0 <= j < self.n for j in word)
        )

    def _lazy_children(self, parent: Node) -> list:
        head = list(islice(self.tree.succ_stream(parent), self.n))
        if len(head) < self.n:
            raise ConstructionError(f"grid node {parent} has fewer than {self.n} successors")
        if self.mode is Kind.LAVER:
            return [parent + (v,) for v in head]
        return [next_omega(self.tree, parent + (v,), self.probe) for v in head]

    def __getitem__(self, word):
        word = tuple(word)
        if not self._valid(word):
            raise KeyError(word)
        node = self.nodes.get(word)
        if node is not None:
            return node
        parent = self[word[:-1]]
        return self._lazy_children(parent)[word[-1]]

    def __iter__(self):
        return _words(self.n)

    def __len__(self):
        return grid_size(self.n)

    def materialize(self) -> dict:
        """Every word to its node, filling lazy children by the grid rule."""
        out = dict(self.nodes)
        if self.n == 0:
            return out
        stack = [()]
        while stack:
            word = stack.pop()
            if len(word) == self.n:
                continue
            first = word + (0,)
            if first not in out:
                for j, child in enumerate(self._lazy_children(out[word])):
                    out[word + (j,)] = child
            stack.extend(word + (j,) for j in range(self.n))
        return out

    def edges(self, nodes: Mapping):
        for word, child in nodes.items():
            if word:
                yield nodes[word[:-1]], child


class CoverFamily(Mapping):
    """The intervals ``I_sigma = (b_sigma - width, b_sigma)`` recorded at one stage.

    ``b_sigma`` is the right end of clopen(tau_sigma), kept as a dyadic pair.
    """

    def __init__(self, right_ends: Mapping, width: Fraction):
        self.right_ends = MappingProxyType(dict(right_ends))
        self.width = as_fraction(width)

    def __getitem__(self, word):
        num, e = self.right_ends[word]
        b = Fraction(num, 1 << e)
        return RationalInterval(b - self.width, b)

    def __iter__(self):
        return iter(self.right_ends)

    def __len__(self):
        return len(self.right_ends)

    def sum_measure(self, I: RationalInterval) -> Fraction:
        """Exact measure of the union of ``I_sigma + I``."""
        return union_measure_of_shifts(list(self.right_ends.values()), self.width + I.measure)


# --- states -------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FusionState:
    n: int
    tree: LazyTree
    grid: Grid
    covers: CoverFamily
    intervals: tuple
    mode: Kind
    stem_locked: Optional[Node]
    base: LazyTree
    commitments: Mapping
    probe: int = DEFAULT_PROBE

    @property
    def epsilons(self) -> tuple:
        return tuple(I.measure for I in self.intervals)


@dataclass(frozen=True)
class BoundCertificate:
    stage: int
    lhs: Fraction
    rhs: Fraction
    holds: bool

    def to_json(self) -> dict:
        return {"stage": self.stage, "lhs": frac_str(self.lhs), "rhs": frac_str(self.rhs), "holds": self.holds}


def _dyadic_cache():
    cache = {}

    def dy(t):
        got = cache.get(t)
        if got is None:
            got = dyadic_clopen(t) if len(t) < 2 else child_dyadic(dy(t[:-1]), t[-1])
            cache[t] = got
        return got

    return dy


def _path_commitments(commitments: dict, parent: Node, child: Node):
    for i in range(len(parent) + 1, len(child)):
        node = child[:i]
        c = Commitment.single(child[i])
        old = commitments.get(node)
        commitments[node] = c if old is None else old.meet(c)


def fusion_init(
    T: LazyTree,
    I0: RationalInterval,
    mode="miller",
    lock_stem: bool = False,
    probe: int = DEFAULT_PROBE,
) -> FusionState:
    kind = parse_mode(mode)
    if probe < 2:
        raise DomainError("probe must be >= 2")
    if not consistent_with(T, kind):
        raise DomainError(f"{T.recipe} is refuted as a {kind.value} tree")
    eps0 = I0.measure
    commitments: dict = {}
    if lock_stem:
        if kind is not Kind.LAVER:
            raise DomainError("lock_stem needs laver mode")
        tau = stem(T, STEM_BUDGET)
        if not tau:
            raise DomainError("lock_stem needs a nonempty stem")
        width = eps0 / 2
        lo, ln, e = dyadic_clopen(tau)
        K = first_inside_dyadic(ln, e, width)
        commitments[tau] = Commitment(frozenset(), K)
        locked = tau
    else:
        rho = next_omega(T, (), probe)
        tau = rho
        lo, ln, e = dyadic_clopen(rho)
        if Fraction(ln, 1 << e) >= eps0:
            for k in islice(T.successors_from(rho, 0), WALK_BUDGET):
                _, cl, ce = child_dyadic((lo, ln, e), k)
                if Fraction(cl, 1 << ce) < eps0:
                    tau = next_omega(T, rho + (k,), probe)
                    break
            else:
                raise ConstructionError(f"no successor of {rho} has a clopen below {eps0}", word=(), stage=0)
        for i in range(len(tau)):
            commitments[tau[:i]] = Commitment.single(tau[i])
        lo, ln, e = dyadic_clopen(tau)
        width = Fraction(ln, 1 << e)
        locked = None
    tree = stage_tree(T, commitments, kind)
    if sum(1 for _ in islice(tree.succ_stream(tau), probe)) < probe:
        raise ConstructionError(f"cannot witness {probe} successors at {tau}", word=(), stage=0)
    covers = CoverFamily({(): (lo + ln, e)}, width)
    grid = Grid(0, tree, {(): tau}, kind, probe)
    return FusionState(0, tree, grid, covers, (I0,), kind, locked, T, MappingProxyType(commitments), probe)


def fusion_step(state: FusionState, I_next: RationalInterval) -> FusionState:
    n, m = state.n, state.n + 1
    tree, probe = state.tree, state.probe
    width = I_next.measure / (m**n) / 2
    old = state.grid.materialize()
    commitments = dict(state.commitments)
    new_nodes = dict(old)
    right_ends = {}
    dy = _dyadic_cache()
    wp, wq = width.numerator, width.denominator
    for word, tau in old.items():
        lo, ln, e = dy(tau)
        right_ends[word] = (lo + ln, e)
        # first_inside_dyadic inlined: least K with 7 l 2^-(K+3) <= width
        c = -(-7 * ln * wq // (wp << e))
        K = max(0, (c - 1).bit_length() - 3)
        leaf = len(word) == n
        taken = frozenset() if leaf else frozenset(old[word + (j,)][len(tau)] for j in range(n))
        need = max(probe, n + 1) if leaf else probe
        members = []
        for v in tree.successors_from(tau, K):
            if v not in taken:
                members.append(v)
                if len(members) >= need:
                    break
        if len(members) < need:
            raise ConstructionError(
                f"N(I_sigma) for sigma={word} shows only {len(members)} of {need} members", word=word, stage=m
            )
        if leaf:
            c = Commitment(frozenset(), K)
        else:
            v = members[0]
            child = tau + (v,)
            if state.mode is Kind.MILLER:
                child = next_omega(tree, child, probe)
            new_nodes[word + (n,)] = child
            c = Commitment.of(taken | {v}, K)
        prev = commitments.get(tau)
        commitments[tau] = c if prev is None else prev.meet(c)
    if state.mode is Kind.MILLER:
        for word, child in new_nodes.items():
            if word:
                _path_commitments(commitments, new_nodes[word[:-1]], child)
    new_tree = stage_tree(state.base, commitments, state.mode)
    grid = Grid(m, new_tree, new_nodes, state.mode, probe)
    covers = CoverFamily(right_ends, width)
    return FusionState(
        m, new_tree, grid, covers, state.intervals + (I_next,), state.mode,
        state.stem_locked, state.base, MappingProxyType(commitments), probe,
    )


def run_fusion(T: LazyTree, intervals, mode="miller", lock_stem=False, probe=DEFAULT_PROBE) -> list:
    intervals = list(intervals)
    if not intervals:
        raise DomainError("need at least I_0")
    states = [fusion_init(T, intervals[0], mode, lock_stem, probe)]
    for I in intervals[1:]:
        try:
            states.append(fusion_step(states[-1], I))
        except ConstructionError as exc:
            if exc.stage is None:
                exc.stage = states[-1].n + 1
            raise
    return states


def base_certificate(state: FusionState) -> BoundCertificate:
    I0 = state.intervals[0]
    lhs = state.covers.sum_measure(I0) if state.n == 0 else None
    if lhs is None:
        raise DomainError("base_certificate is for stage 0")
    rhs = 2 * I0.measure
    return BoundCertificate(0, lhs, rhs, lhs < rhs)


def verify_bound(state: FusionState) -> BoundCertificate:
    if state.n < 1:
        raise DomainError("stage 0 has no factor bound; use base_certificate")
    In = state.intervals[-1]
    lhs = state.covers.sum_measure(In)
    rhs = bound_factor(state.n) * In.measure
    return BoundCertificate(state.n, lhs, rhs, lhs < rhs)


# --- condition checks ---------------------------------------------------------------


@dataclass
class ConditionReport:
    stage: int
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, what, node):
        self.failures.append((what, node))


def _omega_witnessed(T: LazyTree, t: Node, probe: int) -> bool:
    if not T.member(t):
        return False
    k = sum(1 for _ in islice(T.succ_stream(t), probe))
    return k >= probe or (k >= 2 and T.declared_omega(t) is True)


def verify_conditions(state: FusionState, width: int = 4, grid_limit: int = 200_000) -> ConditionReport:
    """Check (i)-(iii), the Laver discipline, the locked stem and cover containment."""
    rep = ConditionReport(state.n)
    T = state.tree
    nodes = state.grid.materialize() if len(state.grid) <= grid_limit else dict(state.grid.nodes)
    for word, tau in nodes.items():
        rep.checked += 1
        if not _omega_witnessed(T, tau, state.probe):
            rep.fail("(i) not omega-split", tau)
        kids = [nodes[word + (j,)] for j in range(state.n) if word + (j,) in nodes]
        for child in kids:
            if not (is_prefix(tau, child) and len(child) > len(tau)):
                rep.fail("(ii) child does not extend parent", child)
            elif state.mode is Kind.LAVER and len(child) != len(tau) + 1:
                rep.fail("laver child is not an immediate successor", child)
        firsts = [c[len(tau)] for c in kids if len(c) > len(tau)]
        if len(set(firsts)) != len(firsts):
            rep.fail("(iii) children meet above parent", tau)
    if state.stem_locked is not None and stem(T, STEM_BUDGET) != state.stem_locked:
        rep.fail("stem moved", state.stem_locked)
    _check_containment(state, rep, width)
    return rep


def _check_containment(state: FusionState, rep: ConditionReport, width: int):
    """Every successor leaving the grid skeleton has its clopen in the cover of its grid node."""
    T = state.tree
    covered = {}
    for word in state.covers:
        covered[state.grid[word]] = word
    skeleton = {t[:i] for t in covered for i in range(len(t) + 1)}
    dy = _dyadic_cache()
    for s in sorted(skeleton):
        for v in islice(T.succ_stream(s), width):
            u = s + (v,)
            if u in skeleton:
                continue
            word = covered.get(s)
            if word is None:
                rep.fail("branch leaves the skeleton between grid nodes", u)
                continue
            lo, ln, e = dy(u)
            iv = state.covers[word]
            if not (iv.lo <= Fraction(lo, 1 << e) and Fraction(lo + ln, 1 << e) <= iv.hi):
                rep.fail("clopen outside its cover", u)


# --- limits -------------------------------------------------------------------------


@dataclass(frozen=True)
class RetentionReport:
    stages: int
    checked_per_stage: tuple
    distinct_nodes: int
    violations: int = 0

    def to_json(self) -> dict:
        return {
            "stages": self.stages,
            "checked_per_stage": list(self.checked_per_stage),
            "distinct_nodes": self.distinct_nodes,
            "violations": self.violations,
        }


def fusion_limit(states, depth: int = 4, width: int = 3):
    """Truncate the last stage and confirm every earlier grid node survives in it."""
    states = list(states)
    if not states:
        raise DomainError("no states")
    for a, b in zip(states, states[1:]):
        if b.n != a.n + 1 or b.base is not a.base:
            raise DomainError("states are not consecutive stages of one run")
    final = states[-1]
    seen: dict = {}
    per_stage = []
    for s in states[:-1]:
        nodes = s.grid.materialize()
        for word, tau in nodes.items():
            if final.grid[word] != tau:
                raise InvariantViolation(f"grid word {word} moved from {tau} by stage {final.n}", node=tau)
            ok = seen.get(tau)
            if ok is None:
                ok = seen[tau] = _omega_witnessed(final.tree, tau, final.probe)
            if not ok:
                raise InvariantViolation(f"grid node {tau} is no longer split in stage {final.n}", node=tau)
        per_stage.append(len(nodes))
    approx = truncate(final.tree, depth, width)
    return approx, RetentionReport(len(states), tuple(per_stage), len(seen))


def complete_laver_decompose(T: LazyTree):
    """Yield ``(n, restrict(T, (n,)))`` for the root successors ``n``."""
    if stem(T, STEM_BUDGET) != ():
        raise DomainError("complete laver decomposition needs an empty stem")
    if not consistent_with(T, Kind.COMPLETE_LAVER):
        raise DomainError(f"{T.recipe} is refuted as a complete laver tree")
    for n in T.succ_stream(()):
        yield n, restrict(T, (n,))


# --- the dense G-delta construction ------------------------------------------------


def dyadic_dense() -> Iterator[Fraction]:
    """1/2, 1/4, 3/4, 1/8, 3/8, ... : every dyadic rational of (0,1) once."""
    for e in count(1):
        for num in range(1, 1 << e, 2):
            yield Fraction(num, 1 << e)


def gdelta_measure(k: int) -> Fraction:
    """The interval length used at stage ``k >= 1``.

    Half of ``1/(max(k^(k-1), factor_k) 2^k)``: below the nominal bound, and
    small enough that the factor bound alone gives ``lhs_k < 1/2^k`` at every k.
    """
    if k < 1:
        raise DomainError("stage lengths start at k = 1")
    return Fraction(1, (1 << (k + 1)) * max(k ** (k - 1), bound_factor(k)))


AUX_MEASURE = Fraction(1, 2)


def gdelta_intervals(stages: int, dense=None) -> list:
    dense = dyadic_dense() if dense is None else iter(dense)
    ds = [as_fraction(d) for d in islice(dense, stages + 1)]
    if len(ds) < stages + 1:
        raise DomainError(f"need {stages + 1} dense points")
    if len(set(ds)) != len(ds):
        raise DomainError("dense points must be pairwise distinct")
    out = [RationalInterval.centered(ds[0], AUX_MEASURE)]
    out += [RationalInterval.centered(ds[k], gdelta_measure(k)) for k in range(1, stages + 1)]
    return out


@dataclass(frozen=True)
class TargetCertificate:
    stage: int
    lhs: Fraction
    target: Fraction
    factor: int
    nominal_factor: int
    holds: bool

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "lhs": frac_str(self.lhs),
            "target": frac_str(self.target),
            "factor": self.factor,
            "nominal_factor": self.nominal_factor,
            "holds": self.holds,
        }


@dataclass(frozen=True)
class TailCertificate:
    n: int
    total: Fraction
    bound: Fraction
    holds: bool

    def to_json(self) -> dict:
        return {"n": self.n, "sum": frac_str(self.total), "bound": frac_str(self.bound), "holds": self.holds}


@dataclass(frozen=True, eq=False)
class GdeltaRun:
    piece: Optional[int]
    states: tuple
    base: BoundCertificate
    bounds: tuple
    targets: tuple
    tails: tuple
    stem_kept: Optional[bool] = None

    @property
    def holds(self) -> bool:
        return (
            self.base.holds
            and all(c.holds for c in self.bounds + self.targets + self.tails)
            and self.stem_kept is not False
        )

    def to_json(self) -> dict:
        return {
            "piece": self.piece,
            "stages": self.states[-1].n,
            "base": self.base.to_json(),
            "bounds": [c.to_json() for c in self.bounds],
            "targets": [c.to_json() for c in self.targets],
            "tails": [c.to_json() for c in self.tails],
            "stem_kept": self.stem_kept,
            "holds": self.holds,
        }


@dataclass(frozen=True, eq=False)
class GdeltaResult:
    mode: str
    intervals: tuple
    runs: tuple

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.runs)

    @property
    def stages(self) -> int:
        return max(r.states[-1].n for r in self.runs)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "stages": self.stages,
            "intervals": [I.to_json() for I in self.intervals],
            "runs": [r.to_json() for r in self.runs],
            "holds": self.holds,
        }


def _certify(states, piece=None, stem_expect=None) -> GdeltaRun:
    bounds = tuple(verify_bound(s) for s in states[1:])
    targets = tuple(
        TargetCertificate(
            c.stage, c.lhs, Fraction(1, 1 << c.stage), bound_factor(c.stage),
            c.stage ** (c.stage - 1), c.lhs < Fraction(1, 1 << c.stage),
        )
        for c in bounds
    )
    N = states[-1].n
    tails = []
    for n in range(N):
        total = sum((c.lhs for c in bounds if c.stage > n), Fraction(0))
        tails.append(TailCertificate(n, total, Fraction(1, 1 << n), total <= Fraction(1, 1 << n)))
    kept = None
    if stem_expect is not None:
        kept = all(stem(s.tree, STEM_BUDGET) == stem_expect for s in states)
    return GdeltaRun(piece, tuple(states), base_certificate(states[0]), bounds, targets, tuple(tails), kept)


def gdelta_construction(T: LazyTree, mode="miller", stages: int = 8, dense=None, pieces: int = 4,
                        probe: int = DEFAULT_PROBE) -> GdeltaResult:
    """Intervals ``I_k`` centred on a dense sequence, a fusion run, and its certificates.

    ``mode`` is miller, laver or complete-laver; the last decomposes ``T`` and
    runs each of the first ``pieces`` pieces in laver mode with the stem locked.
    """
    if stages < 3:
        raise DomainError("stages must be >= 3")
    kind = Kind.parse(mode)
    intervals = gdelta_intervals(stages, dense)
    if kind is Kind.COMPLETE_LAVER:
        runs = []
        for n, piece in islice(complete_laver_decompose(T), pieces):
            states = run_fusion(piece, intervals, Kind.LAVER, True, probe)
            runs.append(_certify(states, n, stem(piece, STEM_BUDGET)))
        return GdeltaResult(kind.value, tuple(intervals), tuple(runs))
    states = run_fusion(T, intervals, parse_mode(kind), False, probe)
    return GdeltaResult(kind.value, tuple(intervals), (_certify(states),))
