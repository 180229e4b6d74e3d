"""Trees on the Baire space: lazy presentations, finite windows, split combinatorics.

A node is a plain tuple of naturals.  A :class:`LazyTree` is presented by a
membership predicate and a successor enumerator; everything that can be said
about it is said about a finite window produced by :func:`truncate`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import count, dropwhile, islice
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Optional, Union

from .errors import BudgetExhausted, DomainError

Node = tuple  # tuple[int, ...]

# What a tree may declare about {n : t^n not in T}: a finite set, ``False`` for
# "infinitely many gaps", ``None`` for no declaration.
Exclusions = Union[frozenset, bool, None]


def as_node(seq: Iterable[int]) -> Node:
    node = tuple(seq)
    for v in node:
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise DomainError(f"node entries must be natural numbers, got {v!r}")
    return node


def is_prefix(s: Node, t: Node) -> bool:
    """``s`` is an initial segment of ``t`` (not necessarily proper)."""
    return len(s) <= len(t) and t[: len(s)] == s


def comparable(s: Node, t: Node) -> bool:
    return is_prefix(s, t) or is_prefix(t, s)


def node_key(t: Node):
    """Length-then-lexicographic order used for every canonical listing."""
    return (len(t), t)


class Kind(str, enum.Enum):
    SACKS = "sacks"
    MILLER = "miller"
    LAVER = "laver"
    COMPLETE_LAVER = "complete-laver"
    HECHLER = "hechler"
    COMPLETE_HECHLER = "complete-hechler"
    UNKNOWN = "unknown"

    @classmethod
    def parse(cls, name) -> "Kind":
        if isinstance(name, Kind):
            return name
        key = str(name).strip().lower().replace("_", "-")
        for kind in cls:
            if kind.value == key:
                return kind
        raise DomainError(f"unknown tree kind {name!r}")

    def implies(self, other: "Kind") -> bool:
        """Whether every tree of this kind is also of kind ``other``."""
        return other in _IMPLIED[self]

    @property
    def complete(self) -> bool:
        return self in (Kind.COMPLETE_LAVER, Kind.COMPLETE_HECHLER)


_IMPLIED = {
    Kind.SACKS: {Kind.SACKS},
    Kind.MILLER: {Kind.MILLER, Kind.SACKS},
    Kind.LAVER: {Kind.LAVER, Kind.MILLER, Kind.SACKS},
    Kind.COMPLETE_LAVER: {Kind.COMPLETE_LAVER, Kind.LAVER, Kind.MILLER, Kind.SACKS},
    Kind.HECHLER: {Kind.HECHLER, Kind.LAVER, Kind.MILLER, Kind.SACKS},
    Kind.COMPLETE_HECHLER: set(Kind) - {Kind.UNKNOWN},
    Kind.UNKNOWN: {Kind.UNKNOWN},
}

TREE_KINDS = tuple(k for k in Kind if k is not Kind.UNKNOWN)


@dataclass(frozen=True, eq=False)
class LazyTree:
    """An infinite tree given by computable membership and successor enumeration.

    ``succ_stream(t)`` must yield ``{a : t + (a,) in T}`` in strictly increasing
    order; a stream that ends is a declaration that ``t`` has finitely many
    successors.  The optional hooks let a constructor state facts that no finite
    enumeration can establish:

    * ``omega(t)``: True/False when ``t`` is known to be (not) infinitely splitting;
    * ``excluded(t)``: the finite set of missing successor values (co-finite
      successors), ``False`` for infinitely many gaps;
    * ``finitely_branching``: every node has finitely many successors.

    ``recipe`` is the JSON-able description the tree was built from.
    """

    member: Callable[[Node], bool]
    succ_stream: Callable[[Node], Iterator[int]]
    kind_claim: Kind = Kind.UNKNOWN
    recipe: Mapping = field(default_factory=lambda: {"recipe": "custom"})
    omega: Optional[Callable[[Node], Optional[bool]]] = None
    excluded: Optional[Callable[[Node], Exclusions]] = None
    succ_from: Optional[Callable[[Node, int], Iterator[int]]] = None
    finitely_branching: bool = False

    def __contains__(self, t) -> bool:
        return self.member(tuple(t))

    def successors_from(self, t: Node, lo: int) -> Iterator[int]:
        """Successor values of ``t`` that are ``>= lo``, increasing."""
        if self.succ_from is not None:
            return self.succ_from(t, lo)
        return dropwhile(lambda v: v < lo, self.succ_stream(t))

    def declared_omega(self, t: Node) -> Optional[bool]:
        if self.omega is None:
            return False if self.finitely_branching else None
        return self.omega(t)

    def declared_exclusions(self, t: Node) -> Exclusions:
        return None if self.excluded is None else self.excluded(t)

    def __repr__(self):
        return f"LazyTree({self.recipe!r}, kind_claim={self.kind_claim.value})"


# --- finite windows -------------------------------------------------------------


@dataclass(frozen=True)
class FiniteTreeApprox:
    """A finite prefix-closed window onto a tree, cut at ``depth`` and ``width``."""

    nodes: frozenset
    depth: int
    width: int
    provenance: Optional[Mapping] = field(default=None, compare=False)

    def __contains__(self, t) -> bool:
        return tuple(t) in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self):
        return iter(self.sorted_nodes())

    def sorted_nodes(self) -> list:
        return sorted(self.nodes, key=node_key)

    def level(self, k: int) -> list:
        return sorted((t for t in self.nodes if len(t) == k), key=node_key)

    def children(self, t: Node) -> list:
        t = tuple(t)
        return sorted(s[-1] for s in self.nodes if len(s) == len(t) + 1 and s[:-1] == t)

    def is_prefix_closed(self) -> bool:
        return all(t[:i] in self.nodes for t in self.nodes for i in range(len(t)))

    def issubset(self, other: "FiniteTreeApprox") -> bool:
        return self.nodes <= other.nodes

    def to_dict(self) -> dict:
        out = {
            "depth": self.depth,
            "width": self.width,
            "nodes": [list(t) for t in self.sorted_nodes()],
        }
        if self.provenance is not None:
            out["recipe"] = dict(self.provenance)
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "FiniteTreeApprox":
        nodes = frozenset(as_node(t) for t in data["nodes"])
        return cls(nodes, int(data["depth"]), int(data["width"]), data.get("recipe"))


def truncate(T: LazyTree, depth: int, width: int) -> FiniteTreeApprox:
    """Members of length <= depth reachable through the first ``width`` successors."""
    if depth < 0 or width < 1:
        raise DomainError("truncate needs depth >= 0 and width >= 1")
    nodes = {()}
    frontier = [()]
    for _ in range(depth):
        nxt = []
        for t in frontier:
            for v in islice(T.succ_stream(t), width):
                child = t + (v,)
                nodes.add(child)
                nxt.append(child)
        frontier = nxt
    return FiniteTreeApprox(frozenset(nodes), depth, width, T.recipe)


# --- split combinatorics --------------------------------------------------------


def _require_member(T: LazyTree, t: Node) -> Node:
    t = as_node(t)
    if not T.member(t):
        raise DomainError(f"{t} is not a node of {T.recipe}")
    return t


def successors(T: LazyTree, t: Node, limit: int) -> list:
    t = _require_member(T, t)
    if limit < 0:
        raise DomainError("limit must be >= 0")
    return list(islice(T.succ_stream(t), limit))


def stem(T: LazyTree, depth_budget: int) -> Optional[Node]:
    """The first node with two successors, probing two values per node.

    Returns None when the budget runs out, or when the single path dies
    before splitting (a finite tree has no stem).
    """
    if depth_budget < 1:
        raise DomainError("depth_budget must be >= 1")
    node = ()
    for _ in range(depth_budget):
        head = list(islice(T.succ_stream(node), 2))
        if len(head) >= 2:
            return node
        if not head:
            return None
        node = node + (head[0],)
    return None


class SplitStatus(str, enum.Enum):
    NON_SPLIT = "non-split"
    FINITE_SPLIT = "finite-split"
    OMEGA_WITNESSED = "omega-split-witnessed"


class SplitReport(NamedTuple):
    status: SplitStatus
    count: int

    @property
    def splits(self) -> bool:
        return self.count >= 2


def split_kind(T: LazyTree, t: Node, probe: int) -> SplitReport:
    t = _require_member(T, t)
    if probe < 2:
        raise DomainError("probe must be >= 2")
    k = sum(1 for _ in islice(T.succ_stream(t), probe))
    if k >= probe:
        return SplitReport(SplitStatus.OMEGA_WITNESSED, k)
    if k <= 1:
        return SplitReport(SplitStatus.NON_SPLIT, k)
    return SplitReport(SplitStatus.FINITE_SPLIT, k)


def split_successors(T: LazyTree, s: Node, depth: int, width: int, omega: bool = False) -> list:
    """Minimal splitting nodes strictly above ``s`` inside the (depth, width) window.

    With ``omega=True`` a node counts as splitting only when it shows ``width``
    successors (or declares infinitely many).  This is the windowed form of
    Succ_T(s) and omega-Succ_T(s).
    """
    s = _require_member(T, s)
    window = truncate(T, depth, width)
    found = []
    stack = [s + (v,) for v in reversed(window.children(s))]
    while stack:
        t = stack.pop()
        kids = window.children(t)
        if len(t) < depth:
            wide = len(kids) >= width or T.declared_omega(t) is True
            if (wide if omega else len(kids) >= 2):
                found.append(t)
                continue
        stack.extend(t + (v,) for v in reversed(kids))
    return sorted(found, key=node_key)


# --- classification -------------------------------------------------------------


class VerdictStatus(str, enum.Enum):
    CONFIRMED = "confirmed-at-depth"
    REFUTED = "refuted"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class KindVerdict:
    kind: Kind
    status: VerdictStatus
    witness: Optional[Node] = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "status": self.status.value,
            "witness": None if self.witness is None else list(self.witness),
        }


class _Window:
    """Per-node facts read off a truncation, shared by the kind checks."""

    def __init__(self, T: LazyTree, depth: int, width: int):
        self.T = T
        self.depth = depth
        self.width = width
        self.approx = truncate(T, depth, width)
        self.kids = {t: [] for t in self.approx.nodes}
        for t in self.approx.nodes:
            if t:
                self.kids[t[:-1]].append(t[-1])
        for v in self.kids.values():
            v.sort()
        self.probed = [t for t in self.approx.sorted_nodes() if len(t) < depth]

    def count(self, t):
        return len(self.kids[t])

    def exhausted(self, t):
        return self.count(t) < self.width

    def wide(self, t):
        return self.count(t) >= self.width or self.T.declared_omega(t) is True

    def finite(self, t):
        return self.exhausted(t) or self.T.declared_omega(t) is False

    def extensions(self, s):
        return [t for t in self.probed if is_prefix(s, t)]

    def closed(self, s):
        """The whole subtree above ``s`` is inside the window."""
        return all(self.exhausted(t) for t in self.extensions(s)) and not any(
            is_prefix(s, t) and len(t) == self.depth for t in self.approx.nodes
        )

    def stem(self):
        """('found', node) | ('dead', leaf) | ('unknown', None)."""
        t = ()
        while len(t) < self.depth:
            c = self.count(t)
            if c >= 2:
                return "found", t
            if c == 0:
                return "dead", t
            t = t + (self.kids[t][0],)
        return "unknown", None


def _first(nodes):
    return nodes[0] if nodes else None


def _sacks(w: _Window) -> KindVerdict:
    bad = []
    for s in w.probed:
        if not any(w.count(t) >= 2 for t in w.extensions(s)):
            bad.append(s)
    if not bad:
        return KindVerdict(Kind.SACKS, VerdictStatus.CONFIRMED)
    dead = [s for s in bad if w.closed(s)]
    if dead:
        return KindVerdict(Kind.SACKS, VerdictStatus.REFUTED, dead[0])
    return KindVerdict(Kind.SACKS, VerdictStatus.UNKNOWN)


def _miller(w: _Window) -> KindVerdict:
    bad = [s for s in w.probed if not any(w.wide(t) for t in w.extensions(s))]
    if not bad:
        return KindVerdict(Kind.MILLER, VerdictStatus.CONFIRMED)
    for s in bad:
        exts = w.extensions(s)
        if all(w.finite(t) for t in exts) and (w.T.finitely_branching or w.closed(s)):
            return KindVerdict(Kind.MILLER, VerdictStatus.REFUTED, s)
    return KindVerdict(Kind.MILLER, VerdictStatus.UNKNOWN)


def _above_stem(w: _Window, kind: Kind, node_ok, node_bad) -> KindVerdict:
    status, st = w.stem()
    if status == "dead":
        return KindVerdict(kind, VerdictStatus.REFUTED, st)
    if status == "unknown":
        return KindVerdict(kind, VerdictStatus.UNKNOWN)
    region = w.extensions(st)
    witness = _first([t for t in region if node_bad(t)])
    if witness is not None:
        return KindVerdict(kind, VerdictStatus.REFUTED, witness)
    if all(node_ok(t) for t in region):
        return KindVerdict(kind, VerdictStatus.CONFIRMED)
    return KindVerdict(kind, VerdictStatus.UNKNOWN)


def _hechler_ok(w: _Window, t) -> bool:
    ex = w.T.declared_exclusions(t)
    if not isinstance(ex, frozenset):
        return False
    expected = list(islice((v for v in count() if v not in ex), w.width))
    return w.kids[t] == expected


def _hechler_bad(w: _Window, t) -> bool:
    return w.finite(t) or w.T.declared_exclusions(t) is False


def _complete(w: _Window, kind: Kind, base: KindVerdict) -> KindVerdict:
    if w.count(()) <= 1 and w.exhausted(()):
        return KindVerdict(kind, VerdictStatus.REFUTED, ())
    if base.status is VerdictStatus.REFUTED:
        return KindVerdict(kind, VerdictStatus.REFUTED, base.witness)
    if base.status is VerdictStatus.CONFIRMED and w.stem() == ("found", ()):
        return KindVerdict(kind, VerdictStatus.CONFIRMED)
    return KindVerdict(kind, VerdictStatus.UNKNOWN)


def classify(T: LazyTree, depth: int, width: int) -> list:
    """Tri-state verdict for each of the six kinds on the (depth, width) window.

    Node-local clauses (Laver, Hechler and their complete variants) are
    refuted by a node whose successor stream ends, or whose gaps are declared
    infinite.  Sacks is refuted when the only path above a node dies without
    splitting; Miller when no extension is infinitely splitting and the tree
    declares finite branching (or the whole subtree sits inside the window).
    Co-finiteness is confirmed only through declared exclusion sets.
    """
    if depth < 1 or width < 2:
        raise DomainError("classify needs depth >= 1 and width >= 2")
    w = _Window(T, depth, width)
    laver = _above_stem(w, Kind.LAVER, w.wide, w.finite)
    hechler = _above_stem(
        w, Kind.HECHLER, lambda t: _hechler_ok(w, t), lambda t: _hechler_bad(w, t)
    )
    return [
        _sacks(w),
        _miller(w),
        laver,
        _complete(w, Kind.COMPLETE_LAVER, laver),
        hechler,
        _complete(w, Kind.COMPLETE_HECHLER, hechler),
    ]


def verdict_for(verdicts: Iterable[KindVerdict], kind: Kind) -> KindVerdict:
    kind = Kind.parse(kind)
    for v in verdicts:
        if v.kind is kind:
            return v
    raise KeyError(kind)


def consistent_with(T: LazyTree, kind: Kind, depth: int = 3, width: int = 4) -> bool:
    """``kind`` is not refuted on a small window."""
    kind = Kind.parse(kind)
    if kind is Kind.UNKNOWN:
        return True
    return verdict_for(classify(T, depth, width), kind).status is not VerdictStatus.REFUTED


# --- built-in trees -------------------------------------------------------------


def full_tree() -> LazyTree:
    """All of omega^<omega."""
    return LazyTree(
        member=lambda t: True,
        succ_stream=lambda t: count(),
        kind_claim=Kind.COMPLETE_HECHLER,
        recipe={"recipe": "full"},
        omega=lambda t: True,
        excluded=lambda t: frozenset(),
        succ_from=lambda t, lo: count(lo),
    )


def binary_tree() -> LazyTree:
    """Sequences with all entries below 2."""
    return LazyTree(
        member=lambda t: all(v < 2 for v in t),
        succ_stream=lambda t: iter((0, 1)),
        kind_claim=Kind.SACKS,
        recipe={"recipe": "binary"},
        omega=lambda t: False,
        excluded=lambda t: False,
        succ_from=lambda t, lo: iter([v for v in (0, 1) if v >= lo]),
        finitely_branching=True,
    )


def cylinder_tree(n: int) -> LazyTree:
    """The tree of the cylinder {x : x(0) = n}."""
    n = as_node([n])[0]
    return LazyTree(
        member=lambda t: not t or t[0] == n,
        succ_stream=lambda t: iter((n,)) if not t else count(),
        kind_claim=Kind.HECHLER,
        recipe={"recipe": "cylinder", "n": n},
        omega=lambda t: bool(t),
        excluded=lambda t: frozenset() if t else False,
        succ_from=lambda t, lo: count(lo) if t else iter((n,) if n >= lo else ()),
    )


def prefix_tree(prefix: Iterable[int]) -> LazyTree:
    """All nodes comparable with ``prefix``."""
    prefix = as_node(prefix)
    tree = restrict(full_tree(), prefix)
    return _with(tree, recipe={"recipe": "prefix", "node": list(prefix)})


def _with(T: LazyTree, **changes) -> LazyTree:
    from dataclasses import replace

    return replace(T, **changes)


_RESTRICTED_KIND = {
    Kind.COMPLETE_LAVER: Kind.LAVER,
    Kind.COMPLETE_HECHLER: Kind.HECHLER,
}


def restrict(T: LazyTree, tau: Node) -> LazyTree:
    """The subtree of nodes comparable with ``tau``."""
    tau = _require_member(T, tau)
    if not tau:
        return T
    n = len(tau)

    def member(s):
        return comparable(s, tau) and T.member(s)

    def succ_stream(s):
        if len(s) < n:
            return iter((tau[len(s)],)) if is_prefix(s, tau) else iter(())
        return T.succ_stream(s) if is_prefix(tau, s) else iter(())

    def succ_from(s, lo):
        if len(s) < n:
            v = tau[len(s)]
            return iter((v,) if is_prefix(s, tau) and v >= lo else ())
        return T.successors_from(s, lo) if is_prefix(tau, s) else iter(())

    def omega(s):
        return False if len(s) < n else T.declared_omega(s)

    def excluded(s):
        return False if len(s) < n else T.declared_exclusions(s)

    return LazyTree(
        member=member,
        succ_stream=succ_stream,
        kind_claim=_RESTRICTED_KIND.get(T.kind_claim, T.kind_claim),
        recipe={"recipe": "restrict", "tree": dict(T.recipe), "node": list(tau)},
        omega=omega,
        excluded=excluded,
        succ_from=succ_from,
        finitely_branching=T.finitely_branching,
    )


_TRIMMED_KIND = {Kind.LAVER: Kind.COMPLETE_LAVER, Kind.HECHLER: Kind.COMPLETE_HECHLER}


def stem_trim(T: LazyTree, depth_budget: int = 64) -> LazyTree:
    """The tree ``{sigma : stem(T) + sigma in T}``; its stem is empty."""
    s = stem(T, depth_budget)
    if s is None:
        raise BudgetExhausted(f"no stem of {T.recipe} within {depth_budget} levels")
    if not s:
        return T
    return LazyTree(
        member=lambda x: T.member(s + x),
        succ_stream=lambda x: T.succ_stream(s + x),
        kind_claim=_TRIMMED_KIND.get(T.kind_claim, T.kind_claim),
        recipe={"recipe": "stem_trim", "tree": dict(T.recipe)},
        omega=lambda x: T.declared_omega(s + x),
        excluded=lambda x: T.declared_exclusions(s + x),
        succ_from=lambda x, lo: T.successors_from(s + x, lo),
        finitely_branching=T.finitely_branching,
    )
