"""Eventually different functions, the almost-disjoint tree, and the dominating embedding.

Functions in omega^omega are handled through finite prefixes (plain tuples).
The partition of omega is ``A_m = {2^i (2m + 1) - 1 : i in omega}``: block
and position of ``n`` are the odd part and the 2-adic valuation of ``n + 1``.
A node of the a.d. tree ending in ``v`` takes its children from ``A_v``, so
every value names its own block and distinct nodes of one level (which end
in distinct values) draw children from disjoint blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Iterable, Optional, Sequence

from .errors import DomainError
from .trees import Kind, LazyTree, as_node


def as_prefix(values: Iterable[int]) -> tuple:
    return as_node(values)


def ed_status(f: Sequence[int], g: Sequence[int]) -> tuple:
    """``(agreements, last agreeing index or None)`` on the common domain."""
    hits = [i for i, (a, b) in enumerate(zip(f, g)) if a == b]
    return len(hits), (hits[-1] if hits else None)


def common_prefix_length(f: Sequence[int], g: Sequence[int]) -> int:
    n = 0
    for a, b in zip(f, g):
        if a != b:
            break
        n += 1
    return n


@dataclass(frozen=True)
class DyadicPartition:
    """``A_m = {2^i (2m+1) - 1}``; ``enum(m, i)`` is the i-th element of ``A_m``."""

    def enum(self, m: int, i: int) -> int:
        if m < 0 or i < 0:
            raise DomainError("block and position must be natural numbers")
        return ((2 * m + 1) << i) - 1

    def index_of(self, n: int) -> int:
        if n < 0:
            raise DomainError("natural numbers only")
        x = n + 1
        return (x & -x).bit_length() - 1

    def block_of(self, n: int) -> int:
        return ((n + 1) >> self.index_of(n)) // 2

    def locate(self, n: int) -> tuple:
        return self.block_of(n), self.index_of(n)

    def to_json(self) -> dict:
        return {"partition": "dyadic", "enum": "2^i(2m+1)-1"}


def make_partition() -> DyadicPartition:
    return DyadicPartition()


@dataclass(frozen=True)
class AdTree:
    """The almost-disjoint tree: the root has every successor; ``s + (v,)`` has children ``A_v``."""

    partition: DyadicPartition = DyadicPartition()

    def level_index(self, node: Sequence[int]) -> int:
        """Position of a nonempty node in the enumeration of its level.

        Values at one level are pairwise distinct and exhaust omega, so the
        last value already is a bijective index.
        """
        if not node:
            raise DomainError("the root is alone at its level")
        return node[-1]

    def node_at(self, level: int, index: int) -> tuple:
        """Inverse of ``level_index`` on level ``level`` (length ``level + 1``)."""
        if level < 0 or index < 0:
            raise DomainError("level and index must be natural numbers")
        out = [index]
        for _ in range(level):
            out.append(self.partition.block_of(out[-1]))
        return tuple(reversed(out))

    def contains(self, node: Sequence[int]) -> bool:
        p = self.partition
        return all(p.block_of(b) == a for a, b in zip(node, node[1:]))

    def children(self, node: Sequence[int]):
        if not node:
            return count()
        m = node[-1]
        return (self.partition.enum(m, i) for i in count())

    def lazy(self) -> LazyTree:
        p = self.partition

        def succ_from(t, lo):
            if not t:
                return count(lo)
            m = t[-1]
            i = 0
            while p.enum(m, i) < lo:
                i += 1
            return (p.enum(m, j) for j in count(i))

        return LazyTree(
            member=lambda t: all(v >= 0 for v in t) and self.contains(t),
            succ_stream=self.children,
            kind_claim=Kind.COMPLETE_LAVER,
            recipe={"recipe": "adtree"},
            omega=lambda t: True,
            excluded=lambda t: frozenset() if not t else False,
            succ_from=succ_from,
        )


def ad_tree() -> AdTree:
    return AdTree()


def ad_branch(T: AdTree, selector: Sequence[int]) -> tuple:
    """Take the ``selector[n]``-th child at level ``n``."""
    selector = as_prefix(selector)
    out: list = []
    for i in selector:
        out.append(i if not out else T.partition.enum(T.level_index(out), i))
    return tuple(out)


def embed(T: AdTree, d: Sequence[int]) -> tuple:
    """The image branch of ``d``: start at ``(d(0),)``, then child ``d(n+1)`` of the current node.

    Each step picks ``enum(m, d(n+1)) >= d(n+1)``, so the image dominates ``d``.
    """
    return ad_branch(T, d)


def scale4(f: Sequence[int]) -> tuple:
    return tuple(4 * v for v in as_prefix(f))


_RESIDUE_KIND = {Kind.HECHLER: Kind.LAVER, Kind.COMPLETE_HECHLER: Kind.COMPLETE_LAVER}


def residue_embed(T: LazyTree, r: int) -> LazyTree:
    """The image of ``T`` under ``n -> 4n + r`` applied to every entry.

    Successor structure is order-isomorphic, so Sacks, Miller, Laver and
    their complete variants carry over; co-finite successor sets do not
    (the other residues become infinitely many gaps), so a Hechler claim
    is weakened to Laver.
    """
    if r not in (1, 2, 3):
        raise DomainError("residue must be 1, 2 or 3")

    def back(t):
        return tuple((v - r) // 4 for v in t)

    def member(t):
        return all(v % 4 == r and v >= r for v in t) and T.member(back(t))

    def succ_from(t, lo):
        start = max(0, -(-(lo - r) // 4))
        return (4 * v + r for v in T.successors_from(back(t), start))

    om = T.declared_omega
    return LazyTree(
        member=member,
        succ_stream=lambda t: (4 * v + r for v in T.succ_stream(back(t))),
        kind_claim=_RESIDUE_KIND.get(T.kind_claim, T.kind_claim),
        recipe={"recipe": "residue", "r": r, "tree": dict(T.recipe)},
        omega=lambda t: om(back(t)),
        excluded=lambda t: False,
        succ_from=succ_from,
        finitely_branching=T.finitely_branching,
    )


def finite_modify(d: Sequence[int], i: int, v: int) -> tuple:
    """``d`` with position ``i`` changed to ``v``."""
    d = as_prefix(d)
    if not 0 <= i < len(d):
        raise DomainError(f"index {i} outside the prefix of length {len(d)}")
    if v < 0:
        raise DomainError("values must be natural numbers")
    if d[i] == v:
        raise DomainError("finite_modify must change the value")
    return d[:i] + (v,) + d[i + 1 :]


def escapes(T: LazyTree, d: Sequence[int], i: int, v: int) -> Optional[bool]:
    """Whether ``finite_modify(d, i, v)`` leaves ``T`` at position ``i``.

    None when ``d`` itself is not in ``T`` up to ``i``.
    """
    x = finite_modify(d, i, v)
    if not T.member(tuple(d[:i])):
        return None
    return not T.member(x[: i + 1])
