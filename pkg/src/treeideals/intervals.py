"""Exact-rational open intervals, their finite unions, and the clopen embedding.

Cylinders ``[tau]`` are sent to nested open subintervals of (0, 1): inside
``clopen(tau) = (a, b)`` of length ``l`` the k-th block is
``(a + l(1 - 2^-k), a + l(1 - 2^-(k+1)))`` and ``clopen(tau + (k,))`` is the
middle half of that block.  All endpoints are dyadic, so the hot paths run
on integers scaled by a power of two.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DomainError


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise DomainError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def frac_decimal(x: Fraction, digits: int = 6) -> str:
    """A rounded rendering, marked as approximate."""
    return f"~{float(x):.{digits}f}"


@dataclass(frozen=True, order=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_fraction(self.lo), as_fraction(self.hi)
        if not lo < hi:
            raise DomainError(f"empty interval ({lo}, {hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def centered(cls, center, length) -> "RationalInterval":
        c, l = as_fraction(center), as_fraction(length)
        return cls(c - l / 2, c + l / 2)

    @property
    def measure(self) -> Fraction:
        return self.hi - self.lo

    def __add__(self, other: "RationalInterval") -> "RationalInterval":
        return RationalInterval(self.lo + other.lo, self.hi + other.hi)

    def contains(self, other: "RationalInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def to_json(self) -> list:
        return [frac_str(self.lo), frac_str(self.hi)]

    @classmethod
    def from_json(cls, pair) -> "RationalInterval":
        return cls(as_fraction(pair[0]), as_fraction(pair[1]))

    def __repr__(self):
        return f"({self.lo}, {self.hi})"


@dataclass(frozen=True)
class IntervalUnion:
    """Pairwise disjoint, non-touching open intervals in increasing order."""

    parts: tuple = ()

    def __post_init__(self):
        parts = tuple(self.parts)
        for a, b in zip(parts, parts[1:]):
            if not a.hi < b.lo:
                raise DomainError("IntervalUnion parts must be separated; use normalize()")
        object.__setattr__(self, "parts", parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    @property
    def measure(self) -> Fraction:
        return sum((p.measure for p in self.parts), Fraction(0))

    def covers(self, iv: RationalInterval) -> bool:
        """``iv`` lies inside a single part (parts are separated, so that is the only way)."""
        return any(p.contains(iv) for p in self.parts)

    def to_json(self) -> dict:
        return {"parts": [p.to_json() for p in self.parts]}

    @classmethod
    def from_json(cls, data) -> "IntervalUnion":
        return normalize(RationalInterval.from_json(p) for p in data["parts"])


def normalize(raw: Iterable[RationalInterval]) -> IntervalUnion:
    merged: list = []
    for iv in sorted(raw):
        if merged and iv.lo <= merged[-1][1]:
            if iv.hi > merged[-1][1]:
                merged[-1][1] = iv.hi
        else:
            merged.append([iv.lo, iv.hi])
    return IntervalUnion(tuple(RationalInterval(lo, hi) for lo, hi in merged))


def measure(U) -> Fraction:
    if isinstance(U, RationalInterval):
        return U.measure
    return U.measure


def minkowski(U: IntervalUnion, I: RationalInterval) -> IntervalUnion:
    return normalize(p + I for p in U.parts)


def minkowski_union(U: IntervalUnion, V: IntervalUnion) -> IntervalUnion:
    """Union-plus-union sum, folded over the parts of ``V``."""
    return normalize(p + q for q in V.parts for p in U.parts)


# --- the embedding ------------------------------------------------------------------
#
# A dyadic interval is kept as (lo, length, e), meaning (lo/2^e, (lo+length)/2^e).


@lru_cache(maxsize=1 << 16)
def _dyadic(tau: tuple) -> tuple:
    if not tau:
        return (0, 1, 0)
    lo, ln, e = _dyadic(tau[:-1])
    return _child(lo, ln, e, tau[-1])


def _child(lo: int, ln: int, e: int, k: int) -> tuple:
    s = k + 3
    block_lo = (lo << s) + (ln << s) - (ln << 3)
    return (block_lo + ln, 2 * ln, e + s)


def dyadic_clopen(tau) -> tuple:
    """``(lo, length, e)`` with clopen(tau) = (lo/2^e, (lo + length)/2^e)."""
    return _dyadic(tuple(tau))


def child_dyadic(parent: tuple, k: int) -> tuple:
    return _child(*parent, k)


def clopen(tau) -> RationalInterval:
    lo, ln, e = _dyadic(tuple(tau))
    d = 1 << e
    return RationalInterval(Fraction(lo, d), Fraction(lo + ln, d))


def right_endpoint(tau) -> Fraction:
    lo, ln, e = _dyadic(tuple(tau))
    return Fraction(lo + ln, 1 << e)


def first_inside_dyadic(ln: int, e: int, width: Fraction) -> int:
    """Least k with clopen(tau + (k,)) inside (b - width, b), b the right end of clopen(tau).

    The child's left end is ``b - 7 l 2^-(k+3)``, so we need
    ``7 l 2^-(k+3) <= width`` with ``l = ln / 2^e``.
    """
    width = as_fraction(width)
    if width <= 0:
        raise DomainError("width must be positive")
    # 7 ln q <= p 2^(e+k+3)  with width = p/q
    x = 7 * ln * width.denominator
    y = width.numerator << e
    c = -(-x // y)  # ceil(x / y): need 2^(k+3) >= c
    t = (c - 1).bit_length()
    return max(0, t - 3)


def first_inside(tau, width) -> int:
    _, ln, e = _dyadic(tuple(tau))
    return first_inside_dyadic(ln, e, width)


def accumulation_interval(tau, width) -> RationalInterval:
    """``(b - width, b)``: it contains clopen(tau + (k,)) for every k >= first_inside."""
    b = right_endpoint(tau)
    return RationalInterval(b - as_fraction(width), b)


def cover(F, frontier: int) -> IntervalUnion:
    """Clopens of the level-``frontier`` nodes of a finite window, merged."""
    if frontier < 0 or frontier > F.depth:
        raise DomainError(f"frontier {frontier} outside 0..{F.depth}")
    return normalize(clopen(t) for t in F.nodes if len(t) == frontier)


# --- fast measure of equal-length families ------------------------------------------


def union_measure_of_shifts(right_ends: Sequence[tuple], length: Fraction) -> Fraction:
    """Measure of the union of ``(r - length, r)`` over dyadic right ends ``r``.

    ``right_ends`` holds pairs ``(num, e)`` meaning ``num / 2^e``.  Adding the
    same interval to every member translates the union, so callers pass only
    the right ends and the common length.
    """
    if not right_ends:
        return Fraction(0)
    length = as_fraction(length)
    E = max(e for _, e in right_ends)
    q = length.denominator
    L = length.numerator << E
    pts = sorted({(num << (E - e)) * q for num, e in right_ends})
    total = L
    for a, b in zip(pts, pts[1:]):
        gap = b - a
        total += gap if gap < L else L
    return Fraction(total, q << E)
