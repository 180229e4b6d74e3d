"""Seeded property trials over every module, with a JSON-ready summary.

Each property draws its inputs from its own ``random.Random`` derived from the
seed and the property name, so results do not depend on execution order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .families import (
    ad_branch,
    ad_tree,
    common_prefix_length,
    ed_status,
    embed,
    finite_modify,
    make_partition,
    residue_embed,
    scale4,
)
from .fusion import base_certificate, dyadic_dense, fusion_limit, run_fusion, verify_bound, verify_conditions
from .intervals import RationalInterval, clopen, measure, minkowski, normalize
from .oracles import (
    IN,
    OUT,
    Outcome,
    avoid_subtree,
    cone,
    cylinder_set,
    sigma_union_check,
    verify_witness,
)
from .trees import (
    Kind,
    VerdictStatus,
    classify,
    cylinder_tree,
    full_tree,
    prefix_tree,
    stem,
    stem_trim,
    truncate,
)


@dataclass
class PropertyResult:
    name: str
    trials: int = 0
    failures: int = 0
    example: object = None

    def check(self, ok: bool, example=None):
        self.trials += 1
        if not ok:
            self.failures += 1
            if self.example is None:
                self.example = example

    @property
    def holds(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {"name": self.name, "trials": self.trials, "failures": self.failures,
                "example": self.example, "holds": self.holds}


# --- the grid oracle ----------------------------------------------------------------


def grid_measure(intervals, resolution: int) -> Fraction:
    """Count grid cells of width 1/resolution that lie inside some interval.

    Brute force over a boolean array, independent of ``normalize``.
    """
    if not intervals:
        return Fraction(0)
    lo = min(iv.lo for iv in intervals)
    hi = max(iv.hi for iv in intervals)
    start = int(np.floor(lo * resolution))
    stop = int(np.ceil(hi * resolution))
    cells = np.arange(start, stop, dtype=np.int64)
    inside = np.zeros(cells.shape, dtype=bool)
    for iv in intervals:
        # cell [c, c+1]/R lies in [lo, hi]  iff  ceil(lo R) <= c <= floor(hi R) - 1
        a, b = iv.lo * resolution, iv.hi * resolution
        first = -(-a.numerator // a.denominator)
        last = b.numerator // b.denominator - 1
        inside |= (cells >= first) & (cells <= last)
    return Fraction(int(inside.sum()), resolution)


def random_interval(rng: random.Random, denom: int, span: int = 1) -> RationalInterval:
    q = rng.randint(1, denom)
    a = rng.randint(0, span * q - 1)
    b = rng.randint(a + 1, span * q)
    return RationalInterval(Fraction(a, q), Fraction(b, q))


# --- properties ---------------------------------------------------------------------


def prop_measure_oracle(rng, trials):
    res = PropertyResult("measure-vs-grid-oracle")
    for _ in range(trials):
        raw = [random_interval(rng, 64) for _ in range(rng.randint(1, 6))]
        U = normalize(raw)
        approx = grid_measure(raw, 4096)
        res.check(abs(U.measure - approx) <= Fraction(2 * len(raw), 4096),
                  [iv.to_json() for iv in raw])
    return res


def prop_minkowski_additive(rng, trials):
    res = PropertyResult("minkowski-single-interval-additivity")
    for _ in range(trials):
        A, I = random_interval(rng, 97, 3), random_interval(rng, 97, 3)
        S = minkowski(normalize([A]), I)
        res.check(measure(S) == A.measure + I.measure, [A.to_json(), I.to_json()])
    return res


def prop_normalize_subadditive(rng, trials):
    res = PropertyResult("normalize-subadditive")
    for _ in range(trials):
        raw = [random_interval(rng, 32) for _ in range(rng.randint(0, 5))]
        total = sum((iv.measure for iv in raw), Fraction(0))
        U = normalize(raw)
        disjoint = all(a.hi <= b.lo or b.hi <= a.lo for i, a in enumerate(raw) for b in raw[i + 1:])
        res.check(U.measure <= total and (U.measure == total) == disjoint, [iv.to_json() for iv in raw])
    return res


def prop_embedding_laws(rng, trials):
    res = PropertyResult("clopen-nesting-disjointness-shrinking")
    for _ in range(trials):
        tau = tuple(rng.randint(0, 8) for _ in range(rng.randint(0, 4)))
        k, j = rng.sample(range(9), 2)
        P, A, B = clopen(tau), clopen(tau + (k,)), clopen(tau + (j,))
        ok = P.contains(A) and (A.hi <= B.lo or B.hi <= A.lo)
        ok = ok and P.measure <= Fraction(1, 2 ** len(tau))
        res.check(ok, list(tau))
    return res


def prop_truncation(rng, trials):
    res = PropertyResult("truncate-prefix-closed-and-monotone")
    trees = [full_tree(), cylinder_tree(2), prefix_tree((1, 3)), ad_tree().lazy()]
    for _ in range(trials):
        T = rng.choice(trees)
        d, w = rng.randint(0, 3), rng.randint(1, 3)
        F, G = truncate(T, d, w), truncate(T, d + rng.randint(0, 1), w + rng.randint(0, 1))
        res.check(F.is_prefix_closed() and F.issubset(G), [T.recipe, d, w])
    return res


def prop_classify_stem(rng, trials):
    res = PropertyResult("stem-restrict-trim-coherence")
    for _ in range(trials):
        tau = tuple(rng.randint(0, 5) for _ in range(rng.randint(0, 3)))
        R = prefix_tree(tau)
        s = stem(R, 16)
        trimmed = stem_trim(R)
        ok = s == tau and stem(trimmed, 16) == () and truncate(trimmed, 2, 3) == truncate(full_tree(), 2, 3)
        verdicts = classify(R, 3, 3)
        ok = ok and all(not (v.status is VerdictStatus.REFUTED and v.witness is None) for v in verdicts)
        res.check(ok, list(tau))
    return res


def prop_partition(rng, trials):
    res = PropertyResult("partition-laws")
    p = make_partition()
    for _ in range(trials):
        m, i = rng.randint(0, 500), rng.randint(0, 40)
        n = rng.randint(0, 10**6)
        ok = p.block_of(p.enum(m, i)) == m and p.index_of(p.enum(m, i)) == i
        ok = ok and p.enum(m, i) < p.enum(m, i + 1) and p.enum(m, i) >= i
        ok = ok and p.enum(p.block_of(n), p.index_of(n)) == n
        res.check(ok, [m, i, n])
    return res


def prop_once_split(rng, trials, length=50):
    res = PropertyResult("ad-once-split-never-again")
    T = ad_tree()
    for _ in range(trials):
        s = [rng.randint(0, 9) for _ in range(length)]
        t = list(s)
        j = rng.randrange(length)
        t[j] = (s[j] + rng.randint(1, 9)) % 10
        for i in range(j + 1, length):
            t[i] = rng.randint(0, 9)
        f, g = ad_branch(T, s), ad_branch(T, t)
        agree, last = ed_status(f, g)
        res.check(agree == j == common_prefix_length(f, g), [s, t])
    return res


def prop_domination(rng, trials, length=30):
    res = PropertyResult("embed-dominates-and-injective")
    T = ad_tree()
    seen = {}
    for _ in range(trials):
        d = tuple(rng.randint(0, 20) for _ in range(length))
        f = embed(T, d)
        other = seen.setdefault(f, d)
        ok = all(a >= b for a, b in zip(f, d)) and len(f) == len(d) and other == d
        ok = ok and all(a >= b for a, b in zip(scale4(f), d))
        res.check(ok, list(d))
    return res


def prop_residue(rng, trials, length=12):
    res = PropertyResult("residue-separation")
    trees = {r: residue_embed(full_tree(), r) for r in (1, 2, 3)}
    for _ in range(trials):
        r1, r2 = rng.sample((1, 2, 3), 2)
        f = tuple(4 * rng.randint(0, 50) + r1 for _ in range(length))
        g = tuple(4 * rng.randint(0, 50) + r2 for _ in range(length))
        ok = trees[r1].member(f) and trees[r2].member(g) and ed_status(f, g)[0] == 0
        res.check(ok, [list(f), list(g)])
    return res


def prop_finite_modify(rng, trials):
    res = PropertyResult("finite-modify-escapes")
    T = cylinder_tree(0)
    for _ in range(trials):
        d = (0,) + tuple(rng.randint(0, 9) for _ in range(rng.randint(0, 8)))
        x = finite_modify(d, 0, rng.randint(1, 9))
        ok = ed_status(x, d)[0] == len(d) - 1 and not T.member(x[:1])
        res.check(ok, list(d))
    return res


def prop_prefix_sets(rng, trials):
    res = PropertyResult("prefix-set-monotone-coherence")
    for _ in range(trials):
        tau = tuple(rng.randint(0, 3) for _ in range(rng.randint(1, 3)))
        A = cone(tau) | ~cylinder_set(rng.randint(0, 3))
        s = tuple(rng.randint(0, 3) for _ in range(rng.randint(0, 4)))
        d, k = A.decide(s), rng.randint(0, 5)
        child = A.decide(s + (k,))
        ok = d not in (IN, OUT) or child is d
        ok = ok and A.decide_child(s, k) is child
        res.check(ok, [list(tau), list(s), k])
    return res


def prop_oracle_cylinders(rng, trials):
    res = PropertyResult("cylinder-avoidance")
    for _ in range(trials):
        n = rng.randint(0, 6)
        rep = avoid_subtree(full_tree(), Kind.COMPLETE_LAVER, cylinder_set(n), 3, 3)
        none = avoid_subtree(cylinder_tree(n), Kind.LAVER, cylinder_set(n), 3, 3)
        ok = rep.outcome is Outcome.DISJOINT and verify_witness(rep, cylinder_set(n))
        ok = ok and none.outcome is Outcome.EXHAUSTED
        res.check(ok, n)
    return res


def prop_small_fusion(rng, trials):
    res = PropertyResult("fusion-certificates-small")
    dense = list(zip(range(5), dyadic_dense()))
    for _ in range(max(1, trials // 20)):
        mode = rng.choice(["miller", "laver"])
        offs = rng.randint(0, 3)
        ints = [RationalInterval.centered(d, Fraction(1, 4 ** (k + offs))) for k, d in dense]
        states = run_fusion(full_tree(), ints, mode)
        ok = base_certificate(states[0]).holds and all(verify_bound(s).holds for s in states[1:])
        ok = ok and all(verify_conditions(s).ok for s in states)
        _, report = fusion_limit(states)
        res.check(ok and report.violations == 0, [mode, offs])
    return res


PROPERTIES = (
    prop_measure_oracle,
    prop_minkowski_additive,
    prop_normalize_subadditive,
    prop_embedding_laws,
    prop_truncation,
    prop_classify_stem,
    prop_partition,
    prop_once_split,
    prop_domination,
    prop_residue,
    prop_finite_modify,
    prop_prefix_sets,
    prop_oracle_cylinders,
    prop_small_fusion,
)


def exhaustive_embedding_laws(max_len: int = 4, max_entry: int = 8) -> PropertyResult:
    """Nesting, disjointness and shrinking on every node with the given bounds."""
    res = PropertyResult("clopen-laws-exhaustive")
    for k in range(max_len + 1):
        for tau in product(range(max_entry + 1), repeat=k):
            P = clopen(tau)
            ok = P.measure <= Fraction(1, 2**k)
            if k:
                parent = clopen(tau[:-1])
                ok = ok and parent.contains(P) and P.lo > parent.lo and P.hi < parent.hi
                sib = clopen(tau[:-1] + (tau[-1] + 1,))
                ok = ok and P.hi < sib.lo
            res.check(ok, list(tau))
    return res


def run_suite(seed: int = 0, trials: int = 100) -> dict:
    results = []
    for prop in PROPERTIES:
        rng = random.Random(f"{seed}:{prop.__name__}")
        results.append(prop(rng, trials))
    results.append(exhaustive_embedding_laws(2, 8))
    sig = sigma_union_check(4)
    catalog = PropertyResult("sigma-union-catalog")
    catalog.check(sig.holds, 4)
    results.append(catalog)
    return {
        "seed": seed,
        "trials": trials,
        "properties": [r.to_json() for r in results],
        "holds": all(r.holds for r in results),
    }
