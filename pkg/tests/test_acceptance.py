"""The eleven acceptance criteria, each checked against an oracle written here.

Results are summarised as one PASS/FAIL line per criterion at the end of the run.
"""
import io
import json
import random
import time
from fractions import Fraction as F
from itertools import islice, product

import pytest

from conftest import criterion
from treeideals.cli import run
from treeideals.families import ad_branch, ad_tree, embed, residue_embed
from treeideals.fusion import (
    complete_laver_decompose,
    dyadic_dense,
    fusion_limit,
    gdelta_construction,
    run_fusion,
    verify_bound,
    verify_conditions,
)
from treeideals.intervals import RationalInterval, clopen, measure, minkowski, normalize
from treeideals.oracles import Outcome, avoid_subtree, cylinder_set, sigma_union_check, verify_witness
from treeideals.suite import grid_measure, run_suite
from treeideals.trees import (
    Kind,
    VerdictStatus,
    classify,
    cylinder_tree,
    full_tree,
    stem,
    successors,
    verdict_for,
)

# --- independent recomputations --------------------------------------------------------


def factor(n):
    """1 + sum over k < n of (n-1)^k, with 0^0 = 1."""
    return 1 + sum((n - 1) ** k for k in range(n))


def swept_measure(right_ends, length):
    """Measure of the union of (b - length, b) by sorting the right ends b.

    Each sorted end adds min(length, gap to the previous end); all integer.
    """
    E = max(e for _, e in right_ends)
    ends = sorted({num << (E - e) for num, e in right_ends})
    lp, lq = length.numerator, length.denominator
    scaled = lp << E  # length * 2^E * lq
    small, big = 0, 1
    for a, b in zip(ends, ends[1:]):
        if (b - a) * lq < scaled:
            small += b - a
        else:
            big += 1
    return F(small, 1 << E) + big * length


def independent_lhs(state):
    I = state.intervals[-1]
    return swept_measure(list(state.covers.right_ends.values()), state.covers.width + I.measure)


def right_ends_match_grid(prev, state):
    """Each recorded right end is the right end of the previous stage's grid node."""
    nodes = prev.grid.materialize()
    for word, (num, e) in state.covers.right_ends.items():
        if F(num, 1 << e) != clopen(nodes[word]).hi:
            return False
    return True


# --- shared runs --------------------------------------------------------------------


@pytest.fixture(scope="module")
def miller_six():
    dense = list(islice(dyadic_dense(), 7))
    intervals = [RationalInterval.centered(d, F(1, 4**n)) for n, d in enumerate(dense)]
    t0 = time.perf_counter()
    states = run_fusion(full_tree(), intervals, "miller")
    certs = [verify_bound(s) for s in states[1:]]
    return states, certs, time.perf_counter() - t0


@pytest.fixture(scope="module")
def gdelta_miller():
    t0 = time.perf_counter()
    res = gdelta_construction(full_tree(), "miller", 8)
    return res, time.perf_counter() - t0


@pytest.fixture(scope="module")
def gdelta_complete():
    t0 = time.perf_counter()
    res = gdelta_construction(full_tree(), "complete-laver", 6, pieces=4)
    return res, time.perf_counter() - t0


# --- criteria -----------------------------------------------------------------------


@criterion(1, "fusion bound certificates, 6-stage Miller, I_n of measure 4^-n")
def test_ac1_fusion_bounds(miller_six):
    states, certs, elapsed = miller_six
    assert elapsed <= 10
    assert [c.stage for c in certs] == [1, 2, 3, 4, 5, 6]
    for s, c in zip(states[1:], certs):
        I = s.intervals[-1]
        d = list(islice(dyadic_dense(), s.n + 1))[-1]
        assert I.measure == F(1, 4**s.n) and (I.lo + I.hi) / 2 == d
        assert c.rhs == factor(s.n) * F(1, 4**s.n)
        assert c.lhs == independent_lhs(s)
        assert isinstance(c.lhs, F) and c.lhs < c.rhs
    for prev, s in zip(states, states[1:]):
        assert right_ends_match_grid(prev, s)
        assert verify_conditions(s).ok
    print(f"AC1 PASS {elapsed:.2f}s")
    return f"{elapsed:.2f}s"


@criterion(2, "G-delta tail bound, Miller, 8 stages")
def test_ac2_gdelta_tails(gdelta_miller):
    res, elapsed = gdelta_miller
    assert elapsed <= 30
    (miller_run,) = res.runs
    states = miller_run.states
    assert states[-1].n == 8
    lhs = {s.n: independent_lhs(s) for s in states[1:]}
    for c in miller_run.bounds:
        assert c.lhs == lhs[c.stage] and c.holds
    for n in range(3, 9):
        assert lhs[n] < F(1, 2**n)
    for n in range(3, 8):
        assert sum(lhs[k] for k in range(n + 1, 9)) <= F(1, 2**n)
    assert res.holds
    for prev, s in zip(states, states[1:6]):
        assert right_ends_match_grid(prev, s)
    print(f"AC2 PASS {elapsed:.2f}s")
    return f"{elapsed:.2f}s"


@criterion(3, "complete-Laver branch, 4 pieces x 6 stages, stems unchanged")
def test_ac3_complete_laver(gdelta_complete):
    res, elapsed = gdelta_complete
    assert elapsed <= 60
    assert [r.piece for r in res.runs] == [0, 1, 2, 3]
    pieces = dict(islice(complete_laver_decompose(full_tree()), 4))
    for r in res.runs:
        states = r.states
        assert states[-1].n == 6
        assert stem(pieces[r.piece], 8) == (r.piece,)
        assert all(stem(s.tree, 16) == (r.piece,) for s in states)
        for c in r.bounds:
            assert c.holds and c.lhs == independent_lhs(states[c.stage])
        assert r.holds
    print(f"AC3 PASS {elapsed:.2f}s")
    return f"{elapsed:.2f}s"


@criterion(4, "fusion grid retention after every run")
def test_ac4_retention(miller_six, gdelta_miller, gdelta_complete):
    runs = [miller_six[0], list(gdelta_miller[0].runs[0].states)]
    runs += [list(r.states) for r in gdelta_complete[0].runs]
    checked = 0
    for states in runs:
        _, rep = fusion_limit(states)
        assert rep.violations == 0
        checked += sum(rep.checked_per_stage)
        final = states[-1]
        # every earlier grid node is still a member of the final tree
        for s in states[:-1]:
            if len(s.grid) <= 60000:
                assert all(final.tree.member(t) for t in s.grid.materialize().values())
    print(f"AC4 PASS {checked} grid nodes")
    return f"{checked} grid nodes, 0 violations"


@criterion(5, "a.d. once split never again, 1000 pairs of length 50")
def test_ac5_once_split():
    rng = random.Random(5)
    T = ad_tree()
    failures = 0
    for _ in range(1000):
        s = tuple(rng.randrange(6) for _ in range(50))
        j = rng.randrange(50)
        t = s[:j] + ((s[j] + rng.randint(1, 5)) % 6,) + tuple(rng.randrange(6) for _ in range(49 - j))
        f, g = ad_branch(T, s), ad_branch(T, t)
        split = next(i for i in range(50) if s[i] != t[i])
        agree = [i for i in range(50) if f[i] == g[i]]
        if agree != list(range(split)):
            failures += 1
    assert failures == 0
    return "0 failures"


@criterion(6, "domination and injectivity, 1000 prefixes of length 30")
def test_ac6_domination():
    rng = random.Random(6)
    T = ad_tree()
    images = {}
    failures = 0
    for _ in range(1000):
        d = tuple(rng.randrange(rng.choice((2, 10, 1000))) for _ in range(30))
        f = embed(T, d)
        if len(f) != 30 or any(f[n] < d[n] for n in range(30)):
            failures += 1
        if images.setdefault(f, d) != d:
            failures += 1
    assert failures == 0
    return f"{len(images)} distinct prefixes, 0 failures"


def random_branch(tree, rng, length):
    node = ()
    for _ in range(length):
        node += (rng.choice(successors(tree, node, 6)),)
    assert tree.member(node)
    return node


@criterion(7, "residue separation across classes 1, 2, 3")
def test_ac7_residues():
    rng = random.Random(7)
    base = ad_tree().lazy()
    trees = {r: residue_embed(base, r) for r in (1, 2, 3)}
    for _ in range(100):
        r1, r2 = rng.sample([1, 2, 3], 2)
        n = rng.randrange(1, 25)
        f, g = random_branch(trees[r1], rng, n), random_branch(trees[r2], rng, n)
        assert all(v % 4 == r1 for v in f) and all(v % 4 == r2 for v in g)
        assert sum(a == b for a, b in zip(f, g)) == 0
    return "100 pairs, 0 agreements"


@criterion(8, "oracle catalog: sigma union, C_0 avoided, C_0 exhausted")
def test_ac8_oracles():
    sig = sigma_union_check(8)
    assert sig.holds and all(w.outcome is Outcome.DISJOINT for w in sig.witnesses)
    assert all(sig.level_cover) and sig.node_union
    C0 = cylinder_set(0)
    rep = avoid_subtree(full_tree(), Kind.COMPLETE_LAVER, C0, 5, 5)
    assert rep.outcome is Outcome.DISJOINT and verify_witness(rep, C0)
    assert all(t[0] != 0 for t in rep.subtree.nodes if t)
    v = verdict_for(classify(rep.tree, 5, 5), Kind.COMPLETE_LAVER)
    assert v.status is VerdictStatus.CONFIRMED
    bad = avoid_subtree(cylinder_tree(0), Kind.LAVER, C0, 5, 5)
    assert bad.outcome is Outcome.EXHAUSTED
    return "all three"


def random_union(rng):
    parts = []
    for _ in range(rng.randint(1, 8)):
        q = rng.randint(1, 64)
        a = rng.randrange(0, 2 * q)
        b = rng.randint(a + 1, 2 * q)
        parts.append(RationalInterval(F(a, q), F(b, q)))
    return normalize(parts)


@criterion(9, "measure oracle equivalence and Minkowski additivity")
def test_ac9_measure():
    rng = random.Random(9)
    for _ in range(200):
        U = random_union(rng)
        assert abs(measure(U) - grid_measure(U.parts, 4096)) <= F(2 * len(U.parts), 4096)
    for _ in range(200):
        A, = random_union(rng).parts[:1]
        I, = random_union(rng).parts[:1]
        assert measure(minkowski(normalize([A]), I)) == A.measure + I.measure
    return "200 + 200 exact"


@criterion(10, "embedding scheme laws, exhaustive to length 4, entries <= 8")
def test_ac10_embedding():
    count = 0
    for k in range(5):
        for tau in product(range(9), repeat=k):
            P = clopen(tau)
            assert P.measure <= F(1, 2**k)
            kids = [clopen(tau + (j,)) for j in range(9)] if k < 4 else []
            for i, A in enumerate(kids):
                assert P.contains(A)
                for B in kids[i + 1:]:
                    assert A.hi <= B.lo or B.hi <= A.lo
            count += 1
    assert count == sum(9**k for k in range(5))
    return f"{count} nodes"


@criterion(11, "determinism of the seeded suite")
def test_ac11_determinism():
    a = json.dumps(run_suite(42), sort_keys=True).encode()
    b = json.dumps(run_suite(42), sort_keys=True).encode()
    assert a == b and json.loads(a)["holds"]
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        assert run(["--json", "suite", "--seed", "42"], buf) == 0
        outs.append(buf.getvalue().encode())
    assert outs[0] == outs[1]
    return f"{len(outs[0])} bytes identical"
