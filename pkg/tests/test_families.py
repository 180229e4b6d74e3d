import pytest
from hypothesis import given, strategies as st

from treeideals.errors import DomainError
from treeideals.families import (
    ad_branch,
    ad_tree,
    common_prefix_length,
    ed_status,
    embed,
    escapes,
    finite_modify,
    make_partition,
    residue_embed,
    scale4,
)
from treeideals.trees import (
    Kind,
    VerdictStatus,
    classify,
    cylinder_tree,
    full_tree,
    successors,
    truncate,
    verdict_for,
)

P = make_partition()
T = ad_tree()
selectors = st.lists(st.integers(0, 9), max_size=30).map(tuple)


def test_ed_status_examples():
    assert ed_status((1, 2, 3), (1, 5, 3)) == (2, 2)
    assert ed_status((0, 0), (1, 1)) == (0, None)
    assert ed_status((), (4,)) == (0, None)


def test_partition_examples():
    assert [P.enum(0, i) for i in range(5)] == [0, 1, 3, 7, 15]
    assert [P.enum(1, i) for i in range(4)] == [2, 5, 11, 23]
    assert P.block_of(11) == 1 and P.index_of(11) == 2
    assert P.block_of(0) == 0 and P.block_of(2) == 1 and P.block_of(4) == 2


@given(st.integers(0, 10**4), st.integers(0, 60))
def test_partition_laws(m, i):
    n = P.enum(m, i)
    assert P.locate(n) == (m, i)
    assert P.enum(m, i + 1) > n >= i


@given(st.integers(0, 10**9))
def test_partition_covers(n):
    m, i = P.locate(n)
    assert P.enum(m, i) == n


def test_blocks_disjoint_on_a_window():
    seen = {}
    for m in range(40):
        for i in range(12):
            n = P.enum(m, i)
            assert n not in seen
            seen[n] = m
    assert set(range(40)) <= set(seen)


def test_tree_levels():
    assert successors(T.lazy(), (), 2) == [P.enum(0, 0), P.enum(0, 1)]
    assert truncate(T.lazy(), 2, 2).sorted_nodes() == [(), (0,), (1,), (0, 0), (0, 1), (1, 2), (1, 5)]
    for level in range(3):
        for idx in range(20):
            node = T.node_at(level, idx)
            assert len(node) == level + 1 and T.contains(node) and T.level_index(node) == idx


@given(st.lists(st.integers(0, 30), min_size=1, max_size=4).map(tuple),
       st.lists(st.integers(0, 30), min_size=1, max_size=4).map(tuple))
def test_same_level_children_disjoint(a, b):
    s, t = ad_branch(T, a), ad_branch(T, b[: len(a)] + a[len(b):])
    if len(s) == len(t) and s != t:
        kids_s = {P.enum(s[-1], i) for i in range(8)}
        kids_t = {P.enum(t[-1], i) for i in range(8)}
        assert not kids_s & kids_t


def test_branch_examples():
    assert ad_branch(T, (0, 0, 0)) == (0, P.enum(0, 0), P.enum(0, 0))
    assert ad_branch(T, (2, 0)) == (2, P.enum(2, 0))
    assert ad_branch(T, ()) == ()


@given(selectors, selectors)
def test_once_split_never_again(s, t):
    n = min(len(s), len(t))
    s, t = s[:n], t[:n]
    f, g = ad_branch(T, s), ad_branch(T, t)
    agree, last = ed_status(f, g)
    j = common_prefix_length(s, t)
    assert agree == j == common_prefix_length(f, g)
    assert last == (j - 1 if j else None)


@given(selectors)
def test_embed_dominates(d):
    f = embed(T, d)
    assert len(f) == len(d) and all(a >= b for a, b in zip(f, d))
    assert T.contains(f) and T.lazy().member(f)


@given(selectors, selectors)
def test_embed_injective(d, e):
    n = min(len(d), len(e))
    if d[:n] != e[:n]:
        assert embed(T, d[:n]) != embed(T, e[:n])


def test_embed_minimal_branch():
    assert embed(T, (0, 0, 0)) == (0, 0, 0)
    assert embed(T, (1, 0, 0)) == (1, P.enum(1, 0), P.enum(P.enum(1, 0), 0))


def test_scale4():
    assert scale4((0, 1, 2)) == (0, 4, 8)


@given(selectors)
def test_scale4_residue_and_domination(d):
    f = embed(T, d)
    g = scale4(f)
    assert all(v % 4 == 0 for v in g)
    assert all(a >= b for a, b in zip(g, f)) and all(a >= b for a, b in zip(g, d))


def test_residue_full_tree():
    R = residue_embed(full_tree(), 1)
    assert all(v % 4 == 1 for t in truncate(R, 3, 3).nodes for v in t)
    assert R.kind_claim is Kind.COMPLETE_LAVER
    assert verdict_for(classify(R, 4, 4), Kind.COMPLETE_LAVER).status is VerdictStatus.CONFIRMED


def test_residue_classify_matches_except_hechler():
    base = classify(cylinder_tree(0), 5, 5)
    image = classify(residue_embed(cylinder_tree(0), 3), 5, 5)
    for a, b in zip(base, image):
        if a.kind in (Kind.HECHLER, Kind.COMPLETE_HECHLER):
            continue
        assert a.status is b.status
    # the other residues are infinitely many gaps, so Hechler cannot survive
    assert verdict_for(image, Kind.HECHLER).status is VerdictStatus.REFUTED


@given(st.sampled_from([(1, 2), (1, 3), (2, 3)]), selectors, selectors)
def test_residue_separation(rs, s, t):
    r1, r2 = rs
    A, B = residue_embed(T.lazy(), r1), residue_embed(T.lazy(), r2)
    f = tuple(4 * v + r1 for v in ad_branch(T, s))
    g = tuple(4 * v + r2 for v in ad_branch(T, t))
    assert A.member(f) and B.member(g)
    assert ed_status(f, g)[0] == 0


def test_residue_rejects_zero():
    with pytest.raises(DomainError):
        residue_embed(full_tree(), 0)


def test_finite_modify_examples():
    assert finite_modify((3, 3, 3), 1, 7) == (3, 7, 3)
    assert ed_status(finite_modify((3, 3, 3), 1, 7), (3, 3, 3))[0] == 2
    with pytest.raises(DomainError):
        finite_modify((3, 3, 3), 1, 3)
    with pytest.raises(DomainError):
        finite_modify((3,), 1, 0)


def test_escape():
    C = cylinder_tree(0)
    assert escapes(C, (0, 5, 5), 0, 4) is True
    assert escapes(C, (0, 5, 5), 1, 4) is False
