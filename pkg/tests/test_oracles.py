import json

import pytest
from hypothesis import given, strategies as st

from treeideals.errors import DomainError
from treeideals.oracles import (
    IN,
    OUT,
    UND,
    Outcome,
    avoid_subtree,
    bernstein_check,
    cone,
    cylinder,
    cylinder_set,
    empty,
    everything,
    measurability_witness,
    sigma_union_check,
    verify_witness,
)
from treeideals.recipes import parse_set, parse_tree
from treeideals.trees import (
    Kind,
    VerdictStatus,
    binary_tree,
    classify,
    cylinder_tree,
    full_tree,
    truncate,
    verdict_for,
)

small_nodes = st.lists(st.integers(0, 3), max_size=4).map(tuple)


def test_cylinder_decisions():
    T, C = cylinder(0)
    assert C.decide((0, 5)) is IN
    assert C.decide((1,)) is OUT
    assert C.decide(()) is UND
    assert truncate(T, 2, 2) == truncate(cylinder_tree(0), 2, 2)


set_specs = st.sampled_from(
    ["cylinder:0", "cone:1,2", "~cylinder:2", "cone:0+cone:1", "~cone:1,1+cylinder:3", "all", "empty"]
)


@given(set_specs, small_nodes, st.integers(0, 4))
def test_monotone_coherence(spec, s, k):
    A = parse_set(spec)
    d = A.decide(s)
    if d is not UND:
        assert A.decide(s + (k,)) is d
    assert A.decide_child(s, k) is A.decide(s + (k,))


def test_avoid_full_tree_complete_laver():
    rep = avoid_subtree(full_tree(), Kind.COMPLETE_LAVER, cylinder_set(0), 5, 5)
    assert rep.outcome is Outcome.DISJOINT
    assert rep.subtree.children(()) == [1, 2, 3, 4, 5]
    assert verdict_for(classify(rep.tree, 5, 5), Kind.COMPLETE_LAVER).status is VerdictStatus.CONFIRMED
    assert verify_witness(rep, cylinder_set(0))


@pytest.mark.parametrize("depth,width", [(1, 2), (3, 3), (6, 4)])
def test_avoid_inside_cylinder_exhausts(depth, width):
    rep = avoid_subtree(cylinder_tree(0), Kind.LAVER, cylinder_set(0), depth, width)
    assert rep.outcome is Outcome.EXHAUSTED and rep.subtree is None


def test_avoid_sacks_two_cones():
    A = cone((0,)) | cone((1,))
    rep = avoid_subtree(full_tree(), Kind.SACKS, A, 4, 4)
    assert rep.outcome is Outcome.DISJOINT
    assert all(t[0] >= 2 for t in rep.subtree.nodes if t)
    assert verify_witness(rep, A)


def test_avoid_falls_back_to_restriction():
    # the drop-witness keeps root successor 0, which is finite here; restrict instead
    A = cone((1,)) | cone((0, 0))
    rep = avoid_subtree(full_tree(), Kind.LAVER, A, 3, 3)
    assert rep.outcome is Outcome.DISJOINT and verify_witness(rep, A)


def test_avoid_kind_mismatch():
    with pytest.raises(DomainError):
        avoid_subtree(binary_tree(), Kind.MILLER, cylinder_set(0), 3, 3)
    with pytest.raises(DomainError):
        avoid_subtree(cylinder_tree(0), Kind.COMPLETE_LAVER, cylinder_set(1), 3, 3)


def test_measurability_examples():
    rep = measurability_witness(full_tree(), Kind.LAVER, cylinder_set(3), 4, 4)
    assert rep.outcome is Outcome.DISJOINT and 3 not in rep.subtree.children(())
    full = full_tree()
    rep = measurability_witness(full, Kind.LAVER, everything(), 3, 3)
    assert rep.outcome is Outcome.INSIDE and rep.tree is full
    rep = measurability_witness(full, Kind.LAVER, empty(), 3, 3)
    assert rep.outcome is Outcome.DISJOINT and rep.tree is full


def test_measurability_inside_polarity():
    # inside C_0 the only subtrees are inside
    rep = measurability_witness(cylinder_tree(0), Kind.LAVER, cylinder_set(0), 3, 3)
    assert rep.outcome is Outcome.INSIDE and verify_witness(rep, cylinder_set(0))


@given(set_specs, st.sampled_from(["full", "cylinder:1", "prefix:2,0"]), st.sampled_from(list(Kind)[:3]))
def test_witness_soundness_and_kind(spec, tree, kind):
    A, P = parse_set(spec), parse_tree(tree)
    rep = measurability_witness(P, kind, A, 3, 3)
    assert verify_witness(rep, A)
    if rep.found:
        assert verdict_for(classify(rep.tree, 3, 3), kind).status is not VerdictStatus.REFUTED


def test_report_json():
    rep = avoid_subtree(full_tree(), Kind.COMPLETE_LAVER, cylinder_set(0), 2, 2)
    data = json.loads(json.dumps(rep.to_json()))
    assert data["outcome"] == "disjoint-witness"
    assert data["subtree"]["nodes"][:3] == [[], [1], [2]]
    assert data["recipe"]["tree"] == {"recipe": "full"}


@pytest.mark.parametrize("N", [1, 4, 8])
def test_sigma_union(N):
    rep = sigma_union_check(N)
    assert rep.holds and len(rep.witnesses) == N


@given(st.integers(0, 9), st.integers(2, 4))
def test_cylinder_laws(n, width):
    assert avoid_subtree(full_tree(), Kind.COMPLETE_LAVER, cylinder_set(n), 2, width).found
    assert not avoid_subtree(cylinder_tree(n), Kind.LAVER, cylinder_set(n), 2, width).found


def test_bernstein_examples():
    assert bernstein_check(cylinder_set(0), [(full_tree(), Kind.SACKS)]) == [(True, False)]
    B = cone((0,)) | cone((1,))
    assert bernstein_check(B, [(cylinder_tree(0), Kind.LAVER)]) == [(True, True)]
    assert bernstein_check(empty(), [full_tree(), cylinder_tree(2)]) == [(False, False), (False, False)]
