# %% [markdown]
# # Searching for witnesses of ideal membership
#
# A set belongs to the ideal of a tree kind when below every tree of that kind
# there is a subtree whose body misses the set.  Membership itself ranges over
# uncountably many trees, so the oracle only searches one tree at a time and
# reports what it found inside a finite window.

# %%
from treeideals.oracles import (
    avoid_subtree,
    bernstein_check,
    cone,
    cylinder_set,
    measurability_witness,
    sigma_union_check,
)
from treeideals.trees import Kind, classify, cylinder_tree, full_tree, verdict_for

# %% [markdown]
# The cylinder C_0 (all sequences starting with 0) is avoided inside the full
# tree by dropping the root successor 0.  The witness is still complete Laver.

# %%
rep = avoid_subtree(full_tree(), Kind.COMPLETE_LAVER, cylinder_set(0), 5, 5)
print(rep.outcome.value, rep.subtree.children(()))
print(verdict_for(classify(rep.tree, 5, 5), Kind.COMPLETE_LAVER).status.value)

# %% [markdown]
# Inside the cylinder tree over 0 there is nothing to avoid with.

# %%
print(avoid_subtree(cylinder_tree(0), Kind.LAVER, cylinder_set(0), 5, 5).outcome.value)

# %% [markdown]
# Each C_n is avoidable, yet together they cover everything: the ideal is not
# closed under countable unions.

# %%
sig = sigma_union_check(8)
print(sig.holds, all(sig.level_cover), sig.node_union)

# %% [markdown]
# Measurability asks for a subtree inside or disjoint from the set.

# %%
A = cone((0,)) | cone((1, 1))
for T in (full_tree(), cylinder_tree(0), cylinder_tree(1)):
    w = measurability_witness(T, Kind.LAVER, A, 3, 3)
    print(w.outcome.value, w.subtree.children(()) if w.found else None)
print(bernstein_check(A, [full_tree(), cylinder_tree(0)]))
