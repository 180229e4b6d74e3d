# %% [markdown]
# # Trees on omega and their kinds
#
# A tree is a prefix-closed set of finite integer sequences.  The library never
# holds an infinite tree in memory: a `LazyTree` answers membership and streams
# successors on demand, and every check looks at a finite window.

# %%
from treeideals.trees import (
    Kind,
    binary_tree,
    classify,
    cylinder_tree,
    full_tree,
    restrict,
    stem,
    stem_trim,
    truncate,
)

# %% [markdown]
# The cylinder over 0 is the full tree behind a one-node stem.  The binary tree
# splits at every node, but never infinitely.

# %%
for name, T in [("full", full_tree()), ("cylinder:0", cylinder_tree(0)), ("binary", binary_tree())]:
    print(name, "stem", stem(T, 8))
    for v in classify(T, 4, 4):
        print(f"  {v.kind.value:17} {v.status.value}")

# %% [markdown]
# A refuted verdict carries a witness node.  A confirmed verdict only says the
# window never contradicted the kind, and `unknown` is reported when the window
# cannot tell.

# %%
print(truncate(cylinder_tree(0), 2, 3).sorted_nodes())

# %% [markdown]
# Restriction to a node keeps the kind for trees with stems; trimming the stem
# goes the other way, turning a Laver tree into a complete one.

# %%
T = restrict(full_tree(), (2, 7))
print("restricted stem", stem(T, 8), "claimed", T.kind_claim.value)
U = stem_trim(T)
print("trimmed stem", stem(U, 8), "claimed", U.kind_claim.value)
print(Kind.HECHLER.implies(Kind.LAVER), Kind.LAVER.implies(Kind.HECHLER))
