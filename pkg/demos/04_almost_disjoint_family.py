# %% [markdown]
# # An almost disjoint tree and its branches
#
# The naturals are split into infinitely many infinite blocks A_m.  The tree
# continues a node ending in m only with values from A_m, so two branches that
# split once never agree again.

# %%
import numpy as np

from treeideals.families import (
    ad_branch,
    ad_tree,
    ed_status,
    embed,
    finite_modify,
    make_partition,
    residue_embed,
    scale4,
)
from treeideals.trees import truncate

P = make_partition()
T = ad_tree()

# %%
print([[P.enum(m, i) for i in range(6)] for m in range(4)])
print(truncate(T.lazy(), 2, 3).sorted_nodes())

# %% [markdown]
# Branches are addressed by selectors: position k picks the k-th member of the
# block named by the previous value.

# %%
rng = np.random.default_rng(0)
sels = [tuple(int(x) for x in rng.integers(0, 3, 8)) for _ in range(4)]
sels[1] = sels[0][:3] + ((sels[0][3] + 1) % 3,) + sels[0][4:]
branches = [ad_branch(T, s) for s in sels]
for b in branches:
    print(b)
print(np.array([[ed_status(f, g)[0] for g in branches] for f in branches]))

# %% [markdown]
# Every prefix d is dominated by its image f(d), which lies on the tree.
# Scaling by 4 and adding a residue gives three trees whose branches never meet.

# %%
d = (5, 0, 3, 1)
print(d, embed(T, d), scale4(embed(T, d)))
for r in (1, 2, 3):
    print(r, truncate(residue_embed(T.lazy(), r), 2, 2).sorted_nodes())
print(finite_modify((3, 3, 3), 1, 7))
