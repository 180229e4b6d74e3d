# %% [markdown]
# # Fusion against shrinking intervals
#
# A fusion run thins a tree stage by stage.  At stage n a grid of fixed nodes,
# indexed by words of length at most n over n letters, is kept forever, and the
# body of the stage tree plus the interval I_n is certified to have measure
# below `bound_factor(n) * |I_n|`.

# %%
from fractions import Fraction as F
from itertools import islice

from treeideals.fusion import (
    bound_factor,
    dyadic_dense,
    fusion_limit,
    gdelta_construction,
    grid_size,
    run_fusion,
    verify_bound,
    verify_conditions,
)
from treeideals.intervals import RationalInterval
from treeideals.trees import full_tree

# %% [markdown]
# Intervals centred on the dyadic rationals, with measure 4^-n.

# %%
dense = list(islice(dyadic_dense(), 7))
intervals = [RationalInterval.centered(d, F(1, 4**n)) for n, d in enumerate(dense)]
states = run_fusion(full_tree(), intervals, "miller")
for s in states[1:]:
    c = verify_bound(s)
    print(f"stage {c.stage}: {c.lhs} < {c.rhs}  ({float(c.lhs / c.rhs):.3f} of the bound)")

# %% [markdown]
# The grid grows as n^{<=n}.  Only nodes that were chosen explicitly are stored;
# the newest layer is filled by a fixed rule when asked for.

# %%
print([grid_size(n) for n in range(7)], [bound_factor(n) for n in range(1, 7)])
print(len(states[-1].grid), len(states[-1].grid.nodes))
print(all(verify_conditions(s).ok for s in states))
_, retention = fusion_limit(states)
print(retention.to_json())

# %% [markdown]
# With smaller intervals the certified measures sum to a tail below 2^-n, the
# ingredient for a dense G-delta set that the fused tree's body can be shifted
# into.  Eight stages take several seconds, so the demo uses six.

# %%
res = gdelta_construction(full_tree(), "miller", 6)
for t in res.runs[0].targets:
    print(t.stage, t.lhs, "<", t.target)
for t in res.runs[0].tails:
    print("tail after", t.n, t.total, "<=", t.bound)
print("holds", res.holds)
