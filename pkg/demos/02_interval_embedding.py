# %% [markdown]
# # Nodes as intervals
#
# Each node is sent to a closed interval inside [0, 1].  Children are nested in
# their parent, siblings are disjoint and the intervals shrink at least by half
# per level.  All arithmetic is exact, with `Fraction`.

# %%
from fractions import Fraction as F

import numpy as np

from treeideals.intervals import (
    RationalInterval,
    accumulation_interval,
    clopen,
    cover,
    first_inside,
    measure,
    minkowski,
    normalize,
)
from treeideals.suite import grid_measure
from treeideals.trees import full_tree, truncate

# %%
for tau in [(), (0,), (1,), (0, 0), (0, 1), (3, 2)]:
    print(tau, clopen(tau).to_json())

# %% [markdown]
# Children of a node pile up at the right end of its interval.  Given a width
# `w`, all children from `first_inside` on fit into the open interval
# `(b - w, b)` where `b` is the parent's right end.

# %%
w = F(1, 100)
K = first_inside((0,), w)
box = accumulation_interval((0,), w)
print("from child", K, "on, inside", box.to_json())
print([box.contains(clopen((0, k))) for k in range(K - 2, K + 3)])

# %% [markdown]
# Unions are normalized to separated parts, and measure is exact.  A numpy grid
# count gives an independent estimate, off by at most two cells per part.

# %%
U = normalize([RationalInterval(0, F(1, 4)), RationalInterval(F(1, 8), F(1, 2)), RationalInterval(F(2, 3), F(3, 4))])
print(U.to_json(), measure(U), grid_measure(U.parts, 4096), float(measure(U)))

# %% [markdown]
# The Minkowski sum with an interval widens every part; parts that meet merge.

# %%
S = minkowski(U, RationalInterval(0, F(1, 8)))
print(S.to_json(), measure(S))

# %% [markdown]
# The cover of a finite truncation at a frontier level is the union of the
# frontier intervals.  Its measure shrinks with depth.

# %%
for depth in range(4):
    C = cover(truncate(full_tree(), depth, 3), depth)
    print(depth, len(C.parts), measure(C))
print(np.diff([float(measure(cover(truncate(full_tree(), d, 3), d))) for d in range(4)]))
