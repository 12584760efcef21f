# %% [markdown]
# # Grid playouts against the bound curves
#
# Two greedy playouts on the 100x100 grid, set beside the piecewise lower and
# upper bounds. The Saboteur reveals in index order; the two Arsonists burn the
# smallest or the largest revealed index.

# %%
import numpy as np

from liminal import bounds as bd

N = 100
ks = list(range(1, 362, 30))
rows = bd.grid_sweep(N, ks)
print(bd.sweep_csv(rows))

# %% [markdown]
# Where do the playouts leave the envelope? The largest-index Arsonist tracks
# the lower curve for moderate k, then drifts above the upper curve.

# %%
for r in rows:
    inside = r["lower"] <= r["heur_large"] <= r["upper"]
    print(f"k={r['k']:4d} large={r['heur_large']:4d} envelope=[{r['lower']:7.2f}, {r['upper']:7.2f}]"
          f" {'inside' if inside else 'outside'}")

# %% [markdown]
# The gap between the curves over the whole range of k.

# %%
kk = np.arange(1, N * N + 1)
ratio = bd.grid_upper(N, kk) / bd.grid_lower(N, kk)
print("largest upper/lower ratio:", ratio.max().round(4), "at k =", int(kk[ratio.argmax()]))
for row in bd.grid_envelope_check(N):
    if not row["empty"]:
        print(row["range"], row["first"], row["last"], round(row["max_ratio"], 4), row["stated"])
