# %% [markdown]
# # Saboteur certificates on hypercubes
#
# A fixed Saboteur strategy turns the game into a one-player search. Its exact
# value is a certified lower bound on b_k.

# %%
from liminal import bounds as bd
from liminal.graph import hypercube
from liminal.solver import solve_cooling, solve_liminal, value_fixed_saboteur
from liminal.strategies import HypercubeB4Saboteur, HypercubeLogSaboteur, b4_schedule, verify_b4_schedule

# %% [markdown]
# Small cubes can be solved outright.

# %%
for n in (2, 3, 4):
    g = hypercube(n)
    print(f"Q{n}: CL={solve_cooling(g)}", [solve_liminal(g, k).value for k in (1, 2, 4)])

# %%
r = value_fixed_saboteur(hypercube(7), 2, HypercubeLogSaboteur(7, 2))
print("Q7, k=2, log schedule:", r.value, "rounds,", r.nodes_expanded, "nodes")
for e in bd.hypercube_bounds(7, 2):
    print(" ", e.theorem, e.kind, e.integer, "active" if e.active else "inactive")

# %% [markdown]
# The k=4 schedule reveals four sets of size i in round i.

# %%
for rnd, sets in sorted(b4_schedule(11).items())[:4]:
    print(rnd, [sorted(i + 1 for i in range(11) if s >> i & 1) for s in sets])
print("schedule problems:", verify_b4_schedule(11))
r = value_fixed_saboteur(hypercube(11), 4, HypercubeB4Saboteur(11))
print("Q11, k=4:", r.value, "rounds,", r.nodes_expanded, "nodes")
