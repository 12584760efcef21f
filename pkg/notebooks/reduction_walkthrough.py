# %% [markdown]
# # From a 3-QBF to a graph
#
# Build the gadget graph for a small formula, check its diameter identity and
# compare the game value with the threshold.

# %%
from liminal.reduction import build_gphi, build_reduction, eval_qbf, parse_qdimacs, verify_reduction

f = parse_qdimacs("e 1 0\na 2 0\n1 -2 2 0\n-1 2 2 0\n")
print("formula is", eval_qbf(f))

# %%
g = build_gphi(f)
print("G_phi:", g.n, "vertices,", g.num_edges, "edges, diameter", g.diameter())

# %%
rg = build_reduction(f, 2)
print("T =", rg.T, "order", rg.graph.n, "diameter", rg.graph.diameter(), "threshold", rg.threshold)
rep = verify_reduction(rg)
for name, ok, detail in rep.checks[:8]:
    print(f"{name:12s} {'ok' if ok else 'FAIL'} {detail}")

# %% [markdown]
# The literal-to-clause connector lengths decide the diameter. With the
# alternative rule the identity breaks, and the verifier says where.

# %%
bad = build_reduction(f, 2, connector_rule="long", check=False)
print(bad.graph.diameter(), "vs target", bad.target_diameter)
print(verify_reduction(bad).failures()[:3])

# %% [markdown]
# On a one-variable formula the exact certificate is affordable.

# %%
tiny = build_reduction(parse_qdimacs("e 1 0\n1 -1 1 0\n"), 2)
rep = verify_reduction(tiny, certify=True)
print("certificate", rep.certificate, "threshold", tiny.threshold, rep.certificate_note)
