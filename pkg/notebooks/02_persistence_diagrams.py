# %% [markdown]
# # Distances between persistence diagrams
#
# Diagram points live in the half-plane above the diagonal, and the diagonal
# is the reservoir. Unmatched points are paid off at their distance to it.

# %%
from relot import solve_wp
from relot.io import diagram_instance

dgm_a = [(0, 4, 1), (1, 3, 1), (2, 9, 1)]
dgm_b = [(0, 5, 1), (3, 4, 1)]

# %% [markdown]
# With the L-infinity norm everything stays rational.

# %%
pair, [(mu, _), (nu, _)] = diagram_instance([dgm_a, dgm_b], "linf", rational=True)
for p in (1, 2):
    res = solve_wp(mu, nu, p)
    print(f"W_{p} =", res.value, " cost =", res.cost)

res = solve_wp(mu, nu, 1)

def label(i):
    return "diagonal" if i is None else "({}, {})".format(*pair.coords[i])


for kind, x, y, w in res.coupling.edges():
    src, dst = label(x), label(y)
    print(f"{kind:9s} {src} -> {dst}  mass {w}")

# %% [markdown]
# The Euclidean norm changes the distance to the diagonal by a factor
# 2 / sqrt(2), so the answer moves but the structure of the plan is similar.

# %%
pair2, [(mu2, _), (nu2, _)] = diagram_instance([dgm_a, dgm_b], "l2")
print("W_1 (L2) =", solve_wp(mu2, nu2, 1).value)

# %% [markdown]
# A point on the diagonal is quotiented away and reported as dropped mass.

# %%
_, [(m3, dropped), _] = diagram_instance([[(1, 1, 2), (0, 2, 1)], []], rational=True)
print("kept", {k: str(w) for k, w in m3.atoms.items()}, "dropped", dropped)
