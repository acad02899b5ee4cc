# %% [markdown]
# # Lattice operations on relative measures
#
# Join, meet and residual act atom by atom. Truncation splits a measure by
# its distance to the reservoir.

# %%
from relot import (MetricPair, band, inf_measure, make_measure, residual, sup_measure,
                   truncate_lower, truncate_upper)

coords = [0, 1, 3, 5]
pair = MetricPair.real_line(coords)
at = {c: i for i, c in enumerate(coords)}


def show(m):
    return {coords[x]: str(w) for x, w in m.atoms.items()}


mu, _ = make_measure(pair, [(at[1], 2), (at[3], 1)], rational=True)
nu, _ = make_measure(pair, [(at[1], 1), (at[5], 4)], rational=True)

# %%
print("join    ", show(sup_measure(mu, nu)))
print("meet    ", show(inf_measure(mu, nu)))
print("residual", show(residual(mu, nu)))
print("join + meet == mu + nu:", sup_measure(mu, nu) + inf_measure(mu, nu) == mu + nu)
print("nu + residual == join :", nu + residual(mu, nu) == sup_measure(mu, nu))

# %% [markdown]
# Truncations: below eps, above eps, and a band in between.

# %%
lam = mu + nu
print("far from A (> 2):", show(truncate_lower(lam, 2)))
print("near A (<= 2):   ", show(truncate_upper(lam, 2)))
print("band (1, 4]:     ", show(band(lam, 1, 4)))
print("bands add up:", band(lam, 0, 2) + band(lam, 2, 10) == band(lam, 0, 10))
