# %% [markdown]
# # Duality certificates
#
# Every distance computed by the network simplex can be checked against a
# dual solution found by an independent dense simplex.

# %%
import numpy as np

from relot import MetricPair, PairCost, kr_dual, make_measure, mk_dual, solve_w1

rng = np.random.default_rng(7)
pts = rng.uniform(-4, 4, size=(14, 2))
pair = MetricPair.euclidean(pts.tolist(), [[0.0, 0.0], [3.0, -3.0]])
mu, _ = make_measure(pair, [(i, float(rng.uniform(0.5, 2))) for i in range(7)])
nu, _ = make_measure(pair, [(i, float(rng.uniform(0.5, 2))) for i in range(7, 14)])

# %% [markdown]
# Kantorovich-Rubinstein form, solved two ways.

# %%
w1 = solve_w1(mu, nu).value
for method in ("lp", "network"):
    cert = kr_dual(mu, nu, method=method)
    print(f"{method:8s} dual {cert.value:.12f}  primal {w1:.12f}  gap {cert.gap:.1e}")

# %% [markdown]
# Monge-Kantorovich form with a cost that is not a metric: a mix of the
# relative distance and the squared one.

# %%
r = pair.reservoir_vector()
h = PairCost((pair.dbar_matrix() + 0.5 * pair.dp_matrix(2)).tolist(),
             (1.5 * r).tolist(), (1.5 * r).tolist(), pair)
cert = mk_dual(h, mu, nu)
print("MK value", cert.value, "gap", cert.gap)
print("f + g <= h checked:", all(cert.potential_f[x] + cert.potential_g[y] <= h.matrix[x][y] + 1e-9
                                 for x in mu.support for y in nu.support))
