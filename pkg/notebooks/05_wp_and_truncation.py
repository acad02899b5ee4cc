# %% [markdown]
# # W_p, retraction and approximation by truncation
#
# Cutting off the part of a measure that lies within delta of the reservoir
# costs at most the p-th moment of the removed part.

# %%
import numpy as np

from relot import (make_measure, marginals, moment, retract_coupling, solve_wp, truncate_lower,
                   truncate_upper, MetricPair, cost)

rng = np.random.default_rng(3)
births = rng.uniform(0, 10, size=30)
pair = MetricPair.halfplane([(b, b + l) for b, l in zip(births, rng.exponential(1.5, size=30))])
mu, _ = make_measure(pair, [(i, 1.0) for i in range(30)])

# %%
print(" delta   W_2(mu, mu_delta)   bound")
for delta in (0.1, 0.25, 0.5, 1.0, 2.0):
    w = solve_wp(mu, truncate_lower(mu, delta), 2).value
    bound = moment(truncate_upper(mu, delta), 2) ** 0.5
    print(f"{delta:6.2f}   {w:17.6f}   {bound:.6f}")

# %% [markdown]
# Retracting an optimal plan keeps the marginals consistent with the
# truncated measures, at a bounded extra cost.

# %%
nu, _ = make_measure(pair, [(i, 1.0) for i in range(0, 30, 2)])
plan = solve_wp(mu, nu, 1).coupling
eps = 0.5
r = retract_coupling(plan, eps)
print("marginals match:", marginals(r) == (truncate_lower(mu, eps), truncate_lower(nu, eps)))
print("cost", cost(plan, 1), "->", cost(r, 1),
      "<=", cost(plan, 1) + moment(truncate_upper(mu, eps), 1) + moment(truncate_upper(nu, eps), 1))
