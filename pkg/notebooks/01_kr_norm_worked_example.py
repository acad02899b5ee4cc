# %% [markdown]
# # KR norm on the real line
#
# The reservoir is the origin. Mass can be moved between points at cost
# |x - y|, or sent to / drawn from the origin at cost |x|.

# %%
from relot import MetricPair, absolute, kr_dual, kr_norm, le, make_signed, solve_w1

pair = MetricPair.real_line([0, 2, 3, 8, 9])
idx = {c: i for i, c in enumerate([0, 2, 3, 8, 9])}

sigma1 = make_signed(pair, [(idx[2], 1), (idx[8], 1)], rational=True)
sigma2 = make_signed(pair, [(idx[2], 1), (idx[3], -1), (idx[8], 1), (idx[9], -1)], rational=True)

# %% [markdown]
# `sigma1` has no negative part, so all of its mass has to go to the origin.
# For `sigma2` the positive atoms have nearby negative partners.

# %%
print("||sigma1|| =", kr_norm(sigma1))
print("||sigma2|| =", kr_norm(sigma2))

# %% [markdown]
# The optimal plan for `sigma2` pairs 2 with 3 and 8 with 9:

# %%
from relot import jordan

pos, neg = jordan(sigma2)
for kind, x, y, w in solve_w1(pos, neg).coupling.edges():
    print(kind, pair.coords[x][0], "->", pair.coords[y][0], "mass", w)

# %% [markdown]
# `|sigma1|` sits below `|sigma2|` atom by atom, yet its norm is five times
# larger. So the norm is not monotone for the lattice order.

# %%
print("|sigma1| <= |sigma2| :", le(absolute(sigma1), absolute(sigma2)))

# %% [markdown]
# The dual side gives a 1-Lipschitz potential vanishing at the origin that
# attains the same value, with zero gap in exact arithmetic.

# %%
cert = kr_dual(pos, neg)
print("dual value", cert.value, "gap", cert.gap)
print("potential", {str(pair.coords[x][0]): str(v) for x, v in cert.potential_f.items()})
