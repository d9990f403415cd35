# %% [markdown]
# # Cut-off kernels
#
# `ell`, `lambda` and `phi` are the smooth building blocks of everything
# else.  A `KernelContext` holds the normalising constant and a Hermite
# table for `lambda` built on its exact derivative.

# %%
import math

import numpy as np

from fatcw.kernels import SmoothingParams, default_context, ell, p_a, s_func

ctx = default_context()
print(f"alpha            = {ctx.alpha:.15f}")
print(f"e^(4/3) alpha    = {math.exp(4 / 3) * ctx.alpha:.15f}")
print(f"cache error      = {ctx.cache_error:.2e}")

# %% [markdown]
# `lambda` climbs from 0 to 1 on [0, 1] and is symmetric about (1/2, 1/2);
# `phi` is 0 left of -1/2 and the identity right of +1/2.

# %%
t = np.linspace(-1, 2, 7)
for row in zip(t, ctx.lam(t), ctx.phi(t)):
    print("t=%5.2f  lambda=%.6f  phi=%.6f" % row)
print("phi(0) =", ctx.phi(0.0))

# %% [markdown]
# The derivative of `lambda` peaks at the midpoint, below 20/11.  The
# rescaled `lambda_eps` used by the collar stays below slope 2.

# %%
grid = np.linspace(0, 1, 100_001)
d = ctx.lam_prime(grid)
print("max lambda' =", d.max(), "at", grid[d.argmax()], "  20/11 =", 20 / 11)
params = SmoothingParams()
x = np.linspace(-0.5, 1.5, 200_001)
print("max lambda_eps slope =", np.max(np.diff(ctx.lam_eps(params, x)) / np.diff(x)))

# %% [markdown]
# Helpers used by the handle maps.

# %%
print("ell(3/2) =", ell(1.5), " e^(-2/3) =", math.exp(-2 / 3))
print("p_1(2) =", p_a(ctx, 1.0, 2.0), " p_1(1/4) =", p_a(ctx, 1.0, 0.25))
print("s(0) =", s_func(0.0), " s(1) =", s_func(1.0))
