# %% [markdown]
# # The fat handle
#
# D^{n,m} is the set of (u, v) with |u| >= 1 - phi(2 - |u| - |v|).  Every
# predicate depends on the radii only.

# %%
import numpy as np

from fatcw.handle import HandlePoint, HandleSpec, boundary_point, boundary_radii, classify, defect
from fatcw.kernels import default_context

ctx = default_context()
spec = HandleSpec(1, 1)
for u, v in [(2.0, 0.0), (0.0, 0.0), (0.2, 0.0), (1.0, 1.0), (1.0, 2.0), (0.5, 2.0)]:
    p = HandlePoint([u], [v])
    print(f"u={u:4} v={v:4}  defect={defect(ctx, spec, p):+.4f}  {classify(ctx, spec, p).value}")

# %% [markdown]
# The boundary is a graph over t = |u| + |v| - 2 >= -1.

# %%
t = np.linspace(-1, 2, 7)
ru, rv = boundary_radii(ctx, t)
for row in zip(t, ru, rv):
    print("t=%5.2f  |u|=%.6f  |v|=%.6f" % row)

g = np.random.default_rng(0)
worst = max(
    abs(defect(ctx, HandleSpec(2, 2), boundary_point(ctx, HandleSpec(2, 2), s, g.normal(size=2), g.normal(size=2))))
    for s in g.uniform(-1, 3, 1000)
)
print("worst boundary defect over 1000 points:", worst)
