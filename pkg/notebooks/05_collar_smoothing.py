# %% [markdown]
# # Collar smoothing
#
# The corner where a flange sheet (|u| = 1) meets a handle sheet (|v| = 1)
# is rounded by pushing points along the collar with height kappa.

# %%
import numpy as np

from fatcw import collar
from fatcw.handle import defect_radii
from fatcw.kernels import SmoothingParams, default_context

ctx = default_context()
params = SmoothingParams()
print("piece overlaps:", collar.overlap_agreement(ctx, params))
rep = collar.monotonicity_audit(ctx, params)
for t, f, g, b in zip(rep.t_values, rep.min_slope_f, rep.min_slope_g, rep.bound):
    print(f"t={t:+.4f}  min f'={f:.4f}  min g'={g:.4f}  bound={b:.4f}")

# %% [markdown]
# The smoothed profile is C^1 at every junction, stays away from the
# classical corner and sits on the boundary of the fat handle.

# %%
curve = collar.smoothed_boundary_profile(ctx, params, 4096)
print("junction defects:", collar.junction_defects(ctx, params))
print("turning rate:", collar.turning_rate(curve))
print("distance from corner:", np.max(np.abs(curve.points - [1, 1]), axis=1).min(), " phi(0) =", ctx.phi(0.0))
print("max |defect| along profile:", np.abs(defect_radii(ctx, curve.r, curve.w)).max())
