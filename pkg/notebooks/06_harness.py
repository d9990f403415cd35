# %% [markdown]
# # Verification harness and exports
#
# `run_suite` collects named checks into a report with a deterministic
# CSV encoding.  The same runs are available as `fatcw verify`.

# %%
from fatcw import harness

rep = harness.run_suite("all", seed=0)
print(rep.summary())

# %% [markdown]
# Geometry for external plotting: `emit` writes CSV polylines and OBJ
# meshes (`fatcw emit ...` on the command line).

# %%
import tempfile
from pathlib import Path

from fatcw.mesh import audit_mesh, read_obj

out = Path(tempfile.mkdtemp())
harness.emit(harness.EmitRequest("d-boundary", 1, 1, 512), out / "boundary.csv")
harness.emit(harness.EmitRequest("smoothed-profile", samples=1024), out / "profile.csv")
harness.emit(harness.EmitRequest("mesh", 2, 1, 128, fmt="obj"), out / "handle21.obj")
print(sorted(p.name for p in out.iterdir()))
print(audit_mesh(read_obj(out / "handle21.obj")))
