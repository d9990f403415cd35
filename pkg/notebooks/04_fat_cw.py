# %% [markdown]
# # Fat CW complexes
#
# A complex is a tuple of cells.  Points are normalised by pushing flange
# points through attaching maps.

# %%
import numpy as np

from fatcw import cw
from fatcw.cw_examples import fat_s2_complex, fat_s2_margins, iota_complex, iota_point, tdn_complex
from fatcw.kernels import default_context, ell
from fatcw.partition import audit_partition, build_partition, separating_function

ctx = default_context()
iota = iota_complex()
for t in (-0.5, 0.0, 0.3, 1.0, 1.7):
    print(t, "->", cw.normalize(iota, iota_point(t)))

# %% [markdown]
# R^n modulo the radial clamp, and the curve whose lift has speed
# ~ t^(-1/2).

# %%
tdn = tdn_complex(2)
print(cw.normalize(tdn, cw.CellPoint.of(2, "e", [3.0, 4.0])))
ts = 10.0 ** -np.arange(2, 7)
slopes = [cw.nonreflexivity_witness(t)[1] for t in ts]
print("slope exponent:", np.polyfit(np.log(ts), np.log(slopes), 1)[0])
print("w-dim:", cw.wdim_bound(iota), cw.wdim_bound(tdn), cw.wdim_bound(fat_s2_complex()))

# %% [markdown]
# A partition of unity on the fat sphere, subordinate to a two-set cover.

# %%
spec = fat_s2_complex()
pou = build_partition(ctx, spec, fat_s2_margins())
g = np.random.default_rng(0)
pts = [cw.CellPoint(2, "cap", q) for q in cw.sample_interior(spec.cell("cap"), g, 2000)]
pts += [cw.CellPoint(0, "disk", q) for q in cw.sample_interior(spec.cell("disk"), g, 2000)]
flange = [("cap", q) for q in cw.sample_flange(spec.cell("cap"), g, 500)]
print(audit_partition(pou, pts, flange))
print("regularity probe:", cw.regularity_probe(spec, "cap", 5000))

# %% [markdown]
# A separating function on the interval.

# %%
def interval_margin(p):
    # positive exactly on the open interval
    return 0.0 if isinstance(p, cw.BasePoint) else float(ell(1.0 - p.point.ru))


f = separating_function(ctx, iota, iota_point(0.5), interval_margin)
print([round(f(iota_point(t)), 6) for t in np.linspace(0, 1, 11)])
