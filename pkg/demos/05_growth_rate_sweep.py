"""
Operator-growth rate versus interaction range
=============================================

Power-law couplings J_ij ~ kappa / |i-j|^alpha interpolate between strongly
non-local (small alpha) and nearest-neighbor (large alpha) chains. The early
Lanczos coefficients follow b_n ~ delta * n / ln n + c, and the fitted slope
delta decreases monotonically with alpha: longer-range couplings scramble
faster.
"""

from krylovlab import Family, ModelSpec, SectorSpec, SeedKind
from krylovlab.fits import SweepProbe, sweep_alpha

base = ModelSpec(family=Family.MIXED_FIELD_TFIM, L=9, g=-1.05, h=0.5, alpha=1.0)
rows = sweep_alpha(
    base,
    [0.1, 0.5, 1.0, 1.5, 2.0, 2.5],
    SweepProbe.GROWTH_RATE,
    SectorSpec(parity=1),
    seed_kind=SeedKind.PARITY_SYMMETRIC_SZ,
    seed_site=5,
    max_steps=30,
    fit_range=(2, 15),
)

print("alpha   delta   stderr")
for row in rows:
    print(f"{row.alpha:5.2f}  {row.value:6.3f}  {row.stderr:6.3f}")

deltas = [row.value for row in rows]
print("monotone decreasing:", all(a > b for a, b in zip(deltas, deltas[1:])))
