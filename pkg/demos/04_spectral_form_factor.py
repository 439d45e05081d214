"""
Spectral form factor: dip, ramp, plateau
========================================

The disorder-averaged SFF g(beta, t) of a chaotic spectrum falls to a dip,
climbs a linear ramp, and saturates at the plateau Z(2 beta)/Z(beta)^2
(= 1/D at beta = 0).
"""

import numpy as np

from krylovlab import (
    DisorderSpec,
    DisorderTarget,
    Family,
    ModelSpec,
    SectorSpec,
    disorder_ensemble,
    ramp_fit,
    sff,
    trailing_time_average,
)
from krylovlab.chaos import dip_and_plateau_times

spec = ModelSpec(family=Family.NONLOCAL_TFIM, L=8, g=1.0, h=0.0, gamma=0.5)
sector = SectorSpec(parity=1, z_reflection=1)
disorder = DisorderSpec(
    n_samples=200, sigma=0.01, master_seed=11, target=DisorderTarget.NONLOCAL_COUPLING
)

times = np.logspace(-1, 5, 400)
curve = sff(disorder_ensemble(spec, disorder, sector), beta=0.0, times=times)

tail = trailing_time_average(curve.times, curve.g_values, decades=2.0)
print(f"plateau prediction 1/D = {curve.plateau_prediction:.5f}, trailing average = {tail:.5f}")

t_dip, t_plateau = dip_and_plateau_times(curve)
fit = ramp_fit(curve, (t_dip, t_plateau))
print(f"dip at t ~ {t_dip:.1f}, plateau from t ~ {t_plateau:.1f}, ramp slope {fit.slope:.2e}")
