"""
Closed form versus brute force
==============================

The spectral propagator multiplies the input spectrum by a closed-form
transfer function.  The oracle integrates the Maxwell-Bloch equations in
time and space instead.  This script runs both on a scaled problem
(gamma_ge = 1), prints their disagreement, shows the refinement study of the
integrator and looks at the idler, which only the integrator provides.
"""

import numpy as np

from eitfwm import GridConfig, MediumParams, PulseSpec, compare_with_spectral, convergence_report, integrate
from eitfwm import synthesize
from eitfwm.metrics import com_time, efficiency

trace = synthesize(PulseSpec("gaussian", 40.0, center=100.0), window=400.0, dt=0.5)
grid = GridConfig(nz=100, dt=0.05, window=400.0)

for eta in (0.0, 0.1):
    # delta = 1 and Omega = 0.5 give epsilon = eta / 2
    params = MediumParams(optical_depth=20, gamma_ge=1.0, gamma_gs=1e-3, delta=1.0, omega=0.5, eta_eff=eta)
    result = integrate(trace, params, grid)
    err = compare_with_spectral(trace, params, grid, result)
    print(f"epsilon = {eta / 2:.2f}")
    print(f"  relative L2 difference to the spectral path: {err:.2e}")
    print(f"  signal efficiency {efficiency(result.signal, trace):.4f}, "
          f"delay {com_time(result.signal) - com_time(trace):.2f}")
    idler = np.abs(result.idler.samples)
    print(f"  idler peak |a_i| = {idler.max():.4f}")

# %%
# Halving dt and doubling nz should shrink the self-differences about
# fourfold per level.

report = convergence_report(trace, params, grid)
for (nz, dt), diff in zip(report.levels[1:], report.differences):
    print(f"  nz = {nz:4d}, dt = {dt:.4f}: difference {diff:.2e}")
print(f"  ratios {['%.2f' % r for r in report.ratios]}")
