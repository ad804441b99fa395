"""
Slow light in a dense Rb85 ensemble
===================================

A 6 us square probe pulse crosses a cold Rb85 cloud of optical depth 550.
Without the control field the pulse is absorbed as exp(-550); with it the
medium becomes transparent near line centre and the pulse is delayed.  The
off-resonant excited level adds a four-wave-mixing (4WM) channel that
amplifies the signal.  This script sweeps the control Rabi frequency and
prints efficiency and delay with and without that 4WM gain.
"""

import math

import numpy as np

from eitfwm import RB85, MediumParams, PulseSpec, eta_eff, synthesize, transfer_grid
from eitfwm.cli import run_sweep

TWO_PI = 2 * math.pi

# %%
# Medium.  Frequencies are angular (rad/s).  The ground decoherence rate is
# taken as 12.8e3 rad/s.

eta = eta_eff(RB85)
medium = MediumParams.for_isotope(RB85, optical_depth=550, omega=TWO_PI * 2.7e6, gamma_gs=12.8e3)
print(f"Zeeman-averaged eta_eff = {eta:.4f}")
print(f"epsilon at Omega/2pi = 2.7 MHz: {medium.eta_eff * medium.omega / medium.delta:.3e}")

# %%
# The transfer function near line centre.  Outside the narrow
# transparency window the intensity transmission collapses by ten orders of
# magnitude; without the control it would be exp(-550), which is below the
# double range, so the evaluation works with ln|T| throughout.

w = TWO_PI * np.linspace(-3e6, 3e6, 7)
grid = transfer_grid(w, medium)
print("\n  detuning/2pi [MHz]   ln|T|      |T|^2")
for sample in grid.samples():
    t2 = math.exp(2 * sample.log_magnitude)
    print(f"  {sample.omega / TWO_PI / 1e6:+8.2f}        {sample.log_magnitude:9.3f}  {t2:.3e}")

# %%
# Propagating the square pulse.  A sweep is just a list of MediumParams
# variations; failures would come back as NaN rows.

pulse = synthesize(PulseSpec("square", 6e-6), window=60e-6, dt=6e-6 / 32)
omegas = TWO_PI * np.array([1.5e6, 2.0e6, 2.5e6, 3.0e6, 4.0e6, 5.0e6])

with_fwm, _ = run_sweep("omega", list(omegas), medium, pulse)
without, _ = run_sweep("omega", list(omegas), medium.without_fwm(), pulse)

print("\n  Omega/2pi   eff     eff(no 4WM)  delay [us]  DBP    4WM gain")
for a, b in zip(with_fwm, without):
    om, eff, tau, _, dbp, gain, _ = a
    print(f"  {om / TWO_PI / 1e6:5.2f} MHz  {eff:.3f}   {b[1]:.3f}        {tau * 1e6:6.2f}     {dbp:5.2f}  {gain:.3f}")

# %%
# The delay falls roughly as D gamma_ge / (2 |Omega|^2) while the
# efficiency rises; the delay-efficiency product peaks in between.
