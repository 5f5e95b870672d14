"""How fast does the measurement destroy a superposition?

Averaged over many trajectories, the off-diagonal element of the measured
system's density matrix decays as 0.5*exp(-t/tau_m) with
tau_m = gamma/(2 lam^2): the stronger the system-detector coupling, the
faster the superposition dies.  The ensemble is compared against that
closed form and against a log-linear fit.

Run:  python demos/02_coherence_destruction.py   (about half a minute)
"""

import numpy as np

from zenosim import fit_exponential_rate, preset, run_ensemble
from zenosim.oracles import measurement_time
from zenosim.output import write_ensemble_csv

cfg = preset("fig3").with_overrides(n_trajectories=500)
stats = run_ensemble(cfg)

tau_m = measurement_time(cfg.model.detector.gamma, cfg.model.detector.lam)
mag = np.hypot(stats.mean["rho_eg_re"], stats.mean["rho_eg_im"])
fit = fit_exponential_rate(stats.times, mag, (0.0, 15.0))

print(f"trajectories:      {stats.n_trajectories}")
print(f"expected rate:     1/tau_m = {1 / tau_m:g}")
print(f"fitted rate:       {fit.rate:.4f}")
print()
print("  t     |<rho_eg>|   0.5*exp(-t/tau_m)")
for t_show in (0.0, 2.0, 5.0, 10.0, 15.0, 20.0, 25.0):
    i = int(np.searchsorted(stats.times, t_show))
    print(f"  {stats.times[i]:5.1f}  {mag[i]:9.4f}   {0.5 * np.exp(-stats.times[i] / tau_m):9.4f}")

write_ensemble_csv("coherence_decay.csv", stats)
print("\nwrote coherence_decay.csv (columns rho_eg_re/_im mean and stderr)")
