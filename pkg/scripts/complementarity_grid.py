"""Visibility, distinguishability and scan visibility over a grid of |alpha|."""

import numpy as np

from vacfield.correlations import coincidence_rate, visibility_distinguishability
from vacfield.verification import harmonic_visibility, two_crystal_fields

theta = 2 * np.pi * np.arange(8) / 8
print("abs_alpha,V,K,K2_plus_V2,V_from_scan")
for a in np.linspace(0, 3, 31):
    pair = visibility_distinguishability(a)
    rates = np.array([coincidence_rate(*two_crystal_fields(0.1, a, th, 0.0)).value for th in theta])
    print(f"{a:.2f},{pair.V:.6f},{pair.K:.6f},{pair.K**2 + pair.V**2:.15f},{harmonic_visibility(theta, rates):.6f}")
