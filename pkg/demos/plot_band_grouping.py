"""
Grouping components into frequency bands
========================================

A synthetic record sampled at 1000 Hz holds tones at 10, 20, 50 and 200 Hz.
Components are assigned to bands by the frequency where their filter peaks.
"""

import numpy as np

from ssabank import EEG_BANDS, GenSpec, build_model, extract_components, generate, group_components, welch_psd

spec = GenSpec(
    "sinemix", n=9000, amplitudes=(1, 1, 1, 1), frequencies=(10, 20, 50, 200),
    sigma=0.5, seed=1, sample_rate=1000.0,
)
x = generate(spec)
model = build_model(x, 201)
comps = extract_components(x, model)

g = group_components(comps, model.peak_frequencies, EEG_BANDS)
for (lo, hi), count, sig in zip(EEG_BANDS, g.counts, g.signals):
    est = welch_psd(sig, 400, sample_rate=1000.0)
    print(f"{lo:5.0f}-{hi:<5.0f} Hz: {count:3d} components, Welch peak {est.peak():6.1f} Hz")
est = welch_psd(g.leftover, 400, sample_rate=1000.0)
print(f"leftover   : {g.leftover_count:3d} components, Welch peak {est.peak():6.1f} Hz")

# nothing is lost: bands plus leftover give back the full reconstruction
err = np.abs(g.signals.sum(axis=0) + g.leftover - comps.total()).max()
print("conservation error:", err)
