"""
Properties of the eigenfilter bank
==================================

Every component filter is symmetric, so it has zero phase, and the whole
bank sums to a unit impulse.
"""

import numpy as np

from ssabank import build_model, extract_components, gaussian_noise, tone

x = gaussian_noise(2000, seed=3) + tone(2000, 1.0, 0.15)
model = build_model(x, 16)

# coefficients are mirror images of themselves
print("symmetric:", np.array_equal(model.coefficients, model.coefficients[:, ::-1]))

# summed over the bank the taps collapse onto the centre tap
total = model.coefficients.sum(axis=0)
print("bank sum (centre tap first):", np.round(total[15:20], 14) + 0.0)

# the responses T_m = |H_m|^2 / M are non-negative and add up to one
print("min response:", model.responses.min().round(14) + 0.0)
print("response sum range:", np.ptp(model.responses.sum(axis=0)).round(14))

# components add back to the input away from the edges
comps = extract_components(x, model)
sl = comps.interior
print("interior reconstruction error:", np.abs(comps.total()[sl] - x[sl]).max())

# zero phase: the dominant component lines up with the tone
y = comps.components[0]
c = np.correlate(y, tone(2000, 1.0, 0.15), mode="full")
print("cross-correlation peak lag:", int(np.argmax(c)) - 1999)

# the same answer with the cyclic Jacobi eigensolver
jac = build_model(x, 16, method="jacobi")
print("max eigenvalue difference vs LAPACK:", np.abs(jac.eigenvalues - model.eigenvalues).max())
