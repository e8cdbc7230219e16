"""The same gyration described with q0 as the parameter.

In the three-velocity picture the unknowns are q^i(q0) and the Lagrangian is
Gbar^(1/2N) + A_i v^i + A_0.  Proper time is recovered afterwards by
integrating Gbar^(1/2N) along the path.  Both pictures should trace the same
curve in spacetime.
"""

import numpy as np

from jetmech import (IntegratorConfig, OneFormField, RelativisticLagrangian, TrajectoryState,
                     field_strength_matrix, integrate, minkowski)
from jetmech.three_velocity import integrate_reduced, project, reconstruct_tau

F = field_strength_matrix(4, {(1, 2): 1.0})
L = RelativisticLagrangian(minkowski(4), OneFormField.uniform_field(F))
four = integrate(L, TrajectoryState(0.0, np.zeros(4), [1.25, 0.75, 0, 0]),
                 IntegratorConfig(1e-3, 2 * np.pi))

span = four.q[-1, 0]
step = span / np.ceil(span / 0.0125)
reduced = integrate_reduced(L, project(four).state(0), step, span)
tau = reconstruct_tau(L, reduced)

gap = np.max(np.abs(reduced.interpolate(four.q[:, 0]) - four.q[:, 1:]))
print(f"chart-time steps          : {len(reduced) - 1} of size {step:.6f}")
print(f"max |q^i| disagreement    : {gap:.2e}")
print(f"proper time at the end    : {tau[-1]:.12f} (four-velocity run: {four.tau[-1]:.12f})")
print(f"Gbar stays at 1 - 0.6^2   : {reduced.Gbar.min():.12f} .. {reduced.Gbar.max():.12f}")
