"""The action does not care how a path is parametrized.

We evaluate the action of a helical world line and of the same curve
traversed with a quadratic or exponential clock.  The density is degree-one
homogeneous in the velocity, so all three numbers agree up to quadrature.
"""

import numpy as np

from jetmech import OneFormField, RelativisticLagrangian, field_strength_matrix, minkowski
from jetmech.lagrangian import Path, Reparametrization, action, reparametrize

F = field_strength_matrix(4, {(1, 2): 1.0})
L = RelativisticLagrangian(minkowski(4), OneFormField.uniform_field(F))

helix = Path(
    lambda t: np.array([1.25 * t, 0.75 * np.sin(t), 0.75 * (1 - np.cos(t)), 0 * t]),
    lambda t: np.array([1.25 + 0 * t, 0.75 * np.cos(t), 0.75 * np.sin(t), 0 * t]),
    0.0, 3.0)

clocks = {
    "quadratic": Reparametrization(lambda s: s ** 2 / 3, lambda s: 2 * s / 3, 0.0, 3.0),
    "exponential": Reparametrization(lambda s: 3 * (np.exp(s / 3) - 1) / (np.e - 1),
                                     lambda s: np.exp(s / 3) / (np.e - 1), 0.0, 3.0),
}

print(f"original    : {action(L, helix):.15f}")
for name, clock in clocks.items():
    print(f"{name:<12}: {action(L, reparametrize(helix, clock)):.15f}")
