"""The Euler-Lagrange covector is always orthogonal to the velocity.

Reparametrization invariance of L = G^(1/2N) + A.v forces v.E = 0 for any
state and any acceleration, on or off a solution.  Here we draw random
polynomial fields and check the identity on a thousand random states at once,
then show that E still carries information in the directions orthogonal to v.
"""

import numpy as np

from jetmech import RelativisticLagrangian, variational_derivative
from jetmech.fields import random_one_form, random_tensor_field

rng = np.random.default_rng(7)

for N in (1, 2):
    L = RelativisticLagrangian(random_tensor_field(rng, 4, N), random_one_form(rng, 4))
    # timelike-ish velocities keep G comfortably positive
    q = rng.uniform(-1, 1, (4, 1000))
    v = rng.uniform(-0.4, 0.4, (4, 1000))
    v[0] = rng.uniform(1.0, 1.5, 1000)
    a = rng.uniform(-1, 1, (4, 1000))
    E = variational_derivative(L, q, v, a)
    contraction = np.abs(np.sum(v * E, axis=0)) / (1 + np.abs(E).sum(axis=0))
    print(f"N = {N}: max |v.E| / (1 + |E|_1) = {contraction.max():.2e}, "
          f"typical |E|_1 = {np.median(np.abs(E).sum(axis=0)):.3f}")
