"""Nambu-Goto density on a few sheets.

A flat sheet is a minimal surface, so its variational derivative vanishes.
A round cylinder is not: E points along the outward normal with the size of
the mean curvature, while its contractions with both tangents vanish.
Reparametrizing a sheet leaves its area unchanged.
"""

import numpy as np

from jetmech.nambu_goto import (Diffeo, FlatTargetMetric, Sheet, WorldsheetJet, ng_action,
                                ng_action_invariance, ng_density, ng_variational_derivative,
                                noether_contractions)

euclid = FlatTargetMetric.euclidean(4)
print("parallelogram (2 e1, 3 e2) area density:",
      ng_density(euclid, np.column_stack([[0, 2, 0, 0], [0, 0, 3, 0]])))

s = 0.4
z1 = np.array([[-np.sin(s), 0], [np.cos(s), 0], [0, 1], [0, 0]])
z2 = np.zeros((4, 2, 2))
z2[0, 0, 0], z2[1, 0, 0] = -np.cos(s), -np.sin(s)
jet = WorldsheetJet([np.cos(s), np.sin(s), 0, 0], z1, z2)
E = ng_variational_derivative(euclid, jet)
print("cylinder E          :", np.round(E, 15))
print("tangent contractions:", noether_contractions(jet.z1, E))


def cylinder(u, v):
    t = np.zeros((4, 2) + np.shape(u))
    t[0, 0], t[1, 0], t[2, 1] = -np.sin(u), np.cos(u), 1.0
    return t


def shear_jacobian(u, v):
    J = np.zeros((2, 2) + u.shape)
    J[0, 0] = 1 + 0.2 * np.cos(np.pi * u) * v
    J[0, 1] = 0.2 * np.sin(np.pi * u) / np.pi
    J[1, 1] = 1.0
    return J


shear = Diffeo(lambda u, v: (u + 0.2 * np.sin(np.pi * u) * v / np.pi, v), shear_jacobian)
before, after = ng_action_invariance(euclid, Sheet(cylinder), shear)
print(f"cylinder patch area : {ng_action(euclid, Sheet(cylinder)):.12f}")
print(f"after a shear       : {after:.12f} (difference {abs(before - after):.1e})")
