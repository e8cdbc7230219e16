"""Changing charts on jets of curves.

A world line through the origin with three-velocity 0.5 along q1, seen from a
frame boosted by 0.6, has three-velocity (0.5 - 0.6) / (1 - 0.3) = -1/7.  The
same machinery handles any smooth change of coordinates and composes the way
transition maps should.
"""

import numpy as np

from jetmech import ChartPartition, SubmanifoldJet
from jetmech.jets import lorentz_boost, shear_transition, swap_transition, transform_jet

curve = SubmanifoldJet(ChartPartition(4, (0,)), np.zeros(4), [[0.5], [0.0], [0.0]])
boost = lorentz_boost(4, ch=1.25, sh=0.75)
seen = transform_jet(curve, boost)
print(f"boosted three-velocity : {seen.slopes[0, 0]:+.15f} (expect {-1 / 7:+.15f})")

# compose a boost with a nonlinear shear and compare with doing it in two steps
shear = shear_transition(4, target=2, source=1, coefficient=0.3)
point = SubmanifoldJet(ChartPartition(4, (0,)), [0.1, 0.4, -0.2, 0.3], [[0.2], [0.1], [-0.3]])
two_steps = transform_jet(transform_jet(point, boost), shear)
composed = transform_jet(point, boost.then(shear))
print(f"cocycle defect         : {np.max(np.abs(two_steps.slopes - composed.slopes)):.2e}")

# swapping time and space coordinates inverts the slope
slow = SubmanifoldJet(ChartPartition(2, (0,)), [0.0, 0.0], [[0.25]])
print(f"swapped slope          : {transform_jet(slow, swap_transition(2, 0, 1)).slopes[0, 0]}")
