"""Lagrangian dynamics of submanifolds as sections of a trivial bundle.

Relativistic mechanics with L = G^(1/2N) + A(q).q_tau (curves, n = 1) and
the Nambu-Goto area density (sheets, n = 2).
"""

from .errors import (ConfigError, DegenerateWorldsheet, DomainError, DriftExceeded,
                     JetMechError, NonPositiveG, NonPositiveReducedG, NonRegularInChart,
                     SingularMassMatrix, SingularReducedHessian, SingularTransition)
from .fields import (OneFormField, SymmetricTensorField, euclidean, field_strength_matrix,
                     minkowski, quartic_eta2)
from .polynomial import PolynomialScalarField
from .jets import (ChartPartition, ChartTransition, SectionJet, SubmanifoldJet, is_regular,
                   section_to_submanifold, submanifold_to_sections, transform_jet)
from .lagrangian import (RelativisticLagrangian, TrajectoryState, eval_E, eval_G,
                         eval_lagrangian, gauge_action_invariance, noether_defect,
                         variational_derivative)
from .dynamics import (IntegratorConfig, Trajectory, acceleration, integrate, mass_matrix,
                       normalize_velocity)
from .three_velocity import (ReducedState, reconstruct_tau, reduce_G, reduced_acceleration,
                             reduced_lagrangian)
from .nambu_goto import (FlatTargetMetric, WorldsheetJet, induced_metric, ng_action_invariance,
                         ng_density, ng_variational_derivative)

__version__ = "0.1.0"
