"""Analysis of planar Filippov fold-fold singularities and their smooth
regularizations: singularity classification, bifurcation curves, Melnikov
cycle detection and canard computation."""

from .errors import (DegenerateError, DomainError, EscapeError,
                     ExtensionError, FoldFoldError, IndeterminateError,
                     NoEquilibriumError, NoOrbitError, NoReturnError,
                     NoSaddleNodeError, NotVersalError, NumericalError,
                     UsageError)
from .fields import (AlphaFamily, PlanarField, alpha_derivative, eval_jet,
                     family_from_tables)
from .regularize import (CATALOG, RegularizedSystem, TransitionFunction,
                         from_odd_coefficients, get_transition, tangency_eps)
from .filippov import (FilippovPair, FoldFoldDiagnosis, beta_coefficient,
                       check_versal, classify_sigma, diagnose,
                       half_return_numeric, mu_Z, sliding_slope,
                       sliding_value, unfolding_return_fixed_point,
                       unfolding_tangencies)
from .equilibria import (BifurcationChart, CriticalPointReport, chart,
                         classify_region, find_critical_point,
                         jacobian_scaled)
from .slowfast import (CriticalManifold, FoldLimitGeometry, critical_manifold,
                       fold_limit_geometry, induced_speed, m0_alpha_eval,
                       m1_eval)
from .melnikov import (MelnikovProfile, build_profile, conjugate, cycle_zeros,
                       hopf_criticality, melnikov, potential, saddle_node)
from .canard import (CanardReport, LinearCanardCoefficients, canard_constants,
                     inner_solution, linear_ks_reduction, manifold_gap,
                     numeric_canard)
from .dynamics import (OrbitCertificate, Trajectory, B_coefficient,
                       band_crossing_map, big_orbit_side, find_periodic_orbit,
                       first_order_g, fixed_alpha_limit, integrate,
                       way_in_way_out)
from .scenarios import SCENARIOS, Scenario, get_scenario, load_scenario_json

__version__ = "0.1.0"
