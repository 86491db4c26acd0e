"""Entanglement detection from the expectation values of two observables.

Legendre-transform bounds on the geometric measure, separable and
constrained (ultrafine) witness thresholds, and usefulness analysis of
product observable pairs for small bipartite systems.
"""

from .analyzer import (EffectPair, ScanResult, Verdict, commutator_verdict,
                       degenerate_projection, joint_measurability_unbiased, lambda_scan,
                       usefulness_verdict, zero_pattern)
from .catalog import catalog
from .core import (I2, SX, SY, SZ, BipartiteOperator, ProductObservable, PureState, SchmidtData, Spectrum,
                   ValidationError, as_operator, commutator_norm, eigh, geometric_measure_pure, kron,
                   negativity, partial_transpose, schmidt)
from .io import parse_operator, serialize_operator
from .legendre import (BoundResult, LegendreResult, bell_diag_legendre, eps_bound, fig1_grid,
                       legendre_gm, xxzz_closed_form)
from .sepvalue import (DualScan, InfeasibleError, SepOptResult, WitnessReport,
                       constrained_sep_max, hyperplane_min, is_witness,
                       pure_constrained_sep_max, sep_max, sep_min, uew_evaluate)

__version__ = "0.1.0"
