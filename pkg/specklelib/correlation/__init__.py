from .c12 import UndefinedCorrelationError, CorrelationEstimate, c12_from_tally, c12_from_fields
from .curve import Engine, CorrelationCurve, compare_curves, CSV_COLUMNS
from .sweep import SweepParams, run_sweep
from .wigner import WignerDistribution, wigner_transform, wigner_marginal
