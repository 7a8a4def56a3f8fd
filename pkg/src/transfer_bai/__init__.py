"""Best-arm identification on a target bandit through a known additive transfer from a source bandit."""

from .complexity import ComplexityReport, corollary_bounds, tau_target_source, theorem2_bound
from .confidence import ArmConfidenceState, BoundaryParams, cs_update, invert_beta, stitched_beta
from .env import BanditEnv, Bernoulli, Gaussian, Uniform
from .extreal import INF, NEG_INF, ExtInterval, ext_sub, interval_length
from .microlucb import EmptyDtilde, MicroLucbConfig, check_linear_applicability, dtilde_set, run_micro_lucb
from .presets import make_bai, make_cpe, make_property_testing, make_thresholding, make_topk
from .sim import Instance, TrialBatchResult, run_batch
from .tlucb import RunResult, TLucbConfig, run, select_candidates, select_sources, should_stop
from .transfer import (
    Affine,
    Indicator,
    Linear,
    PiecewiseMonotone,
    PropertySet,
    TransferFunction,
    Zero,
    component_interval_image,
    sparsity,
    target_bounds,
    uncertainty_length,
)

__version__ = "0.1.0"
