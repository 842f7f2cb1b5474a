"""Diffusion least-mean-p-power estimation over sensor networks.

Implements plain and softmax-weighted variants of centralized and
diffusion LMP, with a Monte-Carlo harness for learning curves under
non-uniform Gaussian and symmetric alpha-stable noise.
"""

from .algorithms import (
    ALGORITHM_IDS,
    CentralState,
    DiffusionState,
    DivergenceError,
    LmpParams,
    centralized_step,
    diffusion_adapt,
    diffusion_combine1,
    diffusion_combine2,
    init_central_state,
    init_diffusion_state,
    lmp_influence,
    plain_diffusion_iteration,
    weighted_diffusion_iteration,
)
from .backend import available_backends, default_backend, get_kernels
from .config import (
    ConfigError,
    ExperimentConfig,
    bundled_config,
    config_to_dict,
    config_to_json,
    load_config,
    parse_config,
)
from .harness import (
    AlgorithmResult,
    ExperimentResult,
    export_results,
    generate_trial_data,
    run_experiment,
    substream,
)
from .inspector import WeightTrace, final_weight_noise_rank_correlation, record
from .metrics import LearningCurve, average_curves, linear_to_db, msd_db, network_msd_db
from .noise import (
    AlphaStableNoise,
    GaussianNoise,
    empirical_char_function,
    noise_scales,
    sample_noise,
    sample_noise_block,
)
from .signal_model import generate_ground_truth, generate_regressor, measure
from .topology import (
    CombinationMatrix,
    NetworkTopology,
    build_topology,
    flatten_neighborhoods,
    neighbors,
    uniform_combination,
)
from .weighting import (
    LOGIT_MAX,
    LOGIT_MIN,
    clamp_logits,
    masked_row_softmax,
    softmax,
    softmax_self_derivative,
    update_global_logits,
    update_local_logits,
)

__version__ = "0.1.0"
