"""Mode choice of crowd-shipping couriers: detour reconstruction, MNL and
mixed logit estimation, marginal probability effects."""
from .core import Dataset, Mode, NetworkParams, Observation, ScalingConfig, load_dataset
from .mixed import MixedOptions, estimate_mixed
from .mnl import estimate, log_likelihood, null_log_likelihood, probabilities
from .model_spec import MixingSpec, ModelSpec, Term
from .mpe import mpe, mpe_table
from .presets import cost_time_spec, profit_time_spec
from .results import EstimationResult
from .synthesis import DesignMatrix, build_design_matrix

__all__ = [
    "Dataset", "DesignMatrix", "EstimationResult", "MixedOptions", "MixingSpec", "Mode",
    "ModelSpec", "NetworkParams", "Observation", "ScalingConfig", "Term",
    "build_design_matrix", "cost_time_spec", "estimate", "estimate_mixed", "load_dataset",
    "log_likelihood", "mpe", "mpe_table", "null_log_likelihood", "probabilities",
    "profit_time_spec",
]
