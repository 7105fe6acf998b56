"""Bayesian network marker selection with a thresholded graph-Laplacian
Gaussian prior under generalized linear models."""

__version__ = "0.1.0"

from ._kernels import BACKEND as kernel_backend
from .glm import Dataset, GlmFamily
from .graph import Network, barabasi_albert, load_edge_list, normalized_laplacian
from .inference import (PosteriorSummary, conditional_effect, gelman_rubin,
                        inclusion_probability, select_markers, summarize)
from .ising import IsingConfig, ising_gibbs_chain
from .metrics import EvalReport, aggregate, auc, classification_error, pmse, tp_fp
from .prior import (LaplacianPrecision, ModelState, TglgHyper, compose_beta,
                    hard_threshold, smooth_threshold, smooth_threshold_grad)
from .sampler import McmcTrace, SamplerConfig, TglgSampler, run_chain, run_chains
from .simulate import SimDataset, SimScenario, make_scenario

__all__ = [
    "__version__", "kernel_backend",
    "Dataset", "GlmFamily",
    "Network", "barabasi_albert", "load_edge_list", "normalized_laplacian",
    "PosteriorSummary", "conditional_effect", "gelman_rubin",
    "inclusion_probability", "select_markers", "summarize",
    "IsingConfig", "ising_gibbs_chain",
    "EvalReport", "aggregate", "auc", "classification_error", "pmse", "tp_fp",
    "LaplacianPrecision", "ModelState", "TglgHyper", "compose_beta",
    "hard_threshold", "smooth_threshold", "smooth_threshold_grad",
    "McmcTrace", "SamplerConfig", "TglgSampler", "run_chain", "run_chains",
    "SimDataset", "SimScenario", "make_scenario",
]
