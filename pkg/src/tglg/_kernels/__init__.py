"""Numeric kernel backend selection.

The compiled extension is preferred when present; set TGLG_PURE_PYTHON=1
to force the NumPy implementation. ``BACKEND`` records the choice.
"""

import os

from . import numpy_backend

if os.environ.get("TGLG_PURE_PYTHON", "").strip() not in ("", "0"):
    _impl = numpy_backend
    BACKEND = "numpy"
else:
    try:
        from . import _speedups as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = numpy_backend
        BACKEND = "numpy"

GAUSSIAN = _impl.GAUSSIAN
BERNOULLI_LOGIT = _impl.BERNOULLI_LOGIT

logistic = _impl.logistic
glm_log_likelihood = _impl.glm_log_likelihood
glm_grad_h = _impl.glm_grad_h
hard_indicator = _impl.hard_indicator
smooth_indicator = _impl.smooth_indicator
smooth_indicator_grad = _impl.smooth_indicator_grad
compose_beta_hard = _impl.compose_beta_hard

__all__ = [
    "BACKEND",
    "GAUSSIAN",
    "BERNOULLI_LOGIT",
    "logistic",
    "glm_log_likelihood",
    "glm_grad_h",
    "hard_indicator",
    "smooth_indicator",
    "smooth_indicator_grad",
    "compose_beta_hard",
]
