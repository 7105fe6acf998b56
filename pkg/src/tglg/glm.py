"""Exponential-family GLM densities for gaussian-identity and Bernoulli-logit
responses: log-likelihoods, gradients wrt the linear predictor, prediction,
and the covariate/response container."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels


class GlmError(ValueError):
    pass


@dataclass(frozen=True)
class GlmFamily:
    """Response family. ``noise_variance`` applies to the gaussian family
    only; leave it None when the noise variance is to be estimated."""

    kind: str
    noise_variance: float | None = None

    VALID = ("gaussian", "bernoulli_logit")

    def __post_init__(self):
        if self.kind not in self.VALID:
            raise GlmError(f"unknown family {self.kind!r}")
        if self.kind == "gaussian":
            if self.noise_variance is not None and not self.noise_variance > 0:
                raise GlmError("gaussian noise variance must be positive")
        elif self.noise_variance is not None:
            raise GlmError("noise_variance only applies to the gaussian family")

    @classmethod
    def gaussian(cls, noise_variance: float | None = None) -> "GlmFamily":
        return cls("gaussian", noise_variance)

    @classmethod
    def bernoulli_logit(cls) -> "GlmFamily":
        return cls("bernoulli_logit")

    @property
    def code(self) -> int:
        return _kernels.GAUSSIAN if self.kind == "gaussian" else _kernels.BERNOULLI_LOGIT

    @property
    def is_gaussian(self) -> bool:
        return self.kind == "gaussian"


def _as_matrix(a, name: str) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise GlmError(f"{name} must be a 2-d array")
    return a


@dataclass(frozen=True)
class Dataset:
    """Rows of node covariates X (n x p), confounders Z (n x q, q may be 0),
    and the response y, with the response family."""

    X: np.ndarray
    y: np.ndarray
    family: GlmFamily
    Z: np.ndarray | None = None

    def __post_init__(self):
        X = _as_matrix(self.X, "X")
        y = np.ascontiguousarray(self.y, dtype=np.float64).ravel()
        Z = (np.empty((X.shape[0], 0)) if self.Z is None
             else _as_matrix(self.Z, "Z"))
        if len(y) != X.shape[0] or Z.shape[0] != X.shape[0]:
            raise GlmError("X, Z, y row counts disagree")
        if not (np.isfinite(X).all() and np.isfinite(y).all() and np.isfinite(Z).all()):
            raise GlmError("dataset contains non-finite entries")
        if self.family.kind == "bernoulli_logit" and not np.isin(y, (0.0, 1.0)).all():
            raise GlmError("logit responses must be 0/1")
        for arr in (X, y, Z):
            arr.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "Z", Z)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @property
    def q(self) -> int:
        return self.Z.shape[1]


def _resolve_noise(data: Dataset, noise_variance: float | None) -> float | None:
    if data.family.kind != "gaussian":
        return None
    nv = noise_variance if noise_variance is not None else data.family.noise_variance
    if nv is None or not nv > 0:
        raise GlmError("gaussian log-likelihood needs a positive noise variance")
    return nv


def log_likelihood(data: Dataset, h, noise_variance: float | None = None) -> float:
    """Sum of per-observation GLM log densities at linear predictor h."""
    h = np.ascontiguousarray(h, dtype=np.float64)
    if h.shape != (data.n,):
        raise GlmError("linear predictor has wrong length")
    if not np.isfinite(h).all():
        raise GlmError("non-finite linear predictor")
    return _kernels.glm_log_likelihood(data.y, h, data.family.code,
                                       _resolve_noise(data, noise_variance))


def grad_h(data: Dataset, h, noise_variance: float | None = None) -> np.ndarray:
    """Gradient of log_likelihood wrt each h_i."""
    h = np.ascontiguousarray(h, dtype=np.float64)
    if h.shape != (data.n,):
        raise GlmError("linear predictor has wrong length")
    if not np.isfinite(h).all():
        raise GlmError("non-finite linear predictor")
    return _kernels.glm_grad_h(data.y, h, data.family.code,
                               _resolve_noise(data, noise_variance))


def linear_predictor(X, beta, Z=None, omega=None) -> np.ndarray:
    X = _as_matrix(X, "X")
    beta = np.asarray(beta, dtype=np.float64).ravel()
    if beta.shape[0] != X.shape[1]:
        raise GlmError("beta length does not match X columns")
    h = X @ beta
    if Z is not None and np.asarray(Z).size:
        Z = _as_matrix(Z, "Z")
        omega = np.asarray(omega, dtype=np.float64).ravel()
        if Z.shape[0] != X.shape[0] or omega.shape[0] != Z.shape[1]:
            raise GlmError("Z/omega shapes do not match")
        h = h + Z @ omega
    return h


def predict(X, beta, family: GlmFamily, Z=None, omega=None) -> np.ndarray:
    """Mean response on new rows: identity link for gaussian, logistic for
    the binary family."""
    h = linear_predictor(X, beta, Z, omega)
    if family.kind == "gaussian":
        return h
    return _kernels.logistic(h)


def load_dataset(x_path, y_path, family: GlmFamily, z_path=None) -> Dataset:
    """Read headerless numeric CSVs (X matrix, y column, optional Z matrix)."""
    X = np.loadtxt(x_path, delimiter=",", ndmin=2)
    y = np.loadtxt(y_path, delimiter=",").ravel()
    Z = np.loadtxt(z_path, delimiter=",", ndmin=2) if z_path else None
    return Dataset(X=X, y=y, family=family, Z=Z)
