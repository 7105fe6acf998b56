"""Thresholded graph-Laplacian Gaussian prior: ridge-regularized Laplacian
precision with factorization, threshold functions (hard and arctan-smoothed),
effect composition, hyperparameters, and the full parameter state."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp
from scipy.linalg import solve_triangular
from scipy.sparse.linalg import splu

from . import _kernels


class FactorizationError(RuntimeError):
    """The ridge-regularized Laplacian could not be factorized as SPD."""


# below this size a dense Cholesky is cheaper than SuperLU setup
DENSE_CUTOFF = 200


class LaplacianPrecision:
    """Factorized Q = L + epsilon*I, the latent-vector prior precision up to
    the 1/sigma2 scale.

    Small matrices use a dense Cholesky; large ones a sparse LDL^T via
    SuperLU in symmetric mode. Exposes the log-determinant, quadratic forms,
    solves, exact prior draws, and the prior log-density/gradient. Instances
    are immutable after construction and safe to share across chains.
    """

    def __init__(self, laplacian, epsilon: float, dense_cutoff: int = DENSE_CUTOFF):
        if not epsilon > 0:
            raise FactorizationError("epsilon must be positive")
        L = sp.csc_matrix(laplacian)
        if L.shape[0] != L.shape[1]:
            raise FactorizationError("laplacian must be square")
        self.p = L.shape[0]
        self.epsilon = float(epsilon)
        self.Q = (L + epsilon * sp.eye(self.p, format="csc")).tocsc()
        self._dense = self.p <= dense_cutoff
        if self._dense:
            try:
                self._chol = np.linalg.cholesky(self.Q.toarray())
            except np.linalg.LinAlgError as exc:
                raise FactorizationError(f"dense Cholesky failed: {exc}") from exc
            self.log_det = 2.0 * float(np.sum(np.log(np.diag(self._chol))))
        else:
            try:
                lu = splu(self.Q, diag_pivot_thresh=0.0,
                          permc_spec="MMD_AT_PLUS_A",
                          options=dict(SymmetricMode=True))
            except RuntimeError as exc:
                raise FactorizationError(f"sparse factorization failed: {exc}") from exc
            d = lu.U.diagonal()
            if np.any(d <= 0) or not np.array_equal(lu.perm_r, lu.perm_c):
                raise FactorizationError("matrix is not symmetric positive definite")
            self._lu = lu
            # C with C C^T = Q, used for exact prior draws via Q^{-1} (C z);
            # Pr^T has its row-i entry in column perm_r[i]
            Pr_t = sp.csc_matrix(
                (np.ones(self.p), (np.arange(self.p), lu.perm_r)),
                shape=(self.p, self.p))
            self._sample_factor = (Pr_t @ lu.L @ sp.diags(np.sqrt(d))).tocsc()
            self.log_det = float(np.sum(np.log(d)))

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.Q @ v

    def quad_form(self, v: np.ndarray) -> float:
        """v^T Q v."""
        return float(v @ (self.Q @ v))

    def solve(self, b: np.ndarray) -> np.ndarray:
        if self._dense:
            w = solve_triangular(self._chol, b, lower=True)
            return solve_triangular(self._chol.T, w, lower=False)
        return self._lu.solve(b)

    def sample(self, sigma2: float, rng: np.random.Generator,
               size: int | None = None) -> np.ndarray:
        """Exact draw(s) from N(0, sigma2 * Q^{-1}).

        Dense path solves the transposed Cholesky factor against white
        noise; sparse path whitens through the LDL^T factor and one solve.
        Returns shape (p,) or (size, p).
        """
        k = 1 if size is None else int(size)
        z = rng.standard_normal((self.p, k))
        if self._dense:
            x = solve_triangular(self._chol.T, z, lower=False)
        else:
            x = self._lu.solve(self._sample_factor @ z)
        x *= np.sqrt(sigma2)
        return x[:, 0] if size is None else np.ascontiguousarray(x.T)

    def logpdf(self, gamma: np.ndarray, sigma2: float) -> float:
        """Normalized log-density of N(0, sigma2 * Q^{-1}) at gamma."""
        quad = self.quad_form(gamma)
        return (-0.5 * quad / sigma2 + 0.5 * self.log_det
                - 0.5 * self.p * np.log(2.0 * np.pi * sigma2))

    def grad_logpdf(self, gamma: np.ndarray, sigma2: float) -> np.ndarray:
        """Gradient -Q gamma / sigma2 of the prior log-density."""
        return -(self.Q @ gamma) / sigma2


def hard_threshold(gamma, lam: float) -> np.ndarray:
    """0/1 selection indicators I(|gamma_j| > lam); equality maps to 0."""
    if lam < 0:
        raise ValueError("threshold must be nonnegative")
    return _kernels.hard_indicator(np.asarray(gamma, dtype=np.float64).ravel(), lam)


def smooth_threshold(gamma, lam: float, eps0: float) -> np.ndarray:
    """Arctan relaxation of the indicator; exactly 0.5 at |gamma_j| = lam
    and converging to the hard indicator as eps0 -> 0."""
    if not eps0 > 0:
        raise ValueError("eps0 must be positive")
    return _kernels.smooth_indicator(np.asarray(gamma, dtype=np.float64).ravel(),
                                     lam, eps0)


def smooth_threshold_grad(alpha, gamma, lam: float, eps0: float) -> np.ndarray:
    """d beta_j / d gamma_j = alpha_j * d/d gamma of the smoothed indicator."""
    if not eps0 > 0:
        raise ValueError("eps0 must be positive")
    alpha = np.asarray(alpha, dtype=np.float64).ravel()
    gamma = np.asarray(gamma, dtype=np.float64).ravel()
    return alpha * _kernels.smooth_indicator_grad(gamma, lam, eps0)


def compose_beta(alpha, gamma, lam: float, mode: str = "hard",
                 eps0: float | None = None) -> np.ndarray:
    """Elementwise effect composition beta = alpha * threshold(gamma).

    Hard mode produces exact zeros off support; smooth mode multiplies by
    the arctan relaxation (used only where a derivative is needed).
    """
    alpha = np.asarray(alpha, dtype=np.float64).ravel()
    gamma = np.asarray(gamma, dtype=np.float64).ravel()
    if alpha.shape != gamma.shape:
        raise ValueError("alpha and gamma lengths differ")
    if mode == "hard":
        return _kernels.compose_beta_hard(alpha, gamma, lam)
    if mode == "smooth":
        if eps0 is None:
            raise ValueError("smooth mode needs eps0")
        return alpha * smooth_threshold(gamma, lam, eps0)
    raise ValueError(f"unknown mode {mode!r}")


EPSILON_MODES = ("fixed", "lognormal", "independent")


@dataclass(frozen=True)
class TglgHyper:
    """Prior hyperparameters.

    epsilon_mode selects how the Laplacian ridge is handled: "fixed" keeps
    it at epsilon_fixed, "lognormal" samples it under log eps ~
    N(mu_epsilon, sigma2_epsilon), and "independent" drops the network
    entirely (identity precision on the latent vector).
    """

    lambda_upper: float = 10.0
    a_gamma: float = 0.01
    b_gamma: float = 0.01
    a_alpha: float = 0.01
    b_alpha: float = 0.01
    a_noise: float = 0.01
    b_noise: float = 0.01
    sigma2_omega: float = 50.0
    eps0: float = 1e-8
    epsilon_mode: str = "fixed"
    epsilon_fixed: float = 1e-5
    mu_epsilon: float = -5.0
    sigma2_epsilon: float = 9.0

    def __post_init__(self):
        positives = ("lambda_upper", "a_gamma", "b_gamma", "a_alpha", "b_alpha",
                     "a_noise", "b_noise", "sigma2_omega", "eps0",
                     "epsilon_fixed", "sigma2_epsilon")
        for name in positives:
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.epsilon_mode not in EPSILON_MODES:
            raise ValueError(f"epsilon_mode must be one of {EPSILON_MODES}")

    def initial_epsilon(self) -> float:
        if self.epsilon_mode == "fixed":
            return self.epsilon_fixed
        if self.epsilon_mode == "lognormal":
            return float(np.exp(self.mu_epsilon))
        return 1.0

    def with_overrides(self, **kw) -> "TglgHyper":
        return replace(self, **kw)


@dataclass
class ModelState:
    """One point in parameter space, with the derived support set and
    composed effects kept consistent via refresh_support()."""

    omega: np.ndarray
    alpha: np.ndarray
    gamma: np.ndarray
    lam: float
    epsilon: float
    sigma2_gamma: float
    sigma2_alpha: float
    sigma2_noise: float | None = None
    xi: np.ndarray = field(init=False)
    beta: np.ndarray = field(init=False)

    def __post_init__(self):
        self.omega = np.asarray(self.omega, dtype=np.float64).ravel()
        self.alpha = np.asarray(self.alpha, dtype=np.float64).ravel()
        self.gamma = np.asarray(self.gamma, dtype=np.float64).ravel()
        self.refresh_support()

    @property
    def p(self) -> int:
        return self.alpha.shape[0]

    def refresh_support(self) -> None:
        """Recompute xi = {j: |gamma_j| > lam} and beta = alpha on xi."""
        self.xi = np.abs(self.gamma) > self.lam
        self.beta = _kernels.compose_beta_hard(self.alpha, self.gamma, self.lam)

    def copy(self) -> "ModelState":
        return ModelState(
            omega=self.omega.copy(), alpha=self.alpha.copy(),
            gamma=self.gamma.copy(), lam=self.lam, epsilon=self.epsilon,
            sigma2_gamma=self.sigma2_gamma, sigma2_alpha=self.sigma2_alpha,
            sigma2_noise=self.sigma2_noise)
