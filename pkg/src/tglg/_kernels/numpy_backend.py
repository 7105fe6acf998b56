"""Pure-NumPy implementations of the per-iteration numeric kernels.

These are the reference implementations; ``tglg._kernels._speedups`` is a
compiled drop-in replacement built from the same formulas and branch
structure. Backends agree to a few ulps elementwise (vectorized
transcendentals can round differently than libm) and reductions can differ
by summation order.

Family codes: 0 = gaussian identity link, 1 = Bernoulli logit link.
"""

import numpy as np

GAUSSIAN = 0
BERNOULLI_LOGIT = 1

_LOG_2PI = float(np.log(2.0 * np.pi))


def logistic(h):
    """Overflow-safe elementwise logistic 1/(1+exp(-h))."""
    h = np.asarray(h, dtype=np.float64)
    out = np.empty_like(h)
    pos = h >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-h[pos]))
    eh = np.exp(h[~pos])
    out[~pos] = eh / (1.0 + eh)
    return out


def _softplus(h):
    # log(1 + exp(h)) without overflow for large |h|
    out = np.empty_like(h)
    pos = h > 0
    out[pos] = h[pos] + np.log1p(np.exp(-h[pos]))
    out[~pos] = np.log1p(np.exp(h[~pos]))
    return out


def glm_log_likelihood(y, h, family, noise_variance):
    """Sum over observations of the GLM log density a(h)y + b(h) + c(y)."""
    y = np.asarray(y, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    if family == GAUSSIAN:
        r = y - h
        return float(-0.5 * np.sum(r * r) / noise_variance
                     - 0.5 * y.size * (_LOG_2PI + np.log(noise_variance)))
    return float(np.sum(y * h - _softplus(h)))


def glm_grad_h(y, h, family, noise_variance):
    """Per-observation derivative of the log density wrt the linear predictor.

    This is a'(h)y + b'(h): (y-h)/sigma2 for gaussian, y - logistic(h) for
    the logit link.
    """
    y = np.asarray(y, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    if family == GAUSSIAN:
        return (y - h) / noise_variance
    return y - logistic(h)


def hard_indicator(gamma, lam):
    """Elementwise I(|gamma_j| > lam) as float 0/1 (strict inequality)."""
    gamma = np.asarray(gamma, dtype=np.float64)
    return (np.abs(gamma) > lam).astype(np.float64)


def smooth_indicator(gamma, lam, eps0):
    """Arctan relaxation of the hard indicator, in (0, 1).

    0.5 * (1 + (2/pi) * arctan((gamma^2 - lam^2) / eps0)).
    """
    gamma = np.asarray(gamma, dtype=np.float64)
    with np.errstate(over="ignore"):
        t = (gamma * gamma - lam * lam) / eps0
    return 0.5 * (1.0 + (2.0 / np.pi) * np.arctan(t))


def smooth_indicator_grad(gamma, lam, eps0):
    """Derivative of smooth_indicator wrt gamma_j.

    (2*gamma/eps0) / (pi * (1 + (gamma^2 - lam^2)^2 / eps0^2)); decays to 0
    far from the |gamma| = lam boundary (overflow in the quartic term is
    benign and yields the correct 0 limit).
    """
    gamma = np.asarray(gamma, dtype=np.float64)
    with np.errstate(over="ignore", invalid="ignore"):
        t = (gamma * gamma - lam * lam) / eps0
        out = (2.0 * gamma / eps0) / (np.pi * (1.0 + t * t))
    return np.where(np.isfinite(out), out, 0.0)


def compose_beta_hard(alpha, gamma, lam):
    """beta = alpha * I(|gamma| > lam), exact zeros off support."""
    alpha = np.asarray(alpha, dtype=np.float64)
    gamma = np.asarray(gamma, dtype=np.float64)
    return np.where(np.abs(gamma) > lam, alpha, 0.0)
