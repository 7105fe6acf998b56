# Compiled drop-in for tglg._kernels.numpy_backend (same formulas, typed loops).

import numpy as np

cimport cython
from libc.math cimport atan, exp, fabs, isfinite, log, log1p, M_PI

GAUSSIAN = 0
BERNOULLI_LOGIT = 1

cdef double _LOG_2PI = log(2.0 * M_PI)


cdef inline double _logistic1(double h) nogil:
    cdef double e
    if h >= 0.0:
        return 1.0 / (1.0 + exp(-h))
    e = exp(h)
    return e / (1.0 + e)


cdef inline double _softplus1(double h) nogil:
    if h > 0.0:
        return h + log1p(exp(-h))
    return log1p(exp(h))


def logistic(h):
    """Overflow-safe elementwise logistic 1/(1+exp(-h))."""
    cdef const double[::1] hv = np.ascontiguousarray(h, dtype=np.float64)
    out = np.empty(hv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(hv.shape[0]):
        ov[i] = _logistic1(hv[i])
    return out


def glm_log_likelihood(y, h, family, noise_variance):
    """Sum over observations of the GLM log density a(h)y + b(h) + c(y)."""
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef const double[::1] hv = np.ascontiguousarray(h, dtype=np.float64)
    cdef int fam = family
    cdef double s2 = noise_variance if noise_variance is not None else 0.0
    cdef double acc = 0.0, r
    cdef Py_ssize_t i, n = yv.shape[0]
    if fam == 0:
        for i in range(n):
            r = yv[i] - hv[i]
            acc += r * r
        return -0.5 * acc / s2 - 0.5 * n * (_LOG_2PI + log(s2))
    for i in range(n):
        acc += yv[i] * hv[i] - _softplus1(hv[i])
    return acc


def glm_grad_h(y, h, family, noise_variance):
    """Per-observation derivative a'(h)y + b'(h) of the log density wrt h."""
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef const double[::1] hv = np.ascontiguousarray(h, dtype=np.float64)
    cdef int fam = family
    cdef double s2 = noise_variance if noise_variance is not None else 0.0
    out = np.empty(yv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    if fam == 0:
        for i in range(yv.shape[0]):
            ov[i] = (yv[i] - hv[i]) / s2
    else:
        for i in range(yv.shape[0]):
            ov[i] = yv[i] - _logistic1(hv[i])
    return out


def hard_indicator(gamma, lam):
    """Elementwise I(|gamma_j| > lam) as float 0/1 (strict inequality)."""
    cdef const double[::1] gv = np.ascontiguousarray(gamma, dtype=np.float64)
    cdef double l = lam
    out = np.empty(gv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(gv.shape[0]):
        ov[i] = 1.0 if fabs(gv[i]) > l else 0.0
    return out


def smooth_indicator(gamma, lam, eps0):
    """Arctan relaxation of the hard indicator, in (0, 1)."""
    cdef const double[::1] gv = np.ascontiguousarray(gamma, dtype=np.float64)
    cdef double l2 = <double>lam * <double>lam
    cdef double e0 = eps0
    out = np.empty(gv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    cdef double t
    for i in range(gv.shape[0]):
        t = (gv[i] * gv[i] - l2) / e0
        ov[i] = 0.5 * (1.0 + (2.0 / M_PI) * atan(t))
    return out


def smooth_indicator_grad(gamma, lam, eps0):
    """Derivative of smooth_indicator wrt gamma_j (0 in the far-overflow limit)."""
    cdef const double[::1] gv = np.ascontiguousarray(gamma, dtype=np.float64)
    cdef double l2 = <double>lam * <double>lam
    cdef double e0 = eps0
    out = np.empty(gv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    cdef double t, val
    for i in range(gv.shape[0]):
        t = (gv[i] * gv[i] - l2) / e0
        val = (2.0 * gv[i] / e0) / (M_PI * (1.0 + t * t))
        ov[i] = val if isfinite(val) else 0.0
    return out


def compose_beta_hard(alpha, gamma, lam):
    """beta = alpha * I(|gamma| > lam), exact zeros off support."""
    cdef const double[::1] av = np.ascontiguousarray(alpha, dtype=np.float64)
    cdef const double[::1] gv = np.ascontiguousarray(gamma, dtype=np.float64)
    cdef double l = lam
    out = np.empty(av.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(av.shape[0]):
        ov[i] = av[i] if fabs(gv[i]) > l else 0.0
    return out
