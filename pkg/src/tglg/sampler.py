"""Blockwise MCMC for the thresholded graph-Laplacian model: random-walk,
Langevin (MALA), conjugate Gibbs, and truncated-normal Metropolis updates,
with burn-in-only acceptance-rate adaptation."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.special import ndtr, ndtri

from . import _kernels
from .glm import Dataset
from .graph import Network, normalized_laplacian
from .prior import (FactorizationError, LaplacianPrecision, ModelState,
                    TglgHyper, smooth_threshold_grad)
import scipy.sparse as sp


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# truncated normal proposal machinery (interval [lo, hi], mean always inside)

def truncnorm_sample(mu: float, sigma: float, lo: float, hi: float,
                     rng: np.random.Generator) -> float:
    a = ndtr((lo - mu) / sigma)
    b = ndtr((hi - mu) / sigma)
    u = rng.random()
    x = mu + sigma * ndtri(a + u * (b - a))
    # inverse-CDF round-off can graze the bounds
    return float(min(max(x, lo), hi))


def truncnorm_logpdf(x: float, mu: float, sigma: float, lo: float, hi: float) -> float:
    if x < lo or x > hi:
        return -np.inf
    z = ndtr((hi - mu) / sigma) - ndtr((lo - mu) / sigma)
    return float(-0.5 * ((x - mu) / sigma) ** 2 - np.log(sigma)
                 - 0.5 * np.log(2.0 * np.pi) - np.log(z))


def adapt_step(tau2: float, observed_rate: float, target_rate: float,
               scale: float = 1.0) -> float:
    """Multiplicative step-size update tau2 * exp(scale*(observed-target)),
    clamped to a wide numeric range."""
    if not 0.0 <= observed_rate <= 1.0:
        raise ValueError("acceptance rate must be in [0, 1]")
    out = tau2 * float(np.exp(scale * (observed_rate - target_rate)))
    return float(min(max(out, 1e-12), 1e12))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SamplerConfig:
    """Chain length, step sizes, adaptation targets, and hyperparameters.

    MALA blocks tune to ``mala_target`` and random-walk blocks (including
    the truncated-normal threshold move) to ``rw_target``; pass
    ``real_data_preset()`` for the lower-acceptance variant.
    """

    n_iter: int = 30_000
    burn_in: int = 20_000
    thin: int = 1
    seed: int = 0
    mala_target: float = 0.5
    rw_target: float = 0.3
    tau2_omega: float = 0.1
    tau2_gamma: float = 0.01
    tau2_alpha: float = 0.01
    tau2_epsilon: float = 1e-5
    sigma2_lambda: float = 0.25
    adapt_interval: int = 50
    adapt_scale: float = 1.0
    sample_lambda: bool = True
    lambda_init: float | None = None
    lambda_lower: float = 0.0
    hyper: TglgHyper = field(default_factory=TglgHyper)

    def __post_init__(self):
        if not (0 <= self.burn_in < self.n_iter):
            raise ConfigError("need 0 <= burn_in < n_iter")
        if self.thin < 1:
            raise ConfigError("thin must be >= 1")
        for r in (self.mala_target, self.rw_target):
            if not 0.0 < r < 1.0:
                raise ConfigError("target rates must be in (0, 1)")
        for nm in ("tau2_omega", "tau2_gamma", "tau2_alpha", "tau2_epsilon",
                   "sigma2_lambda"):
            if not getattr(self, nm) > 0:
                raise ConfigError(f"{nm} must be positive")
        if self.adapt_interval < 1:
            raise ConfigError("adapt_interval must be >= 1")
        if self.lambda_init is not None and not (
                self.lambda_lower <= self.lambda_init <= self.hyper.lambda_upper):
            raise ConfigError("lambda_init outside its support")

    def real_data_preset(self) -> "SamplerConfig":
        return replace(self, mala_target=0.3, rw_target=0.15)

    @property
    def n_keep(self) -> int:
        return (self.n_iter - self.burn_in) // self.thin


@dataclass
class BlockStats:
    """Acceptance bookkeeping for one Metropolis block.

    Adaptation reads the acceptance rate over a short moving window of
    recent adaptation intervals, which damps regime-chasing without
    slowing the multiplicative update itself.
    """

    target: float
    tau2: float
    memory: int = 10
    proposals: int = 0
    accepts: int = 0
    post_proposals: int = 0
    post_accepts: int = 0
    window_proposals: int = 0
    window_accepts: int = 0
    flagged: int = 0

    def __post_init__(self):
        self._recent: list[tuple[int, int]] = []

    def record(self, accepted: bool, post_burn_in: bool):
        self.proposals += 1
        self.window_proposals += 1
        self.accepts += int(accepted)
        self.window_accepts += int(accepted)
        if post_burn_in:
            self.post_proposals += 1
            self.post_accepts += int(accepted)

    def close_window(self) -> float | None:
        """Roll the current window into the memory; return the smoothed rate
        (None when no proposals were seen recently)."""
        self._recent.append((self.window_accepts, self.window_proposals))
        if len(self._recent) > self.memory:
            self._recent.pop(0)
        self.window_proposals = 0
        self.window_accepts = 0
        acc = sum(a for a, _ in self._recent)
        prop = sum(n for _, n in self._recent)
        return acc / prop if prop else None

    def rate(self) -> float:
        return self.accepts / self.proposals if self.proposals else float("nan")

    def post_rate(self) -> float:
        return (self.post_accepts / self.post_proposals
                if self.post_proposals else float("nan"))

    def summary(self) -> dict:
        return {
            "proposals": self.proposals, "accepts": self.accepts,
            "rate": self.rate(), "post_proposals": self.post_proposals,
            "post_accepts": self.post_accepts, "post_rate": self.post_rate(),
            "final_step": self.tau2, "flagged": self.flagged,
        }


@dataclass
class McmcTrace:
    """Thinned post-burn-in draws plus acceptance metadata.

    ``selection_indicators``/``effect_samples`` give the per-sample node
    selection and effect-size matrices shared with the Ising baseline trace,
    so posterior summaries apply to either sampler unchanged.
    """

    gamma: np.ndarray
    alpha: np.ndarray
    lam: np.ndarray
    omega: np.ndarray
    sigma2_gamma: np.ndarray
    sigma2_alpha: np.ndarray
    loglik: np.ndarray
    epsilon: np.ndarray | None
    sigma2_noise: np.ndarray | None
    acceptance: dict
    meta: dict

    @property
    def n_kept(self) -> int:
        return self.gamma.shape[0]

    @property
    def p(self) -> int:
        return self.gamma.shape[1]

    def selection_indicators(self) -> np.ndarray:
        return np.abs(self.gamma) > self.lam[:, None]

    def effect_samples(self) -> np.ndarray:
        return self.alpha

    def beta_samples(self) -> np.ndarray:
        return np.where(self.selection_indicators(), self.alpha, 0.0)


def _sparse_matvec_cols(X: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """X @ beta exploiting sparsity of beta when the support is small."""
    nz = np.flatnonzero(beta)
    if nz.size == 0:
        return np.zeros(X.shape[0])
    if nz.size * 4 >= beta.size:
        return X @ beta
    return X[:, nz] @ beta[nz]


def sigma2_gamma_posterior(hyper: TglgHyper, p: int, quad: float) -> tuple[float, float]:
    """Conjugate inverse-gamma (shape, scale) for the latent-vector variance."""
    return hyper.a_gamma + 0.5 * p, hyper.b_gamma + 0.5 * quad


def sigma2_alpha_posterior(hyper: TglgHyper, p: int, sumsq: float) -> tuple[float, float]:
    return hyper.a_alpha + 0.5 * p, hyper.b_alpha + 0.5 * sumsq


def sample_inverse_gamma(shape: float, scale: float, rng: np.random.Generator) -> float:
    # tiny shapes put real mass below the subnormal range; cap the result so
    # an underflowing gamma draw cannot poison the chain with inf
    g = rng.gamma(shape)
    out = scale / g if g > 0.0 else np.inf
    return float(min(out, 1e300))


def epsilon_log_accept_ratio(prec_cur: LaplacianPrecision,
                             prec_new: LaplacianPrecision,
                             gamma: np.ndarray, sigma2_gamma: float,
                             mu_eps: float, sigma2_eps: float) -> float:
    """Log Metropolis ratio for a symmetric random-walk move of the ridge
    parameter: determinant, latent quadratic, and log-normal prior terms."""
    e_cur, e_new = prec_cur.epsilon, prec_new.epsilon
    gg = float(gamma @ gamma)
    out = 0.5 * (prec_new.log_det - prec_cur.log_det)
    out += -(e_new - e_cur) * gg / (2.0 * sigma2_gamma)
    out += np.log(e_cur) - np.log(e_new)
    le_new, le_cur = np.log(e_new), np.log(e_cur)
    out += -((le_new - mu_eps) ** 2 - (le_cur - mu_eps) ** 2) / (2.0 * sigma2_eps)
    return float(out)


def log_posterior_smooth(data: Dataset, prec: LaplacianPrecision,
                         state: ModelState, eps0: float) -> float:
    """Log posterior (up to a constant) with the smoothed composition
    beta = alpha * s(gamma), the differentiable surrogate whose exact
    gradients drive the Langevin proposals."""
    s = _kernels.smooth_indicator(state.gamma, state.lam, eps0)
    beta = state.alpha * s
    h = data.Z @ state.omega + data.X @ beta
    ll = _kernels.glm_log_likelihood(data.y, h, data.family.code, state.sigma2_noise)
    lp = prec.logpdf(state.gamma, state.sigma2_gamma)
    la = (-0.5 * float(state.alpha @ state.alpha) / state.sigma2_alpha
          - 0.5 * state.p * np.log(2.0 * np.pi * state.sigma2_alpha))
    return float(ll + lp + la)


def grad_posterior_smooth(data: Dataset, prec: LaplacianPrecision,
                          state: ModelState, eps0: float
                          ) -> tuple[np.ndarray, np.ndarray]:
    """Exact gradients of log_posterior_smooth wrt (gamma, alpha)."""
    s = _kernels.smooth_indicator(state.gamma, state.lam, eps0)
    beta = state.alpha * s
    h = data.Z @ state.omega + data.X @ beta
    g = _kernels.glm_grad_h(data.y, h, data.family.code, state.sigma2_noise)
    xtg = data.X.T @ g
    grad_gamma = (xtg * smooth_threshold_grad(state.alpha, state.gamma,
                                              state.lam, eps0)
                  + prec.grad_logpdf(state.gamma, state.sigma2_gamma))
    grad_alpha = xtg * s - state.alpha / state.sigma2_alpha
    return grad_gamma, grad_alpha


class TglgSampler:
    """One chain of the blockwise sampler; construct, then run().

    Update order per iteration: confounders (RW), latent vector (MALA),
    support refresh, effect sizes (MALA with off-support prior refresh),
    the two variance Gibbs draws, optional ridge RW, threshold move
    (truncated normal), and, for gaussian data, the conjugate noise
    variance. Step sizes adapt only during burn-in.
    """

    def __init__(self, data: Dataset, net: Network | None, config: SamplerConfig):
        hyper = config.hyper
        if net is None and hyper.epsilon_mode != "independent":
            raise ConfigError("a network is required unless epsilon_mode='independent'")
        if net is not None and net.p != data.p:
            raise ConfigError(f"network has {net.p} nodes but data has p={data.p}")
        self.data = data
        self.config = config
        self.hyper = hyper
        self.rng = np.random.default_rng(config.seed)
        p = data.p

        if hyper.epsilon_mode == "independent":
            self.L = sp.csc_matrix((p, p))
        else:
            self.L = normalized_laplacian(net).tocsc()
        eps = hyper.initial_epsilon()
        self.prec = LaplacianPrecision(self.L, eps)
        self.sample_epsilon = hyper.epsilon_mode == "lognormal"

        lam0 = (config.lambda_init if config.lambda_init is not None
                else hyper.lambda_upper / 20.0)
        self.state = ModelState(
            omega=np.zeros(data.q),
            alpha=self.rng.standard_normal(p),
            gamma=self.prec.sample(1.0, self.rng),
            lam=lam0, epsilon=eps, sigma2_gamma=1.0, sigma2_alpha=1.0,
            sigma2_noise=1.0 if data.family.is_gaussian else None)

        self._hz = data.Z @ self.state.omega
        self.h = self._hz + _sparse_matvec_cols(data.X, self.state.beta)
        self.ll = self._loglik(self.h)

        self.blocks: dict[str, BlockStats] = {}
        if data.q > 0:
            self.blocks["omega"] = BlockStats(config.rw_target, config.tau2_omega)
        self.blocks["gamma"] = BlockStats(config.mala_target, config.tau2_gamma)
        self.blocks["alpha"] = BlockStats(config.mala_target, config.tau2_alpha)
        if self.sample_epsilon:
            self.blocks["epsilon"] = BlockStats(config.rw_target, config.tau2_epsilon)
        if config.sample_lambda:
            self.blocks["lambda"] = BlockStats(config.rw_target, config.sigma2_lambda)
        self._post = False

    # -- likelihood helpers -------------------------------------------------

    def _loglik(self, h: np.ndarray) -> float:
        return _kernels.glm_log_likelihood(self.data.y, h,
                                           self.data.family.code,
                                           self.state.sigma2_noise)

    def _glm_grad(self, h: np.ndarray) -> np.ndarray:
        return _kernels.glm_grad_h(self.data.y, h, self.data.family.code,
                                   self.state.sigma2_noise)

    def _accept(self, log_ratio: float) -> bool:
        u = self.rng.random()  # one uniform per decision keeps streams aligned
        if np.isnan(log_ratio):
            return False
        return bool(np.log(u) < log_ratio)

    # -- block updates ------------------------------------------------------

    def step_omega(self) -> bool:
        st = self.state
        stats = self.blocks["omega"]
        step = np.sqrt(stats.tau2) * self.rng.standard_normal(self.data.q)
        omega_new = st.omega + step
        hz_new = self.data.Z @ omega_new
        h_new = hz_new + (self.h - self._hz)
        ll_new = self._loglik(h_new)
        log_ratio = (ll_new - self.ll
                     - 0.5 * (omega_new @ omega_new - st.omega @ st.omega)
                     / self.hyper.sigma2_omega)
        ok = self._accept(log_ratio)
        if ok:
            st.omega = omega_new
            self._hz, self.h, self.ll = hz_new, h_new, ll_new
        stats.record(ok, self._post)
        return ok

    def _gamma_drift(self, gamma: np.ndarray, h: np.ndarray,
                     alpha: np.ndarray, lam: float) -> np.ndarray:
        g = self._glm_grad(h)
        lik = (self.data.X.T @ g) * smooth_threshold_grad(
            alpha, gamma, lam, self.hyper.eps0)
        return lik - self.prec.matvec(gamma) / self.state.sigma2_gamma

    def step_gamma(self) -> bool:
        st = self.state
        stats = self.blocks["gamma"]
        tau2 = stats.tau2
        grad = self._gamma_drift(st.gamma, self.h, st.alpha, st.lam)
        if not np.isfinite(grad).all():
            stats.flagged += 1
            stats.record(False, self._post)
            return False
        mu_fwd = st.gamma + 0.5 * tau2 * grad
        gamma_new = mu_fwd + np.sqrt(tau2) * self.rng.standard_normal(st.p)
        beta_new = _kernels.compose_beta_hard(st.alpha, gamma_new, st.lam)
        h_new = self._hz + _sparse_matvec_cols(self.data.X, beta_new)
        grad_rev = self._gamma_drift(gamma_new, h_new, st.alpha, st.lam)
        if not np.isfinite(grad_rev).all():
            stats.flagged += 1
            stats.record(False, self._post)
            return False
        mu_rev = gamma_new + 0.5 * tau2 * grad_rev
        ll_new = self._loglik(h_new)
        d_fwd = gamma_new - mu_fwd
        d_rev = st.gamma - mu_rev
        log_q = (d_fwd @ d_fwd - d_rev @ d_rev) / (2.0 * tau2)
        log_prior = -(self.prec.quad_form(gamma_new)
                      - self.prec.quad_form(st.gamma)) / (2.0 * st.sigma2_gamma)
        log_ratio = log_q + log_prior + ll_new - self.ll
        ok = self._accept(log_ratio)
        if ok:
            st.gamma = gamma_new
            st.beta = beta_new
            st.xi = np.abs(gamma_new) > st.lam
            self.h, self.ll = h_new, ll_new
        stats.record(ok, self._post)
        return ok

    def step_xi(self) -> None:
        self.state.refresh_support()

    def step_alpha(self) -> bool:
        st = self.state
        stats = self.blocks["alpha"]
        off = ~st.xi
        n_off = int(off.sum())
        if n_off:
            st.alpha[off] = (np.sqrt(st.sigma2_alpha)
                             * self.rng.standard_normal(n_off))
        idx = np.flatnonzero(st.xi)
        if idx.size == 0:
            st.refresh_support()
            return False
        tau2 = stats.tau2
        Xs = self.data.X[:, idx]
        a_cur = st.alpha[idx]
        grad = Xs.T @ self._glm_grad(self.h) - a_cur / st.sigma2_alpha
        if not np.isfinite(grad).all():
            stats.flagged += 1
            stats.record(False, self._post)
            return False
        mu_fwd = a_cur + 0.5 * tau2 * grad
        a_new = mu_fwd + np.sqrt(tau2) * self.rng.standard_normal(idx.size)
        h_new = self.h + Xs @ (a_new - a_cur)
        ll_new = self._loglik(h_new)
        grad_rev = Xs.T @ self._glm_grad(h_new) - a_new / st.sigma2_alpha
        if not np.isfinite(grad_rev).all():
            stats.flagged += 1
            stats.record(False, self._post)
            return False
        mu_rev = a_new + 0.5 * tau2 * grad_rev
        d_fwd = a_new - mu_fwd
        d_rev = a_cur - mu_rev
        log_q = (d_fwd @ d_fwd - d_rev @ d_rev) / (2.0 * tau2)
        log_prior = -(a_new @ a_new - a_cur @ a_cur) / (2.0 * st.sigma2_alpha)
        log_ratio = log_q + log_prior + ll_new - self.ll
        ok = self._accept(log_ratio)
        if ok:
            st.alpha[idx] = a_new
            st.beta[idx] = a_new
            self.h, self.ll = h_new, ll_new
        stats.record(ok, self._post)
        return ok

    def step_sigma2_gamma(self) -> None:
        st = self.state
        shape, scale = sigma2_gamma_posterior(
            self.hyper, st.p, self.prec.quad_form(st.gamma))
        st.sigma2_gamma = sample_inverse_gamma(shape, scale, self.rng)

    def step_sigma2_alpha(self) -> None:
        st = self.state
        shape, scale = sigma2_alpha_posterior(
            self.hyper, st.p, float(st.alpha @ st.alpha))
        st.sigma2_alpha = sample_inverse_gamma(shape, scale, self.rng)

    def step_epsilon(self) -> bool:
        st = self.state
        stats = self.blocks["epsilon"]
        eps_new = st.epsilon + np.sqrt(stats.tau2) * self.rng.standard_normal()
        if eps_new <= 0:
            stats.record(False, self._post)
            return False
        try:
            prec_new = LaplacianPrecision(self.L, eps_new)
        except FactorizationError:
            stats.flagged += 1
            stats.record(False, self._post)
            return False
        log_ratio = epsilon_log_accept_ratio(
            self.prec, prec_new, st.gamma, st.sigma2_gamma,
            self.hyper.mu_epsilon, self.hyper.sigma2_epsilon)
        ok = self._accept(log_ratio)
        if ok:
            st.epsilon = float(eps_new)
            self.prec = prec_new
        stats.record(ok, self._post)
        return ok

    def step_lambda(self) -> bool:
        st, cfg = self.state, self.config
        stats = self.blocks["lambda"]
        sig = np.sqrt(stats.tau2)
        lo, hi = cfg.lambda_lower, self.hyper.lambda_upper
        lam_new = truncnorm_sample(st.lam, sig, lo, hi, self.rng)
        xi_new = np.abs(st.gamma) > lam_new
        if np.array_equal(xi_new, st.xi):
            h_new, ll_new, beta_new = self.h, self.ll, st.beta
        else:
            beta_new = _kernels.compose_beta_hard(st.alpha, st.gamma, lam_new)
            h_new = self._hz + _sparse_matvec_cols(self.data.X, beta_new)
            ll_new = self._loglik(h_new)
        log_ratio = (truncnorm_logpdf(st.lam, lam_new, sig, lo, hi)
                     - truncnorm_logpdf(lam_new, st.lam, sig, lo, hi)
                     + ll_new - self.ll)
        ok = self._accept(log_ratio)
        if ok:
            st.lam = float(lam_new)
            st.xi, st.beta = xi_new, beta_new
            self.h, self.ll = h_new, ll_new
        stats.record(ok, self._post)
        return ok

    def step_sigma2_noise(self) -> None:
        st = self.state
        r = self.data.y - self.h
        shape = self.hyper.a_noise + 0.5 * self.data.n
        scale = self.hyper.b_noise + 0.5 * float(r @ r)
        st.sigma2_noise = sample_inverse_gamma(shape, scale, self.rng)
        self.ll = self._loglik(self.h)

    # -- driver ---------------------------------------------------------

    def _iterate(self) -> None:
        if self.data.q > 0:
            self.step_omega()
        self.step_gamma()
        self.step_xi()
        self.step_alpha()
        self.step_sigma2_gamma()
        self.step_sigma2_alpha()
        if self.sample_epsilon:
            self.step_epsilon()
        if self.config.sample_lambda:
            self.step_lambda()
        if self.data.family.is_gaussian:
            self.step_sigma2_noise()

    def _adapt_all(self) -> None:
        for stats in self.blocks.values():
            rate = stats.close_window()
            if rate is not None:
                stats.tau2 = adapt_step(stats.tau2, rate, stats.target,
                                        self.config.adapt_scale)

    def run(self) -> McmcTrace:
        cfg = self.config
        data, st = self.data, self.state
        n_keep = cfg.n_keep
        gamma_tr = np.empty((n_keep, data.p))
        alpha_tr = np.empty((n_keep, data.p))
        omega_tr = np.empty((n_keep, data.q))
        lam_tr = np.empty(n_keep)
        s2g_tr = np.empty(n_keep)
        s2a_tr = np.empty(n_keep)
        ll_tr = np.empty(n_keep)
        eps_tr = np.empty(n_keep) if self.sample_epsilon else None
        s2e_tr = np.empty(n_keep) if data.family.is_gaussian else None

        t0 = time.perf_counter()
        kept = 0
        for it in range(1, cfg.n_iter + 1):
            self._post = it > cfg.burn_in
            self._iterate()
            if it <= cfg.burn_in:
                if it % cfg.adapt_interval == 0:
                    self._adapt_all()
            elif (it - cfg.burn_in) % cfg.thin == 0:
                gamma_tr[kept] = st.gamma
                alpha_tr[kept] = st.alpha
                omega_tr[kept] = st.omega
                lam_tr[kept] = st.lam
                s2g_tr[kept] = st.sigma2_gamma
                s2a_tr[kept] = st.sigma2_alpha
                ll_tr[kept] = self.ll
                if eps_tr is not None:
                    eps_tr[kept] = st.epsilon
                if s2e_tr is not None:
                    s2e_tr[kept] = st.sigma2_noise
                kept += 1
        wall = time.perf_counter() - t0

        meta = {
            "model": "tglg",
            "family": data.family.kind,
            "n": data.n, "p": data.p, "q": data.q,
            "seed": cfg.seed,
            "kernel_backend": _kernels.BACKEND,
            "wall_time_s": wall,
            "adaptation": "burn_in_only",
            "config": _config_dict(cfg),
        }
        return McmcTrace(
            gamma=gamma_tr, alpha=alpha_tr, lam=lam_tr, omega=omega_tr,
            sigma2_gamma=s2g_tr, sigma2_alpha=s2a_tr, loglik=ll_tr,
            epsilon=eps_tr, sigma2_noise=s2e_tr,
            acceptance={k: v.summary() for k, v in self.blocks.items()},
            meta=meta)


def _config_dict(cfg: SamplerConfig) -> dict:
    d = asdict(cfg)
    d["hyper"] = asdict(cfg.hyper)
    return d


def run_chain(data: Dataset, net: Network | None, config: SamplerConfig) -> McmcTrace:
    """Run one fully seeded chain and return its trace."""
    return TglgSampler(data, net, config).run()


def chain_seeds(master_seed: int, n_chains: int) -> list[int]:
    ss = np.random.SeedSequence(master_seed)
    return [int(s) for s in ss.generate_state(n_chains, dtype=np.uint64)]


def run_chains(data: Dataset, net: Network | None, config: SamplerConfig,
               n_chains: int, workers: int = 1) -> list[McmcTrace]:
    """Run independently seeded chains (optionally in a process pool)."""
    seeds = chain_seeds(config.seed, n_chains)
    configs = [replace(config, seed=s) for s in seeds]
    if workers > 1 and n_chains > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=min(workers, n_chains)) as pool:
            return list(pool.map(run_chain, [data] * n_chains,
                                 [net] * n_chains, configs))
    return [run_chain(data, net, c) for c in configs]
