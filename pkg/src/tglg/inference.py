"""Posterior summaries (inclusion probabilities, conditional effect sizes,
median-probability selection) and the Gelman-Rubin convergence diagnostic."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class InferenceError(ValueError):
    pass


def inclusion_probability(trace) -> np.ndarray:
    """Per-node fraction of kept samples in which the node is selected,
    each sample judged against its own threshold."""
    ind = trace.selection_indicators()
    if ind.shape[0] == 0:
        raise InferenceError("empty trace")
    return ind.mean(axis=0)


def conditional_effect(trace) -> np.ndarray:
    """Mean effect size over the samples where each node is selected;
    NaN marks nodes that were never selected (not a zero effect)."""
    ind = trace.selection_indicators()
    if ind.shape[0] == 0:
        raise InferenceError("empty trace")
    counts = ind.sum(axis=0)
    sums = (trace.effect_samples() * ind).sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        eff = sums / counts
    return np.where(counts > 0, eff, np.nan)


def select_markers(inclusion: np.ndarray) -> np.ndarray:
    """Median-probability rule: nodes with inclusion strictly above 0.5."""
    inclusion = np.asarray(inclusion, dtype=np.float64).ravel()
    return np.flatnonzero(inclusion > 0.5)


@dataclass
class PosteriorSummary:
    """Pooled posterior summary across one or more chains."""

    inclusion: np.ndarray
    effect: np.ndarray
    selected: np.ndarray
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        eff = [None if not np.isfinite(v) else float(v) for v in self.effect]
        return {
            "inclusion": [float(v) for v in self.inclusion],
            "effect": eff,
            "selected_nodes_1based": [int(j) + 1 for j in self.selected],
            "meta": self.meta,
        }


def summarize(traces) -> PosteriorSummary:
    """Pool kept samples from one or more chains into a single summary."""
    traces = list(traces)
    if not traces:
        raise InferenceError("no traces to summarize")
    ind = np.vstack([t.selection_indicators() for t in traces])
    eff = np.vstack([t.effect_samples() for t in traces])
    counts = ind.sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        cond = (eff * ind).sum(axis=0) / counts
    inclusion = ind.mean(axis=0)
    return PosteriorSummary(
        inclusion=inclusion,
        effect=np.where(counts > 0, cond, np.nan),
        selected=select_markers(inclusion),
        meta={"n_chains": len(traces),
              "n_kept_total": int(ind.shape[0]),
              "model": traces[0].meta.get("model", "tglg")})


# ---------------------------------------------------------------------------
# Gelman-Rubin potential scale reduction


def gelman_rubin(chains: list[np.ndarray], split: bool = False) -> np.ndarray:
    """Classic PSRF per parameter from >= 2 equal-length chains.

    Each element of ``chains`` is an (N, k) matrix. Returns length-k PSRFs:
    sqrt(((N-1)/N + B/(N*W))) with B/W the between/within variances.
    Parameters with zero within-chain variance get NaN when the chains all
    agree on a constant and +inf when they disagree.
    """
    mats = [np.atleast_2d(np.asarray(c, dtype=np.float64)) for c in chains]
    if len(mats) < 2:
        raise InferenceError("need at least 2 chains")
    shape = mats[0].shape
    if any(m.shape != shape for m in mats):
        raise InferenceError("chains must have equal shapes")
    if shape[0] < 10:
        raise InferenceError("chains too short for the diagnostic")
    if split:
        half = shape[0] // 2
        mats = [m[:half] for m in mats] + [m[half:2 * half] for m in mats]
    x = np.stack(mats)                     # (m, n, k)
    m, n, _ = x.shape
    chain_means = x.mean(axis=1)           # (m, k)
    within = x.var(axis=1, ddof=1).mean(axis=0)
    between_over_n = chain_means.var(axis=0, ddof=1)   # B/N
    with np.errstate(invalid="ignore", divide="ignore"):
        psrf = np.sqrt((n - 1) / n + between_over_n / within)
    zero_w = within == 0
    psrf[zero_w & (between_over_n == 0)] = np.nan
    psrf[zero_w & (between_over_n > 0)] = np.inf
    return psrf


_SELECTORS = ("beta", "gamma", "alpha", "lambda", "scalars")


def _select_matrix(trace, selector: str) -> tuple[np.ndarray, list[str]]:
    # the threshold parameter is deliberately not part of "beta": the
    # composed effects are invariant to the joint rescaling of the latent
    # vector and the threshold, so only the beta_j carry observable meaning
    p = trace.p
    if selector == "beta":
        return trace.beta_samples(), [f"beta_{j + 1}" for j in range(p)]
    if selector == "gamma":
        return trace.gamma, [f"gamma_{j + 1}" for j in range(p)]
    if selector == "alpha":
        return trace.alpha, [f"alpha_{j + 1}" for j in range(p)]
    if selector == "lambda":
        return trace.lam.reshape(-1, 1), ["lambda"]
    if selector == "scalars":
        cols = [("lambda", trace.lam), ("sigma2_gamma", trace.sigma2_gamma),
                ("sigma2_alpha", trace.sigma2_alpha), ("loglik", trace.loglik)]
        if trace.epsilon is not None:
            cols.append(("epsilon", trace.epsilon))
        if trace.sigma2_noise is not None:
            cols.append(("sigma2_noise", trace.sigma2_noise))
        return np.column_stack([c for _, c in cols]), [n for n, _ in cols]
    raise InferenceError(f"selector must be one of {_SELECTORS} or a callable")


def gelman_rubin_traces(traces, selector="beta", split: bool = False) -> dict:
    """PSRF across chains for a named parameter family (or a callable
    returning an (N, k) matrix and names per trace). Reports per-parameter
    values plus the (2.5%, 97.5%) interval over the finite ones."""
    traces = list(traces)
    if len(traces) < 2:
        raise InferenceError("need at least 2 chains")
    if callable(selector):
        pairs = [selector(t) for t in traces]
        mats = [m for m, _ in pairs]
        names = pairs[0][1]
    else:
        mats, names = [], None
        for t in traces:
            m, names = _select_matrix(t, selector)
            mats.append(m)
    psrf = gelman_rubin(mats, split=split)
    finite = psrf[np.isfinite(psrf)]
    interval = (None, None) if finite.size == 0 else (
        float(np.percentile(finite, 2.5)), float(np.percentile(finite, 97.5)))
    return {"psrf": psrf, "names": names, "interval_2.5_97.5": interval,
            "n_chains": len(traces), "split": split}
