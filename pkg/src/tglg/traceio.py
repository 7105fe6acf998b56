"""Trace persistence: compact npz with a JSON metadata sidecar, plus a
flat CSV (one row per kept sample, named columns)."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .ising import IsingTrace
from .sampler import McmcTrace


class TraceFormatError(RuntimeError):
    pass


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        v = float(obj)
        return v if np.isfinite(v) else None
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def dump_json(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, default=_json_default)
        fh.write("\n")


def save_trace(trace, prefix) -> None:
    """Write <prefix>.npz and <prefix>.meta.json."""
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(trace, McmcTrace):
        arrays = dict(gamma=trace.gamma, alpha=trace.alpha, lam=trace.lam,
                      omega=trace.omega, sigma2_gamma=trace.sigma2_gamma,
                      sigma2_alpha=trace.sigma2_alpha, loglik=trace.loglik)
        if trace.epsilon is not None:
            arrays["epsilon"] = trace.epsilon
        if trace.sigma2_noise is not None:
            arrays["sigma2_noise"] = trace.sigma2_noise
    elif isinstance(trace, IsingTrace):
        arrays = dict(gamma=trace.gamma, beta=trace.beta, loglik=trace.loglik)
        if trace.sigma2_noise is not None:
            arrays["sigma2_noise"] = trace.sigma2_noise
    else:
        raise TraceFormatError(f"unknown trace type {type(trace)}")
    np.savez_compressed(prefix.with_suffix(".npz"), **arrays)
    dump_json({"meta": trace.meta, "acceptance": trace.acceptance},
              prefix.parent / (prefix.name + ".meta.json"))


def load_trace(prefix):
    """Inverse of save_trace; reconstructs the right trace type."""
    prefix = Path(prefix)
    npz_path = prefix.with_suffix(".npz")
    meta_path = prefix.parent / (prefix.name + ".meta.json")
    if not npz_path.exists() or not meta_path.exists():
        raise TraceFormatError(f"missing trace artifacts at {prefix}")
    with open(meta_path) as fh:
        side = json.load(fh)
    meta, acceptance = side["meta"], side["acceptance"]
    with np.load(npz_path) as z:
        arrays = {k: z[k] for k in z.files}
    if meta.get("model") == "ising":
        return IsingTrace(gamma=arrays["gamma"], beta=arrays["beta"],
                          loglik=arrays["loglik"],
                          sigma2_noise=arrays.get("sigma2_noise"),
                          acceptance=acceptance, meta=meta)
    return McmcTrace(gamma=arrays["gamma"], alpha=arrays["alpha"],
                     lam=arrays["lam"], omega=arrays["omega"],
                     sigma2_gamma=arrays["sigma2_gamma"],
                     sigma2_alpha=arrays["sigma2_alpha"],
                     loglik=arrays["loglik"],
                     epsilon=arrays.get("epsilon"),
                     sigma2_noise=arrays.get("sigma2_noise"),
                     acceptance=acceptance, meta=meta)


def save_trace_csv(trace, path) -> None:
    """One row per kept sample; columns named gamma_1..p, alpha_1..p, etc."""
    cols: list[tuple[str, np.ndarray]] = []
    if isinstance(trace, McmcTrace):
        n, p = trace.gamma.shape
        cols.append(("loglik", trace.loglik))
        cols.append(("lambda", trace.lam))
        cols.append(("sigma2_gamma", trace.sigma2_gamma))
        cols.append(("sigma2_alpha", trace.sigma2_alpha))
        if trace.epsilon is not None:
            cols.append(("epsilon", trace.epsilon))
        if trace.sigma2_noise is not None:
            cols.append(("sigma2_noise", trace.sigma2_noise))
        for j in range(trace.omega.shape[1]):
            cols.append((f"omega_{j + 1}", trace.omega[:, j]))
        for j in range(p):
            cols.append((f"gamma_{j + 1}", trace.gamma[:, j]))
        for j in range(p):
            cols.append((f"alpha_{j + 1}", trace.alpha[:, j]))
    else:
        n, p = trace.gamma.shape
        cols.append(("loglik", trace.loglik))
        if trace.sigma2_noise is not None:
            cols.append(("sigma2_noise", trace.sigma2_noise))
        for j in range(p):
            cols.append((f"gamma_{j + 1}", trace.gamma[:, j].astype(np.float64)))
        for j in range(p):
            cols.append((f"beta_{j + 1}", trace.beta[:, j]))
    header = ",".join(name for name, _ in cols)
    mat = np.column_stack([arr for _, arr in cols])
    np.savetxt(path, mat, delimiter=",", header=header, comments="")
