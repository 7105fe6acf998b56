"""Command-line entry points: simulate, fit, evaluate, diagnose.

A YAML config file supplies defaults; command-line flags override config
values. All commands are deterministic given the config (seeds included)
and fail with a single-line ``error[CODE]: message`` on stderr.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import fields as dc_fields
from pathlib import Path

import click
import numpy as np
import yaml

from . import __version__
from .glm import Dataset, GlmFamily, GlmError, load_dataset, predict
from .graph import FeasibilityError, GraphError, Network, load_edge_list
from .inference import (InferenceError, gelman_rubin_traces, select_markers,
                        summarize)
from .ising import IsingConfig, IsingError, ising_gibbs_chain
from .metrics import EvalReport, MetricsError, aggregate, auc, classification_error, pmse, tp_fp
from .prior import TglgHyper
from .sampler import ConfigError, SamplerConfig, chain_seeds, run_chain
from .simulate import GenerationError, SimScenario, load_truth, make_scenario, save_replicate
from .traceio import dump_json, load_trace, save_trace, save_trace_csv


class CliError(click.ClickException):
    """Error with a machine-parsable code; exits nonzero."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code

    def show(self, file=None):
        click.echo(f"error[{self.code}]: {self.format_message()}", err=True)


_FAMILY_ALIASES = {"gaussian": "gaussian", "logit": "bernoulli_logit",
                   "bernoulli_logit": "bernoulli_logit"}


def _read_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = yaml.safe_load(fh) or {}
    except FileNotFoundError:
        raise CliError("CONFIG", f"config file not found: {path}")
    except yaml.YAMLError as exc:
        raise CliError("CONFIG", f"bad YAML in {path}: {exc}")
    if not isinstance(cfg, dict):
        raise CliError("CONFIG", "config root must be a mapping")
    return cfg


def _dataclass_from(section: dict, cls, error_label: str):
    known = {f.name for f in dc_fields(cls)}
    unknown = set(section) - known
    if unknown:
        raise CliError("CONFIG", f"unknown {error_label} keys: {sorted(unknown)}")
    try:
        return cls(**section)
    except (ValueError, TypeError) as exc:
        raise CliError("CONFIG", f"bad {error_label} settings: {exc}")


def _resolve_family(flag: str | None, cfg: dict, truth: dict | None) -> str:
    raw = flag or cfg.get("family") or (truth or {}).get("family")
    if raw is None:
        raise CliError("CONFIG", "family not given (flag, config, or truth.json)")
    if raw not in _FAMILY_ALIASES:
        raise CliError("CONFIG", f"unknown family {raw!r}")
    return _FAMILY_ALIASES[raw]


def _config_hash(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@click.group()
@click.version_option(__version__)
def main():
    """Bayesian network marker selection toolkit."""


# ---------------------------------------------------------------------------
# simulate


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="YAML config with a 'scenario' section.")
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="Output directory (overrides config output_dir).")
@click.option("--replicates", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--family", type=click.Choice(["gaussian", "logit"]), default=None)
def simulate(config_path, out_dir, replicates, seed, family):
    """Generate replicate datasets for a synthetic scenario."""
    cfg = _read_config(config_path)
    scn_cfg = dict(cfg.get("scenario") or {})
    if not scn_cfg:
        raise CliError("CONFIG", "config needs a 'scenario' section")
    master_seed = seed if seed is not None else cfg.get("seed")
    if master_seed is None:
        raise CliError("CONFIG", "a seed is required (flag or config)")
    if family is not None:
        scn_cfg["family"] = _FAMILY_ALIASES[family]
    elif "family" in scn_cfg:
        scn_cfg["family"] = _resolve_family(None, scn_cfg, None)
    n_rep = replicates if replicates is not None else int(cfg.get("replicates", 1))
    out = Path(out_dir or cfg.get("output_dir") or ".")
    if n_rep < 1:
        raise CliError("CONFIG", "replicates must be >= 1")

    rep_seeds = chain_seeds(int(master_seed), n_rep)
    manifest = {"master_seed": int(master_seed),
                "config_hash": _config_hash({**scn_cfg, "replicates": n_rep}),
                "version": __version__, "replicates": []}
    for r, rs in enumerate(rep_seeds):
        scn_cfg["seed"] = rs
        try:
            scn = _dataclass_from(scn_cfg, SimScenario, "scenario")
            sim = make_scenario(scn)
        except (GenerationError, FeasibilityError, GraphError) as exc:
            raise CliError("INFEASIBLE", str(exc))
        rep_dir = out / f"rep_{r:03d}"
        save_replicate(sim, rep_dir)
        manifest["replicates"].append({"dir": rep_dir.name, "seed": rs})
        click.echo(f"wrote {rep_dir}")
    out.mkdir(parents=True, exist_ok=True)
    dump_json(manifest, out / "manifest.json")
    click.echo(f"wrote {out / 'manifest.json'}")


# ---------------------------------------------------------------------------
# fit


def _load_fit_inputs(data_dir: Path, family_kind: str):
    xs = data_dir / "X_train.csv"
    ys = data_dir / "y_train.csv"
    if not xs.exists():
        xs, ys = data_dir / "X.csv", data_dir / "y.csv"
    if not xs.exists() or not ys.exists():
        raise CliError("ARTIFACT", f"no X/y CSVs under {data_dir}")
    zs = data_dir / "Z_train.csv"
    if not zs.exists():
        zs = data_dir / "Z.csv"
    fam = (GlmFamily.gaussian() if family_kind == "gaussian"
           else GlmFamily.bernoulli_logit())
    try:
        data = load_dataset(xs, ys, fam, zs if zs.exists() else None)
    except (GlmError, ValueError) as exc:
        raise CliError("PARSE", f"bad data files: {exc}")
    edge_path = data_dir / "edges.txt"
    net = None
    if edge_path.exists():
        try:
            net = load_edge_list(edge_path)
        except GraphError as exc:
            raise CliError("PARSE", str(exc))
    return data, net


def _write_fit_outputs(out: Path, traces, summary, grid_report=None):
    out.mkdir(parents=True, exist_ok=True)
    for k, tr in enumerate(traces):
        save_trace(tr, out / f"chain_{k:02d}")
        save_trace_csv(tr, out / f"chain_{k:02d}.csv")
    dump_json(summary.to_dict(), out / "summary.json")
    dump_json({f"chain_{k:02d}": tr.acceptance for k, tr in enumerate(traces)},
              out / "acceptance.json")
    if len(traces) >= 2:
        gr = gelman_rubin_traces(traces, selector="beta")
        dump_json({"psrf": gr["psrf"], "names": gr["names"],
                   "interval_2.5_97.5": gr["interval_2.5_97.5"],
                   "n_chains": gr["n_chains"]}, out / "psrf.json")
    if grid_report is not None:
        dump_json(grid_report, out / "lambda_grid.json")


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--data-dir", type=click.Path(), required=True,
              help="Directory with X/y CSVs, edges.txt, optional truth.json.")
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--chains", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--family", type=click.Choice(["gaussian", "logit"]), default=None)
@click.option("--epsilon-mode",
              type=click.Choice(["fixed", "lognormal", "independent"]),
              default=None)
@click.option("--baseline", type=click.Choice(["tglg", "ising"]), default=None)
@click.option("--b", "coupling_b", type=float, default=None,
              help="Ising coupling strength.")
@click.option("--lambda-grid", default=None,
              help="Comma-separated thresholds to profile with a fixed-threshold fit.")
@click.option("--workers", type=int, default=None)
def fit(config_path, data_dir, out_dir, chains, seed, family, epsilon_mode,
        baseline, coupling_b, lambda_grid, workers):
    """Fit the sampler (or the Ising baseline) and write traces + summary."""
    cfg = _read_config(config_path)
    data_dir = Path(data_dir)
    truth = None
    if (data_dir / "truth.json").exists():
        truth = load_truth(data_dir)
    family_kind = _resolve_family(family, cfg, truth)
    data, net = _load_fit_inputs(data_dir, family_kind)

    n_chains = chains if chains is not None else int(cfg.get("chains", 1))
    if n_chains < 1:
        raise CliError("CONFIG", "chains must be >= 1")
    n_workers = workers if workers is not None else int(cfg.get("workers", 1))
    master_seed = seed if seed is not None else cfg.get("seed")
    if master_seed is None:
        raise CliError("CONFIG", "a seed is required (flag or config)")
    model = baseline or cfg.get("baseline", "tglg")
    out = Path(out_dir)

    if model == "ising":
        ising_cfg = dict(cfg.get("ising") or {})
        ising_cfg.update({k: v for k, v in (cfg.get("sampler") or {}).items()
                          if k in ("n_iter", "burn_in", "thin")})
        if coupling_b is not None:
            ising_cfg["coupling_b"] = coupling_b
        if net is None:
            raise CliError("ARTIFACT", "the Ising baseline needs edges.txt")
        traces = []
        try:
            for s in chain_seeds(int(master_seed), n_chains):
                icfg = _dataclass_from({**ising_cfg, "seed": s}, IsingConfig,
                                       "ising")
                traces.append(ising_gibbs_chain(data, net, icfg))
        except IsingError as exc:
            raise CliError("DIMENSION", str(exc))
        summary = summarize(traces)
        _write_fit_outputs(out, traces, summary)
        click.echo(f"wrote {out} ({n_chains} ising chain(s))")
        return

    hyper = _dataclass_from(dict(cfg.get("prior") or {}), TglgHyper, "prior")
    if epsilon_mode is not None:
        hyper = hyper.with_overrides(epsilon_mode=epsilon_mode)
    samp_cfg = dict(cfg.get("sampler") or {})
    samp_cfg["hyper"] = hyper
    samp_cfg["seed"] = int(master_seed)

    grid_report = None
    try:
        if lambda_grid:
            values = [float(v) for v in lambda_grid.split(",") if v.strip()]
            if not values:
                raise CliError("CONFIG", "empty --lambda-grid")
            candidates = []
            for lam in values:
                sc = _dataclass_from({**samp_cfg, "sample_lambda": False,
                                      "lambda_init": lam}, SamplerConfig,
                                     "sampler")
                trs = _run_tglg_chains(data, net, sc, n_chains, n_workers)
                mean_ll = float(np.mean(np.concatenate([t.loglik for t in trs])))
                candidates.append({"lambda": lam, "mean_loglik": mean_ll})
                if (grid_report is None
                        or mean_ll > grid_report["best"]["mean_loglik"]):
                    grid_report = {"best": candidates[-1], "candidates": None}
                    traces = trs
            grid_report["candidates"] = candidates
        else:
            sc = _dataclass_from(samp_cfg, SamplerConfig, "sampler")
            traces = _run_tglg_chains(data, net, sc, n_chains, n_workers)
    except ConfigError as exc:
        raise CliError("DIMENSION" if "nodes" in str(exc) else "CONFIG", str(exc))

    summary = summarize(traces)
    if data.q > 0:
        summary.meta["omega_mean"] = np.vstack(
            [t.omega for t in traces]).mean(axis=0).tolist()
    summary.meta["family"] = family_kind
    _write_fit_outputs(out, traces, summary, grid_report)
    click.echo(f"wrote {out} ({n_chains} chain(s))")


def _run_tglg_chains(data, net, config, n_chains, workers):
    from .sampler import run_chains
    return run_chains(data, net, config, n_chains, workers=workers)


# ---------------------------------------------------------------------------
# evaluate


def _evaluate_one(fit_dir: Path, rep_dir: Path, family_flag: str | None) -> EvalReport:
    summary_path = fit_dir / "summary.json"
    if not summary_path.exists():
        raise CliError("ARTIFACT", f"missing {summary_path}")
    with open(summary_path) as fh:
        summary = json.load(fh)
    truth_path = rep_dir / "truth.json"
    if not truth_path.exists():
        raise CliError("ARTIFACT", f"missing {truth_path}")
    truth = load_truth(rep_dir)

    fit_family = summary.get("meta", {}).get("family")
    truth_family = truth.get("family")
    for other in (truth_family, fit_family):
        if (family_flag and other
                and _FAMILY_ALIASES[family_flag] != other):
            raise CliError("FAMILY", f"fit/data family is {other}, "
                                     f"--family says {family_flag}")
    if fit_family and truth_family and fit_family != truth_family:
        raise CliError("FAMILY",
                       f"fit family {fit_family} != data family {truth_family}")
    family_kind = _FAMILY_ALIASES[family_flag] if family_flag else (
        fit_family or truth_family)
    if family_kind is None:
        raise CliError("CONFIG", "cannot determine family")

    x_test = np.loadtxt(rep_dir / "X_test.csv", delimiter=",", ndmin=2)
    y_test = np.loadtxt(rep_dir / "y_test.csv", delimiter=",").ravel()
    inclusion = np.asarray(summary["inclusion"], dtype=np.float64)
    effect = np.array([np.nan if v is None else v for v in summary["effect"]])
    selected = np.asarray(summary["selected_nodes_1based"], dtype=np.int64) - 1
    truth_nodes = np.asarray(truth["true_markers_1based"], dtype=np.int64) - 1

    beta_hat = np.zeros(inclusion.size)
    beta_hat[selected] = np.nan_to_num(effect[selected])
    fam = (GlmFamily.gaussian() if family_kind == "gaussian"
           else GlmFamily.bernoulli_logit())
    omega = summary.get("meta", {}).get("omega_mean")
    z_test_path = rep_dir / "Z_test.csv"
    z_test = (np.loadtxt(z_test_path, delimiter=",", ndmin=2)
              if z_test_path.exists() and omega else None)
    preds = predict(x_test, beta_hat, fam, z_test,
                    np.asarray(omega) if omega else None)

    tp, fp = tp_fp(selected, truth_nodes)
    try:
        auc_val = auc(inclusion, truth_nodes)
    except MetricsError as exc:
        raise CliError("CONFIG", str(exc))
    if family_kind == "gaussian":
        return EvalReport(tp=tp, fp=fp, auc=auc_val, pmse=pmse(y_test, preds))
    return EvalReport(tp=tp, fp=fp, auc=auc_val,
                      ce=classification_error(y_test, preds))


def _write_report_csv(path: Path, rows: list[tuple]):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")


@main.command()
@click.option("--fit-dir", type=click.Path(), default=None)
@click.option("--data-dir", type=click.Path(), default=None)
@click.option("--fit-root", type=click.Path(), default=None,
              help="Directory of per-replicate fit dirs (matched by name).")
@click.option("--data-root", type=click.Path(), default=None)
@click.option("--family", type=click.Choice(["gaussian", "logit"]), default=None)
@click.option("--out", "out_path", type=click.Path(), required=True)
def evaluate(fit_dir, data_dir, fit_root, data_root, family, out_path):
    """Score fits against ground truth and test data."""
    if fit_dir and data_dir:
        report = _evaluate_one(Path(fit_dir), Path(data_dir), family)
        rows = [("metric", "value")]
        rows += [(k, v) for k, v in report.metrics().items()]
        _write_report_csv(Path(out_path), rows)
        click.echo(f"wrote {out_path}")
        return
    if not (fit_root and data_root):
        raise CliError("CONFIG",
                       "need --fit-dir/--data-dir or --fit-root/--data-root")
    fit_root, data_root = Path(fit_root), Path(data_root)
    pairs = []
    for fd in sorted(fit_root.glob("rep_*")):
        dd = data_root / fd.name
        if not dd.exists():
            raise CliError("ARTIFACT", f"no data replicate matching {fd.name}")
        pairs.append((fd, dd))
    if not pairs:
        raise CliError("ARTIFACT", f"no rep_* fit dirs under {fit_root}")
    reports = [_evaluate_one(fd, dd, family) for fd, dd in pairs]
    out = Path(out_path)
    out.mkdir(parents=True, exist_ok=True)
    keys = list(reports[0].metrics().keys())
    rows = [tuple(["replicate"] + keys)]
    for (fd, _), rep in zip(pairs, reports):
        m = rep.metrics()
        rows.append(tuple([fd.name] + [m[k] for k in keys]))
    _write_report_csv(out / "replicates.csv", rows)
    if len(reports) >= 2:
        agg = aggregate(reports)
        rows = [("metric", "mean", "se")]
        rows += [(k, agg[k][0], agg[k][1]) for k in keys]
        _write_report_csv(out / "aggregate.csv", rows)
    click.echo(f"wrote {out}")


# ---------------------------------------------------------------------------
# diagnose


@main.command()
@click.option("--fit-dir", type=click.Path(), required=True)
@click.option("--selector", default="beta",
              type=click.Choice(["beta", "gamma", "alpha", "lambda", "scalars"]))
@click.option("--split/--no-split", default=False)
def diagnose(fit_dir, selector, split):
    """Gelman-Rubin diagnostics over the chains of a fit directory."""
    fit_dir = Path(fit_dir)
    prefixes = sorted(set(p.with_suffix("") for p in fit_dir.glob("chain_*.npz")))
    if len(prefixes) < 2:
        raise CliError("ARTIFACT",
                       f"need >= 2 chain traces under {fit_dir} for diagnostics")
    traces = [load_trace(pref) for pref in prefixes]
    try:
        gr = gelman_rubin_traces(traces, selector=selector, split=split)
    except InferenceError as exc:
        raise CliError("CONFIG", str(exc))
    lo, hi = gr["interval_2.5_97.5"]
    finite = gr["psrf"][np.isfinite(gr["psrf"])]
    dump_json({"psrf": gr["psrf"], "names": gr["names"],
               "interval_2.5_97.5": gr["interval_2.5_97.5"],
               "n_chains": gr["n_chains"], "selector": selector},
              fit_dir / "psrf.json")
    click.echo(f"chains={gr['n_chains']} params={len(gr['names'])} "
               f"finite={finite.size} interval=({lo}, {hi})")
    click.echo(f"wrote {fit_dir / 'psrf.json'}")


if __name__ == "__main__":
    sys.exit(main())
