"""Synthetic scenario generation: hub-and-spoke gene subnetworks with a
fixed correlation pattern, and large preferential-attachment networks with
distance-decay covariance; true effects, responses, and train/test splits."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from .glm import Dataset, GlmFamily
from .graph import (Network, barabasi_albert, permute_node_labels,
                    pick_marker_nodes, save_edge_list, shortest_path_hops)

SUBNET_SIZE = 11  # one hub plus ten targets


class GenerationError(ValueError):
    pass


@dataclass(frozen=True)
class SimScenario:
    """Full description of one synthetic setting.

    kind="simple": disjoint hub+target subnetworks, marker_type 1 marks two
    whole subnetworks, type 2 marks each chosen hub plus half its targets.
    kind="scale_free": preferential-attachment graph with markers placed as
    a connected set or a mutually non-adjacent set, optionally fitted with
    a fraction of node labels permuted.
    """

    kind: str
    family: str = "gaussian"
    n_train: int = 100
    n_test: int = 100
    seed: int = 0
    # simple networks
    n_subnetworks: int = 3
    marker_type: int = 2
    # scale-free networks
    p: int = 1000
    m_attach: int = 1
    n_markers: int = 10
    marker_mode: str = "connected"
    mislabel_fraction: float = 0.0

    def __post_init__(self):
        if self.kind not in ("simple", "scale_free"):
            raise GenerationError(f"unknown scenario kind {self.kind!r}")
        if self.family not in ("gaussian", "bernoulli_logit"):
            raise GenerationError(f"unknown family {self.family!r}")
        if self.n_train < 1 or self.n_test < 0:
            raise GenerationError("sample sizes must be positive")
        if self.kind == "simple":
            if self.n_subnetworks < 2:
                raise GenerationError("need at least 2 subnetworks")
            if self.marker_type not in (1, 2):
                raise GenerationError("marker_type is 1 or 2")
        else:
            if self.marker_mode not in ("connected", "disconnected"):
                raise GenerationError("marker_mode is connected or disconnected")
            if not 0.0 <= self.mislabel_fraction <= 1.0:
                raise GenerationError("mislabel_fraction in [0, 1]")
            if self.n_markers > self.p:
                raise GenerationError("more markers than nodes")

    def glm_family(self) -> GlmFamily:
        return (GlmFamily.gaussian() if self.family == "gaussian"
                else GlmFamily.bernoulli_logit())


@dataclass(frozen=True)
class SimDataset:
    """One generated replicate: the network handed to the fitting method,
    ground truth, and train/test splits."""

    net: Network
    true_beta: np.ndarray
    true_markers: np.ndarray
    train: Dataset
    test: Dataset
    meta: dict = field(default_factory=dict)


def make_simple_network(n_sub: int) -> Network:
    """Disjoint stars: hub node followed by 10 targets per subnetwork."""
    if n_sub < 1:
        raise GenerationError("need at least one subnetwork")
    edges = []
    for s in range(n_sub):
        hub = s * SUBNET_SIZE
        edges.extend((hub, hub + t) for t in range(1, SUBNET_SIZE))
    return Network(n_sub * SUBNET_SIZE, np.asarray(edges, dtype=np.int64))


def _draw_magnitudes(rng: np.random.Generator, k: int) -> np.ndarray:
    sign = rng.choice((-1.0, 1.0), size=k)
    return sign * rng.uniform(1.0, 3.0, size=k)


def assign_markers_simple(net: Network, marker_type: int, seed
                          ) -> tuple[np.ndarray, np.ndarray]:
    """Mark two random subnetworks: all 11 nodes each (type 1) or the hub
    plus 5 random targets each (type 2). Effects are Unif(1,3) magnitudes
    with random signs."""
    n_sub = net.p // SUBNET_SIZE
    if n_sub < 2:
        raise GenerationError("need at least 2 subnetworks")
    rng = np.random.default_rng(seed)
    marked_subs = rng.choice(n_sub, size=2, replace=False)
    markers = []
    for s in marked_subs:
        hub = int(s) * SUBNET_SIZE
        if marker_type == 1:
            markers.extend(range(hub, hub + SUBNET_SIZE))
        else:
            targets = rng.choice(np.arange(hub + 1, hub + SUBNET_SIZE),
                                 size=5, replace=False)
            markers.append(hub)
            markers.extend(int(t) for t in targets)
    markers = np.array(sorted(markers), dtype=np.int64)
    beta = np.zeros(net.p)
    beta[markers] = _draw_magnitudes(rng, markers.size)
    return markers, beta


def simple_block_covariance() -> np.ndarray:
    """The 11x11 within-subnetwork covariance: unit variances, hub-target
    correlation 0.5, target-target correlation 0.25."""
    sigma = np.full((SUBNET_SIZE, SUBNET_SIZE), 0.25)
    sigma[0, :] = 0.5
    sigma[:, 0] = 0.5
    np.fill_diagonal(sigma, 1.0)
    return sigma


def gen_covariates_simple(n: int, n_sub: int, seed) -> np.ndarray:
    """Zero-mean unit-variance rows with the fixed within-subnetwork
    correlation pattern, independent across subnetworks."""
    rng = np.random.default_rng(seed)
    chol = np.linalg.cholesky(simple_block_covariance())
    out = np.empty((n, n_sub * SUBNET_SIZE))
    for s in range(n_sub):
        z = rng.standard_normal((n, SUBNET_SIZE))
        out[:, s * SUBNET_SIZE:(s + 1) * SUBNET_SIZE] = z @ chol.T
    return out


def distance_decay_covariance(hops: np.ndarray, rate: float = 0.3) -> np.ndarray:
    """Sigma_jk = rate^{hops_jk}; unreachable pairs decay to exactly 0."""
    with np.errstate(over="ignore"):
        return np.power(rate, hops)


def covariance_factor(sigma: np.ndarray,
                      jitters=(0.0, 1e-8, 1e-6)) -> tuple[np.ndarray, float]:
    """Cholesky of a near-semidefinite covariance, escalating diagonal
    jitter as needed. Returns (lower factor, jitter used)."""
    for jit in jitters:
        try:
            mat = sigma if jit == 0.0 else sigma + jit * np.eye(len(sigma))
            return np.linalg.cholesky(mat), jit
        except np.linalg.LinAlgError:
            continue
    raise GenerationError("covariance not factorizable even with jitter")


def gen_covariates_scalefree(n: int, net: Network, seed,
                             rate: float = 0.3) -> np.ndarray:
    """Gaussian rows with distance-decay covariance over the given graph."""
    hops = shortest_path_hops(net).hops
    chol, _ = covariance_factor(distance_decay_covariance(hops, rate))
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, net.p)) @ chol.T


def gen_response(X: np.ndarray, beta: np.ndarray, family: GlmFamily, seed
                 ) -> np.ndarray:
    """Responses from the true linear predictor: gaussian with noise
    variance sum(beta^2)/3, or Bernoulli through the logistic link."""
    X = np.asarray(X, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64).ravel()
    rng = np.random.default_rng(seed)
    h = X @ beta
    if family.kind == "gaussian":
        var = float(beta @ beta) / 3.0
        if var <= 0:
            raise GenerationError("gaussian response needs a nonzero true beta")
        return h + np.sqrt(var) * rng.standard_normal(len(h))
    probs = _kernels.logistic(h)
    return (rng.random(len(h)) < probs).astype(np.float64)


def true_noise_variance(beta: np.ndarray) -> float:
    beta = np.asarray(beta, dtype=np.float64)
    return float(beta @ beta) / 3.0


def make_scenario(scn: SimScenario) -> SimDataset:
    """Compose network, truth, and independently drawn train/test splits;
    deterministic in the scenario seed."""
    root = np.random.SeedSequence(scn.seed)
    seeds = [int(s) for s in root.generate_state(8, dtype=np.uint64)]
    family = scn.glm_family()

    if scn.kind == "simple":
        net = make_simple_network(scn.n_subnetworks)
        fit_net = net
        markers, beta = assign_markers_simple(net, scn.marker_type, seeds[0])
        x_train = gen_covariates_simple(scn.n_train, scn.n_subnetworks, seeds[1])
        x_test = gen_covariates_simple(scn.n_test, scn.n_subnetworks, seeds[2])
        meta = {}
    else:
        net = barabasi_albert(scn.p, scn.m_attach, seeds[0])
        markers = pick_marker_nodes(net, scn.n_markers, scn.marker_mode, seeds[1])
        beta = np.zeros(net.p)
        rng = np.random.default_rng(seeds[2])
        beta[markers] = _draw_magnitudes(rng, markers.size)
        hops = shortest_path_hops(net).hops
        chol, jitter = covariance_factor(distance_decay_covariance(hops))
        gen = np.random.default_rng(seeds[3])
        x_train = gen.standard_normal((scn.n_train, net.p)) @ chol.T
        x_test = gen.standard_normal((scn.n_test, net.p)) @ chol.T
        fit_net = (permute_node_labels(net, scn.mislabel_fraction, seeds[4])
                   if scn.mislabel_fraction > 0 else net)
        meta = {"covariance_jitter": jitter,
                "mislabel_fraction": scn.mislabel_fraction}

    y_train = gen_response(x_train, beta, family, seeds[5])
    y_test = gen_response(x_test, beta, family, seeds[6])
    meta["seed"] = scn.seed
    if family.is_gaussian:
        meta["true_noise_variance"] = true_noise_variance(beta)
    return SimDataset(
        net=fit_net, true_beta=beta, true_markers=markers,
        train=Dataset(X=x_train, y=y_train, family=family),
        test=Dataset(X=x_test, y=y_test, family=family),
        meta=meta)


# ---------------------------------------------------------------------------
# replicate directory layout used by the CLI


def save_replicate(sim: SimDataset, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_edge_list(sim.net, out / "edges.txt")
    np.savetxt(out / "X_train.csv", sim.train.X, delimiter=",")
    np.savetxt(out / "y_train.csv", sim.train.y, delimiter=",")
    np.savetxt(out / "X_test.csv", sim.test.X, delimiter=",")
    np.savetxt(out / "y_test.csv", sim.test.y, delimiter=",")
    truth = {
        "family": sim.train.family.kind,
        "true_beta": sim.true_beta.tolist(),
        "true_markers_1based": [int(j) + 1 for j in sim.true_markers],
        "meta": {k: (v if not isinstance(v, np.generic) else v.item())
                 for k, v in sim.meta.items()},
    }
    with open(out / "truth.json", "w") as fh:
        json.dump(truth, fh, indent=2)
        fh.write("\n")


def load_truth(rep_dir) -> dict:
    with open(Path(rep_dir) / "truth.json") as fh:
        return json.load(fh)
