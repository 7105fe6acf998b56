import numpy as np
import pytest
from scipy.sparse.csgraph import connected_components

from tglg.glm import GlmFamily
from tglg.simulate import (GenerationError, SimScenario, assign_markers_simple,
                           covariance_factor, distance_decay_covariance,
                           gen_covariates_simple, gen_response, load_truth,
                           make_scenario, make_simple_network, save_replicate,
                           simple_block_covariance, true_noise_variance)


class TestSimpleNetwork:
    def test_three_subnetworks(self):
        net = make_simple_network(3)
        assert net.p == 33 and net.n_edges == 30

    def test_ten_subnetworks(self):
        assert make_simple_network(10).p == 110

    def test_hub_and_leaf_degrees(self):
        net = make_simple_network(4)
        for s in range(4):
            hub = s * 11
            assert net.degrees[hub] == 10
            assert all(net.degrees[hub + t] == 1 for t in range(1, 11))


class TestAssignMarkers:
    def test_type1_counts(self):
        net = make_simple_network(3)
        markers, beta = assign_markers_simple(net, 1, seed=0)
        assert markers.size == 22
        assert np.count_nonzero(beta) == 22

    def test_type2_counts(self):
        net = make_simple_network(3)
        markers, beta = assign_markers_simple(net, 2, seed=0)
        assert markers.size == 12

    def test_magnitudes_in_band(self):
        net = make_simple_network(5)
        for seed in range(10):
            markers, beta = assign_markers_simple(net, 2, seed=seed)
            mags = np.abs(beta[markers])
            assert np.all((mags >= 1.0) & (mags <= 3.0))
            assert np.all(beta[np.setdiff1d(np.arange(net.p), markers)] == 0.0)

    def test_type2_hubs_always_marked(self):
        net = make_simple_network(4)
        markers, _ = assign_markers_simple(net, 2, seed=3)
        marked_subs = sorted(set(int(m) // 11 for m in markers))
        assert len(marked_subs) == 2
        for s in marked_subs:
            assert s * 11 in markers
            assert np.sum((markers >= s * 11) & (markers < (s + 1) * 11)) == 6


class TestSimpleCovariates:
    @pytest.mark.derived_oracle
    def test_block_matrix_positive_definite(self):
        ev = np.linalg.eigvalsh(simple_block_covariance())
        assert ev.min() > 0

    @pytest.mark.slow
    @pytest.mark.derived_oracle
    def test_sample_correlations(self):
        X = gen_covariates_simple(100_000, 2, seed=1)
        c = np.corrcoef(X.T)
        assert c[0, 1] == pytest.approx(0.5, abs=0.01)       # hub-target
        assert c[1, 2] == pytest.approx(0.25, abs=0.01)      # target-target
        assert c[0, 11] == pytest.approx(0.0, abs=0.01)      # across blocks
        assert np.allclose(X.mean(axis=0), 0.0, atol=0.02)
        assert np.allclose(X.var(axis=0), 1.0, atol=0.03)

    @pytest.mark.slow
    def test_empirical_covariance_frobenius(self):
        X = gen_covariates_simple(100_000, 1, seed=2)
        emp = np.cov(X.T)
        assert np.linalg.norm(emp - simple_block_covariance()) < 0.05


class TestDistanceDecayCovariance:
    def test_diagonal_ones(self):
        hops = np.array([[0.0, 1.0], [1.0, 0.0]])
        s = distance_decay_covariance(hops)
        assert np.allclose(np.diag(s), 1.0)
        assert s[0, 1] == pytest.approx(0.3)

    def test_unreachable_is_zero(self):
        hops = np.array([[0.0, np.inf], [np.inf, 0.0]])
        s = distance_decay_covariance(hops)
        assert s[0, 1] == 0.0

    def test_factor_with_jitter_ladder(self):
        sigma = np.array([[1.0, 1.0], [1.0, 1.0]])   # singular: needs jitter
        chol, jit = covariance_factor(sigma)
        assert jit in (1e-8, 1e-6)
        assert np.allclose(chol @ chol.T, sigma + jit * np.eye(2), atol=1e-12)

    def test_factor_failure(self):
        sigma = np.array([[1.0, 2.0], [2.0, 1.0]])   # indefinite
        with pytest.raises(GenerationError):
            covariance_factor(sigma)


class TestGenResponse:
    def test_zero_beta_guard(self):
        with pytest.raises(GenerationError):
            gen_response(np.zeros((5, 2)), np.zeros(2), GlmFamily.gaussian(), 0)

    def test_noise_variance_formula(self):
        beta = np.array([1.0, 1.0, 1.0])
        assert true_noise_variance(beta) == pytest.approx(1.0)

    @pytest.mark.slow
    @pytest.mark.derived_oracle
    def test_gaussian_residual_variance(self, rng):
        beta = np.array([2.0, -1.0, 1.5])
        X = rng.standard_normal((100_000, 3))
        y = gen_response(X, beta, GlmFamily.gaussian(), seed=4)
        resid = y - X @ beta
        assert resid.var() == pytest.approx(true_noise_variance(beta), rel=0.05)

    def test_logit_balanced_at_zero_predictor(self, rng):
        X = np.zeros((20_000, 2))
        beta = np.array([1.0, 1.0])
        y = gen_response(X, beta, GlmFamily.bernoulli_logit(), seed=5)
        assert set(np.unique(y)) <= {0.0, 1.0}
        assert y.mean() == pytest.approx(0.5, abs=0.02)


class TestMakeScenario:
    def test_simple_type2_linear(self):
        scn = SimScenario(kind="simple", family="gaussian", n_subnetworks=3,
                          marker_type=2, n_train=100, n_test=100, seed=0)
        sim = make_scenario(scn)
        assert sim.net.p == 33
        assert sim.true_markers.size == 12
        assert sim.train.n == 100 and sim.test.n == 100
        assert sim.train.q == 0
        assert np.all(sim.true_beta[sim.true_markers] != 0)

    def test_seed_reproducibility(self):
        scn = SimScenario(kind="simple", family="bernoulli_logit",
                          n_subnetworks=2, n_train=50, n_test=50, seed=9)
        a, b = make_scenario(scn), make_scenario(scn)
        assert np.array_equal(a.train.X, b.train.X)
        assert np.array_equal(a.train.y, b.train.y)
        assert np.array_equal(a.true_beta, b.true_beta)

    @pytest.mark.slow
    def test_scale_free_connected(self):
        scn = SimScenario(kind="scale_free", family="gaussian", p=300,
                          n_markers=10, marker_mode="connected",
                          n_train=50, n_test=50, seed=3)
        sim = make_scenario(scn)
        markers = set(sim.true_markers.tolist())
        induced = [e for e in sim.net.edges
                   if e[0] in markers and e[1] in markers]
        sub = np.zeros((10, 10))
        idx = {m: i for i, m in enumerate(sorted(markers))}
        for u, v in induced:
            sub[idx[u], idx[v]] = sub[idx[v], idx[u]] = 1
        ncomp, _ = connected_components(sub, directed=False)
        assert ncomp == 1

    @pytest.mark.slow
    def test_scale_free_disconnected(self):
        scn = SimScenario(kind="scale_free", family="gaussian", p=300,
                          n_markers=10, marker_mode="disconnected",
                          n_train=50, n_test=50, seed=4)
        sim = make_scenario(scn)
        markers = set(sim.true_markers.tolist())
        assert not any(e[0] in markers and e[1] in markers
                       for e in sim.net.edges)

    @pytest.mark.slow
    def test_mislabeling_preserves_degrees_changes_edges(self):
        base = SimScenario(kind="scale_free", family="gaussian", p=300,
                           n_markers=5, marker_mode="connected",
                           n_train=20, n_test=20, seed=5)
        ref = make_scenario(base)
        scn = SimScenario(kind="scale_free", family="gaussian", p=300,
                          n_markers=5, marker_mode="connected",
                          n_train=20, n_test=20, seed=5, mislabel_fraction=0.2)
        sim = make_scenario(scn)
        assert sorted(sim.net.degrees.tolist()) == sorted(ref.net.degrees.tolist())
        assert sim.net != ref.net
        assert np.array_equal(sim.train.X, ref.train.X)  # data unchanged

    def test_replicate_round_trip(self, tmp_path):
        scn = SimScenario(kind="simple", family="gaussian", n_subnetworks=2,
                          n_train=20, n_test=10, seed=6)
        sim = make_scenario(scn)
        save_replicate(sim, tmp_path)
        truth = load_truth(tmp_path)
        assert truth["family"] == "gaussian"
        assert len(truth["true_markers_1based"]) == sim.true_markers.size
        assert min(truth["true_markers_1based"]) >= 1
        X = np.loadtxt(tmp_path / "X_train.csv", delimiter=",")
        assert np.allclose(X, sim.train.X)

    def test_invalid_scenarios(self):
        with pytest.raises(GenerationError):
            SimScenario(kind="weird")
        with pytest.raises(GenerationError):
            SimScenario(kind="simple", n_subnetworks=1)
        with pytest.raises(GenerationError):
            SimScenario(kind="scale_free", p=5, n_markers=10)
