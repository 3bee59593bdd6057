import math

import numpy as np
import pytest

from infosens.datagen import (
    BladeParams,
    EsConfig,
    GridSpec,
    baseline_geometry,
    best_so_far,
    build_geometry,
    extract_features,
    feature_names,
    hh_maxima_locations,
    hicks_henne,
    planted_benchmark,
    records_to_dataset,
    run_es,
    surrogate_fitness,
)
from infosens.datagen.geometry import BladeGeometry
from infosens.datagen.surrogate import (
    DEFAULT_CONSTANTS,
    SurrogateConstants,
    efficiency_from_probes,
    probe_targets,
    thickness_penalty,
)
from infosens.estimators import KsgConfig, discrete_cmi, discrete_mi, ksg_mi
from infosens.data import bin_equal_frequency


class TestHicksHenne:
    @pytest.mark.parametrize("x0", [0.1, 0.25, 0.5, 0.8, 0.99])
    def test_maximum_at_x0(self, x0):
        assert hicks_henne(x0, x0) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("x0", [0.2, 0.5, 0.7])
    def test_endpoints(self, x0):
        assert hicks_henne(0.0, x0) == 0.0
        assert hicks_henne(1.0, x0) == 0.0

    def test_closed_form(self):
        assert hicks_henne(0.25, 0.5) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("x0", [0.125, 0.3, 0.5, 0.875])
    def test_bounded_on_grid(self, x0):
        grid = np.linspace(0, 1, 10_001)
        assert hicks_henne(grid, x0).max() <= 1.0

    @pytest.mark.parametrize("x, x0", [(-0.1, 0.5), (1.1, 0.5), (0.5, 0.0), (0.5, 1.0)])
    def test_domain(self, x, x0):
        with pytest.raises(ValueError):
            hicks_henne(x, x0)


class TestMaxima:
    def test_three(self):
        np.testing.assert_allclose(hh_maxima_locations(3), [0.25, 0.5, 0.75])

    def test_seven(self):
        v = hh_maxima_locations(7)
        assert len(v) == 7 and v[0] == 0.125 and v[-1] == 0.875

    def test_one(self):
        np.testing.assert_array_equal(hh_maxima_locations(1), [0.5])

    def test_invalid(self):
        with pytest.raises(ValueError):
            hh_maxima_locations(0)


def same_geometry(a, b, atol=0.0):
    for f in ("span", "le", "te", "thickness"):
        np.testing.assert_allclose(getattr(a, f), getattr(b, f), rtol=0, atol=atol)


class TestBuildGeometry:
    def test_param_count(self):
        for n_hh in (3, 7):
            assert BladeParams.zeros(n_hh).n_params == 3 * (n_hh + 3)
            assert len(BladeParams.names(n_hh)) == 3 * (n_hh + 3)

    def test_zero_params_exact(self):
        base = baseline_geometry()
        g = build_geometry(base, BladeParams.zeros(3), 3)
        for f in ("span", "le", "te", "thickness"):
            np.testing.assert_array_equal(getattr(g, f), getattr(base, f))

    def test_zero_params_many_stations(self):
        base = baseline_geometry()
        g = build_geometry(base, BladeParams.zeros(3), 9)
        same_geometry(g, base.at_spans(np.linspace(0, 1, 9)))

    def test_hub_only_leaves_shroud(self):
        base = baseline_geometry()
        p = BladeParams([0.05, 0, 0], [0.01, 0, 0], [0.02, 0, 0], [[0.01, -0.005, 0.002], [0, 0, 0], [0, 0, 0]])
        g = build_geometry(base, p, 5)
        np.testing.assert_array_equal(g.te[-1], base.te[-1])
        np.testing.assert_array_equal(g.le[-1], base.le[-1])
        np.testing.assert_array_equal(g.thickness[-1], base.thickness[-1])
        assert not np.array_equal(g.te[0], base.te[0])

    def test_rotation_inverse(self):
        base = baseline_geometry()
        theta = np.array([0.07, -0.03, 0.05])
        z = np.zeros(3)
        once = build_geometry(base, BladeParams(theta, z, z, np.zeros((3, 3))), 3)
        back = build_geometry(once, BladeParams(-theta, z, z, np.zeros((3, 3))), 3)
        same_geometry(back, base, atol=1e-12)

    def test_rotation_about_le(self):
        base = baseline_geometry()
        z = np.zeros(3)
        g = build_geometry(base, BladeParams([0.1, 0.1, 0.1], z, z, np.zeros((3, 2))), 3)
        np.testing.assert_array_equal(g.le, base.le)
        np.testing.assert_allclose(np.linalg.norm(g.te - g.le, axis=1), np.linalg.norm(base.te - base.le, axis=1),
                                   rtol=1e-14)

    def test_affine_in_hh(self):
        base = baseline_geometry()
        rng = np.random.default_rng(0)
        rot, dx, dy = rng.uniform(-0.05, 0.05, (3, 3))
        hh = rng.uniform(-0.01, 0.01, (3, 5))
        ref = build_geometry(base, BladeParams(rot, dx, dy, np.zeros((3, 5))), 7)
        g1 = build_geometry(base, BladeParams(rot, dx, dy, hh), 7)
        for alpha in (-1.5, 0.3, 2.0):
            ga = build_geometry(base, BladeParams(rot, dx, dy, alpha * hh), 7)
            np.testing.assert_allclose(ga.thickness - ref.thickness, alpha * (g1.thickness - ref.thickness),
                                       rtol=0, atol=1e-12)

    def test_relative_round_trip(self):
        u = np.random.default_rng(1).uniform(-1, 1, 18)
        np.testing.assert_allclose(BladeParams.from_relative(u, 3).to_relative(), u, rtol=1e-15)

    def test_invalid(self):
        base = baseline_geometry()
        with pytest.raises(ValueError):
            build_geometry(base, BladeParams.zeros(3), 2)
        odd = BladeGeometry(np.array([0.0, 1.0]), base.le[[0, 2]], base.te[[0, 2]], base.thickness[[0, 2]])
        with pytest.raises(ValueError):
            build_geometry(odd, BladeParams.zeros(3), 3)


class TestFeatures:
    @pytest.mark.parametrize("n, m, count", [(3, 2, 18), (3, 3, 21), (5, 5, 45), (10, 8, 120)])
    def test_counts(self, n, m, count):
        g = build_geometry(baseline_geometry(), BladeParams.zeros(3), 3)
        v = extract_features(g, n, m)
        names = feature_names(n, m)
        assert len(v) == len(names) == count == n * m + 4 * n
        assert len(set(names)) == count

    def test_names(self):
        names = feature_names(3, 2)
        assert names[:6] == ["s1_LEx", "s1_LEy", "s1_p1", "s1_p2", "s1_TEx", "s1_TEy"]
        assert "s3_p2" in names

    def test_single_section_is_midspan(self):
        g = baseline_geometry()
        v = extract_features(g, 1, 1)
        assert v[2] == pytest.approx(g.thickness_at(0.5, 0.5))

    def test_probe_is_absolute(self):
        base = baseline_geometry()
        p = BladeParams(np.zeros(3), np.zeros(3), np.zeros(3), np.full((3, 1), -0.2))
        g = build_geometry(base, p, 3)
        v = extract_features(g, 3, 1)
        assert np.interp(0.5, g.chord_grid, g.thickness[0]) < 0
        assert v[2] > 0

    def test_invalid(self):
        with pytest.raises(ValueError):
            extract_features(baseline_geometry(), 0, 2)


def optimal_geometry():
    """Baseline with probes moved onto their targets by solving for the control parameters."""
    from scipy.optimize import least_squares

    from infosens.datagen.surrogate import probe_values

    base = baseline_geometry()
    targets = probe_targets()

    def resid(u):
        return (probe_values(build_geometry(base, BladeParams.from_relative(u, 3), 3)) - targets) * 100

    sol = least_squares(resid, np.zeros(18), xtol=1e-15, ftol=1e-15, gtol=1e-15)
    return build_geometry(base, BladeParams.from_relative(sol.x, 3), 3)


class TestSurrogate:
    def test_optimum_value(self):
        g = optimal_geometry()
        assert thickness_penalty(g) == 0.0
        assert surrogate_fitness(g) == pytest.approx(1 - DEFAULT_CONSTANTS.eta0, abs=1e-12)

    def test_stationary_at_optimum(self):
        t = probe_targets()
        h = 1e-5
        for i in range(5):
            e = np.zeros(5)
            e[i] = h
            grad = (efficiency_from_probes(t + e) - efficiency_from_probes(t - e)) / (2 * h)
            assert abs(grad) <= 1e-6

    def test_optimum_is_maximum(self):
        t = probe_targets()
        rng = np.random.default_rng(0)
        for _ in range(100):
            assert efficiency_from_probes(t + rng.normal(0, 0.01, 5)) < DEFAULT_CONSTANTS.eta0

    def test_negative_thickness_penalized(self):
        base = baseline_geometry()
        p = BladeParams(np.zeros(3), np.zeros(3), np.zeros(3), np.full((3, 3), -0.03))
        g = build_geometry(base, p, 3)
        assert g.thickness.min() < 0
        clamped = BladeGeometry(g.span, g.le, g.te, np.maximum(g.thickness, 0.0), g.chord_grid)
        assert surrogate_fitness(g) > surrogate_fitness(clamped)

    def test_constants_validated(self):
        with pytest.raises(ValueError):
            SurrogateConstants(d=0.01, e=0.004)

    def test_constants_serializable(self):
        d = DEFAULT_CONSTANTS.as_dict()
        assert d["surrogate_version"] and d["kappa"] == DEFAULT_CONSTANTS.kappa


@pytest.fixture(scope="module")
def runs():
    return {seed: run_es(EsConfig(seed=seed), 3) for seed in (0, 1)}


class TestEs:
    def test_record_count(self, runs):
        assert len(runs[0]) == 1932
        assert runs[0][-1].generation == 160

    def test_params_in_box(self, runs):
        u = np.array([r.params for r in runs[0]])
        assert u.shape == (1932, 18) and np.abs(u).max() <= 1.0

    def test_best_so_far_non_increasing(self, runs):
        b = best_so_far(runs[0])
        assert np.all(np.diff(b) <= 0)

    def test_converges_and_differs(self, runs):
        a, b = runs[0], runs[1]
        assert not np.array_equal(a[0].params, b[0].params)
        for r in (a, b):
            best = best_so_far(r)
            assert best[-1] < best[0]

    def test_deterministic(self, runs):
        again = run_es(EsConfig(seed=0), 3)
        for r1, r2 in zip(runs[0], again):
            assert r1.generation == r2.generation and r1.fitness == r2.fitness
            np.testing.assert_array_equal(r1.params, r2.params)
            np.testing.assert_array_equal(r1.features, r2.features)

    def test_threads_do_not_change_result(self):
        cfg = EsConfig(generations=5, seed=3)
        a = run_es(cfg, 3)
        b = run_es(cfg, 3, threads=3)
        assert [r.fitness for r in a] == [r.fitness for r in b]

    def test_features_match_geometry(self, runs):
        rec = runs[0][100]
        g = build_geometry(baseline_geometry(), BladeParams.from_relative(rec.params, 3), GridSpec().n_stations)
        np.testing.assert_array_equal(rec.features, extract_features(g, 3, 2))
        assert rec.fitness == surrogate_fitness(g)

    def test_dataset(self, runs):
        d = records_to_dataset(runs[0], GridSpec())
        assert d.n_samples == 1932 and d.n_features == 18

    @pytest.mark.parametrize("kw", [{"mu": 13}, {"lam": 0}, {"sigma0": 0.0}, {"generations": 0}])
    def test_config_errors(self, kw):
        with pytest.raises(ValueError):
            EsConfig(**kw)

    def test_mu_message(self):
        with pytest.raises(ValueError, match="mu exceeds lambda"):
            EsConfig(mu=20, lam=12)


class TestPlanted:
    @pytest.fixture(scope="class")
    @staticmethod
    def data():
        return planted_benchmark(2000, 0)

    def test_shape(self, data):
        assert data.n_features == 10 and data.names[0] == "X1"
        assert set(np.unique(data.values[:, 1])) == {-1.0, 1.0}

    def test_x3_uncorrelated(self, data):
        assert abs(np.corrcoef(data.values[:, 2], data.target)[0, 1]) <= 0.05

    def test_planted_synergy(self, data):
        b = [bin_equal_frequency(data.values[:, j], 3) for j in (1, 2)]
        y = bin_equal_frequency(data.target, 3)
        assert discrete_cmi(b[1], y, b[0]) > discrete_mi(b[1], y) + 0.05

    def test_decoys(self):
        # a single decoy estimate has SD near 0.015 nats at this size, so the
        # 0.03 bound is checked as a rate over seeds together with zero bias
        est = np.array([ksg_mi(d.values[:, j], d.target, KsgConfig(k=4)).value
                        for d in (planted_benchmark(2000, s) for s in range(10)) for j in range(3, 10)])
        assert np.mean(np.abs(est) <= 0.03) >= 0.9
        assert abs(est.mean()) <= 0.01

    def test_deterministic(self, data):
        again = planted_benchmark(2000, 0)
        np.testing.assert_array_equal(again.values, data.values)
        np.testing.assert_array_equal(again.target, data.target)

    def test_min_size(self):
        with pytest.raises(ValueError):
            planted_benchmark(99, 0)

    def test_model(self, data):
        x = data.values
        resid = data.target - (x[:, 0] + 0.3 * x[:, 1] + x[:, 1] * x[:, 2])
        assert abs(resid.std() - 0.05) < 0.005
        assert math.isclose(np.mean(resid), 0.0, abs_tol=0.005)
