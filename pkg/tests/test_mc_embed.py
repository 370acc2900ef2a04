"""Monte Carlo and Sobol embeddings: scaling, determinism, statistics."""

import math

import numpy as np
import pytest

import funclsh as fl
from funclsh.montecarlo import McEmbedConfig, Sampler

DOM = fl.IntervalDomain(0.0, 1.0)
SINE_F = fl.sine_source(1.0, 1.0, 0.0)
SINE_G = fl.sine_source(1.0, 1.0, math.pi)


def const_source(c, domain=DOM):
    return fl.FunctionSource(domain, fl.Composite(lambda x, c=c: np.full_like(x, c)))


class TestSamplePlan:
    def test_sobol_first_four_points(self):
        plan = fl.make_sample_plan(DOM, McEmbedConfig(4, sampler=Sampler.SOBOL))
        assert list(plan.abscissae) == [0.5, 0.25, 0.75, 0.125]

    def test_sobol_points_strictly_inside(self):
        plan = fl.make_sample_plan(DOM, McEmbedConfig(512, sampler=Sampler.SOBOL))
        assert np.all(plan.abscissae > 0.0) and np.all(plan.abscissae < 1.0)
        scrambled = fl.make_sample_plan(
            DOM, McEmbedConfig(512, sampler=Sampler.SOBOL, seed=3, scramble=True))
        assert np.all(scrambled.abscissae > 0.0) and np.all(scrambled.abscissae < 1.0)
        assert not np.array_equal(plan.abscissae, scrambled.abscissae)

    @pytest.mark.parametrize("p", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("n", [1, 7, 64])
    def test_scale_on_width_two_interval(self, p, n):
        dom = fl.IntervalDomain(0.0, 2.0)
        plan = fl.make_sample_plan(dom, McEmbedConfig(n, p=p))
        assert abs(plan.scale - (2.0 / n) ** (1.0 / p)) < 1e-15

    def test_determinism(self):
        cfg = McEmbedConfig(256, seed=42)
        a = fl.make_sample_plan(DOM, cfg)
        b = fl.make_sample_plan(DOM, cfg)
        assert np.array_equal(a.abscissae, b.abscissae)
        other = fl.make_sample_plan(DOM, McEmbedConfig(256, seed=43))
        assert not np.array_equal(a.abscissae, other.abscissae)

    def test_chebyshev_measure_transform(self):
        dom = fl.IntervalDomain(-1.0, 1.0, fl.Measure.CHEBYSHEV_WEIGHT)
        plan = fl.make_sample_plan(dom, McEmbedConfig(128, seed=1))
        assert np.all(np.abs(plan.abscissae) < 1.0)
        # scale uses V = pi
        assert abs(plan.scale - math.sqrt(math.pi / 128)) < 1e-15

    def test_config_validation(self):
        with pytest.raises(ValueError):
            McEmbedConfig(0)
        with pytest.raises(ValueError):
            McEmbedConfig(8, p=2.5)


class TestEmbed:
    def test_constant_one_has_unit_norm(self):
        for n in (1, 10, 100):
            for p in (0.5, 1.0, 2.0):
                plan = fl.make_sample_plan(DOM, McEmbedConfig(n, p=p, seed=2))
                emb = fl.embed_mc(const_source(1.0), plan, p)
                assert abs(np.sum(np.abs(emb.values) ** p) ** (1 / p) - 1.0) < 1e-12

    def test_zero_function(self):
        plan = fl.make_sample_plan(DOM, McEmbedConfig(32, seed=2))
        assert np.all(fl.embed_mc(const_source(0.0), plan).values == 0.0)

    def test_deterministic_embeddings(self):
        plan = fl.make_sample_plan(DOM, McEmbedConfig(64, seed=9))
        a = fl.embed_mc(SINE_F, plan)
        b = fl.embed_mc(SINE_F, plan)
        assert np.array_equal(a.values, b.values)

    def test_non_finite_sample_reports_abscissa(self):
        f = fl.FunctionSource(DOM, fl.Composite(lambda x: 1.0 / (x - 0.5)))
        plan = fl.make_sample_plan(DOM, McEmbedConfig(4, sampler=Sampler.SOBOL))
        with np.errstate(divide="ignore"):
            with pytest.raises(fl.NonFiniteError) as exc:
                fl.embed_mc(f, plan)
        assert "0.5" in str(exc.value)

    def test_sine_distance_within_predicted_noise(self):
        # oracle ||f - g|| = sqrt(2) for antipodal unit sines; the variance
        # formula predicts std of the squared estimate
        plan = fl.make_sample_plan(DOM, McEmbedConfig(4096, seed=11))
        est = fl.lp_distance(fl.embed_mc(SINE_F, plan), fl.embed_mc(SINE_G, plan))
        oracle = math.sqrt(2.0)
        var = fl.estimate_embedding_variance(SINE_F, SINE_G, plan)
        assert abs(est**2 - oracle**2) <= 5.0 * math.sqrt(var)
        assert abs(est - oracle) <= 5.0 * math.sqrt(var) / (2.0 * oracle)

    def test_plan_mismatch_raises(self):
        plan_a = fl.make_sample_plan(DOM, McEmbedConfig(32, seed=1))
        plan_b = fl.make_sample_plan(DOM, McEmbedConfig(32, seed=2))
        with pytest.raises(fl.BasisMismatchError):
            fl.lp_distance(fl.embed_mc(SINE_F, plan_a), fl.embed_mc(SINE_G, plan_b))


class TestVariance:
    def test_identical_functions(self):
        plan = fl.make_sample_plan(DOM, McEmbedConfig(256, seed=3))
        assert fl.estimate_embedding_variance(SINE_F, SINE_F, plan) == 0.0

    def test_constant_difference(self):
        plan = fl.make_sample_plan(DOM, McEmbedConfig(256, seed=3))
        f = const_source(2.0)
        g = const_source(-1.0)
        assert fl.estimate_embedding_variance(f, g, plan) < 1e-25

    def test_matches_bootstrap_within_factor_two(self):
        plan = fl.make_sample_plan(DOM, McEmbedConfig(1024, seed=5))
        est = fl.estimate_embedding_variance(SINE_F, SINE_G, plan)
        d = np.abs(fl.evaluate(SINE_F, plan.abscissae)
                   - fl.evaluate(SINE_G, plan.abscissae)) ** 2.0
        rng = np.random.default_rng(17)
        stats = [np.mean(rng.choice(d, size=len(d), replace=True)) for _ in range(1000)]
        boot = DOM.volume**2 * np.var(stats, ddof=1) * len(d) / len(d)
        assert 0.5 < est / boot < 2.0


class TestStatisticalInvariants:
    def test_pth_power_unbiased(self):
        # mean of ||T(f) - T(g)||_p^p over independent plans approaches the
        # oracle distance^p within 3 standard errors
        p = 2.0
        oracle_pp = fl.lp_distance_oracle(SINE_F, SINE_G, p) ** p
        n_plans, n = 200, 256
        vals = np.empty(n_plans)
        for s in range(n_plans):
            plan = fl.make_sample_plan(DOM, McEmbedConfig(n, p=p, seed=1000 + s))
            vals[s] = fl.lp_distance(fl.embed_mc(SINE_F, plan), fl.embed_mc(SINE_G, plan)) ** p
        se = np.std(vals, ddof=1) / math.sqrt(n_plans)
        assert abs(np.mean(vals) - oracle_pp) <= 3.0 * se

    def test_pth_power_unbiased_p1(self):
        p = 1.0
        oracle_pp = fl.lp_distance_oracle(SINE_F, SINE_G, p)
        vals = np.empty(200)
        for s in range(200):
            plan = fl.make_sample_plan(DOM, McEmbedConfig(128, p=p, seed=5000 + s))
            vals[s] = fl.lp_distance(fl.embed_mc(SINE_F, plan, p), fl.embed_mc(SINE_G, plan, p))
        se = np.std(vals, ddof=1) / math.sqrt(len(vals))
        assert abs(np.mean(vals) - oracle_pp) <= 3.0 * se

    def test_inner_product_consistency(self):
        f = fl.sine_source(1.0, 1.0, 0.0)
        g = fl.sine_source(1.0, 1.0, 1.0)
        oracle = fl.l2_inner_oracle(f, g)
        vals = np.empty(200)
        for s in range(200):
            plan = fl.make_sample_plan(DOM, McEmbedConfig(256, seed=9000 + s))
            u, v = fl.embed_mc(f, plan), fl.embed_mc(g, plan)
            vals[s] = np.dot(u.values, v.values)
        se = np.std(vals, ddof=1) / math.sqrt(len(vals))
        assert abs(np.mean(vals) - oracle) <= 3.0 * se

    def test_sobol_beats_iid_at_same_size(self):
        oracle = fl.l2_distance_oracle(SINE_F, SINE_G)
        n = 1024
        iid_errs, sob_errs = [], []
        for s in range(30):
            plan_i = fl.make_sample_plan(DOM, McEmbedConfig(n, seed=100 + s))
            plan_s = fl.make_sample_plan(
                DOM, McEmbedConfig(n, sampler=Sampler.SOBOL, seed=100 + s, scramble=True))
            iid_errs.append(abs(fl.lp_distance(
                fl.embed_mc(SINE_F, plan_i), fl.embed_mc(SINE_G, plan_i)) - oracle))
            sob_errs.append(abs(fl.lp_distance(
                fl.embed_mc(SINE_F, plan_s), fl.embed_mc(SINE_G, plan_s)) - oracle))
        assert np.mean(sob_errs) < np.mean(iid_errs)


class TestRadicalInverse:
    def test_explicit_values(self):
        from funclsh.montecarlo import radical_inverse
        vals = radical_inverse(1, 8)
        assert list(vals) == [0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875, 0.0625]

    def test_scramble_preserves_balance(self):
        # any scrambled net keeps one point per dyadic interval of size 1/N
        u = fl.sobol_sequence(64, seed=7, scramble=True)
        counts, _ = np.histogram(u, bins=64, range=(0.0, 1.0))
        assert np.all(counts == 1)

    def test_scramble_determinism(self):
        a = fl.sobol_sequence(128, seed=5, scramble=True)
        b = fl.sobol_sequence(128, seed=5, scramble=True)
        c = fl.sobol_sequence(128, seed=6, scramble=True)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)
