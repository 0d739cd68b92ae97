import numpy as np
import pytest

from graphsteering import (
    Bipartition,
    build_graph_state,
    critical_disturbance,
    derive_both_settings,
    disturbance_entropy,
    key_rate_lower,
    key_rate_scan,
    make_chain,
    make_star,
    noise_threshold,
    steering_statistic,
    white_noise,
)


def binary_search_root(f, lo, hi, tol=1e-12):
    """Independent scalar bisection used as an oracle for the library's solvers."""
    f_lo = f(lo)
    assert f_lo * f(hi) < 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) * f_lo > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def noisy_excess(p, d):
    """Closed form for the certified excess of a white-noisy ideal pair.

    Each setting's joint table is (1-p) I/d + p/d^2, whose mutual information
    is log2(d) - H of the conditional column.
    """
    joint = (1 - p) * np.eye(d) / d + p / d ** 2
    marg = joint.sum(axis=0)
    ratio = np.where(joint > 0, joint / marg, 1.0)
    h_cond = -np.sum(joint * np.log2(ratio))
    return 2 * (np.log2(d) - h_cond) - np.log2(d)


class TestWhiteNoise:
    def test_endpoints(self):
        psi = build_graph_state(make_star(3), 2)
        pure = white_noise(psi, 0.0)
        np.testing.assert_allclose(
            pure.matrix, np.outer(psi.amplitudes, psi.amplitudes.conj()), atol=1e-12
        )
        mixed = white_noise(psi, 1.0)
        np.testing.assert_allclose(mixed.matrix, np.eye(8) / 8, atol=1e-12)

    def test_trace_one(self):
        psi = build_graph_state(make_chain(4), 3)
        for p in (0.1, 0.5, 0.9):
            assert abs(np.trace(white_noise(psi, p).matrix).real - 1.0) < 1e-10

    def test_out_of_range(self):
        psi = build_graph_state(make_star(3), 2)
        for p in (-0.01, 1.01):
            with pytest.raises(ValueError):
                white_noise(psi, p)


class TestSteeringStatistic:
    def test_ideal_value(self):
        for d in (2, 3):
            g = make_star(3)
            part = Bipartition.from_side_a(g, {1})
            settings = derive_both_settings(g, d, part)
            rho = build_graph_state(g, d).density()
            report = steering_statistic(rho, settings, part)
            assert abs(report.i_total - 2 * np.log2(d)) < 1e-9
            assert report.steerable
            for i_m in report.i_per_setting:
                assert abs(i_m - np.log2(d)) < 1e-9

    def test_independent_of_n(self):
        d = 2
        values = []
        for n in (3, 4, 5):
            g = make_star(n)
            part = Bipartition.from_side_a(g, {1})
            settings = derive_both_settings(g, d, part)
            rho = white_noise(build_graph_state(g, d), 0.15)
            values.append(steering_statistic(rho, settings, part).i_total)
        assert max(values) - min(values) < 1e-9

    def test_matches_closed_form_under_noise(self):
        for d in (2, 3):
            g = make_chain(3)
            part = Bipartition.from_side_a(g, {1})
            settings = derive_both_settings(g, d, part)
            psi = build_graph_state(g, d)
            for p in (0.05, 0.2, 0.6):
                report = steering_statistic(white_noise(psi, p), settings, part)
                expected = noisy_excess(p, d) + np.log2(d)
                assert abs(report.i_total - expected) < 1e-9

    def test_fully_mixed_not_steerable(self):
        g = make_star(3)
        part = Bipartition.from_side_a(g, {1})
        settings = derive_both_settings(g, 2, part)
        rho = white_noise(build_graph_state(g, 2), 1.0)
        report = steering_statistic(rho, settings, part)
        assert not report.steerable
        assert abs(report.i_total) < 1e-9


class TestNoiseThreshold:
    def test_matches_scalar_oracle(self):
        for d in (2, 3):
            g = make_star(3)
            part = Bipartition.from_side_a(g, {1})
            got = noise_threshold(g, d, part)
            expected = binary_search_root(lambda p: noisy_excess(p, d), 1e-9, 1.0)
            assert abs(got - expected) < 1e-6

    def test_d2_value(self):
        g = make_star(3)
        part = Bipartition.from_side_a(g, {1})
        assert abs(noise_threshold(g, 2, part) - 0.2200) < 1e-3

    def test_grows_with_dimension(self):
        g = make_star(3)
        part = Bipartition.from_side_a(g, {1})
        assert noise_threshold(g, 3, part) > noise_threshold(g, 2, part)

    def test_independent_of_n(self):
        vals = []
        for n in (3, 4):
            g = make_chain(n)
            part = Bipartition.from_side_a(g, {1})
            vals.append(noise_threshold(g, 2, part))
        assert abs(vals[0] - vals[1]) < 1e-6


class TestKeyRate:
    def test_ideal_rate(self):
        for d in (2, 3):
            g = make_star(3)
            part = Bipartition.from_side_a(g, {1})
            settings = derive_both_settings(g, d, part)
            rho = build_graph_state(g, d).density()
            rate = key_rate_lower(steering_statistic(rho, settings, part))
            assert abs(rate.r_lower - np.log2(d)) < 1e-9
            assert not rate.clamped

    def test_clamped_at_high_noise(self):
        g = make_star(3)
        part = Bipartition.from_side_a(g, {1})
        settings = derive_both_settings(g, 2, part)
        rho = white_noise(build_graph_state(g, 2), 0.5)
        rate = key_rate_lower(steering_statistic(rho, settings, part))
        assert rate.r_lower == 0.0
        assert rate.clamped

    def test_scan_matches_closed_form(self):
        for d in (2, 3):
            g = make_star(3)
            part = Bipartition.from_side_a(g, {1})
            grid = np.linspace(0.0, 0.5, 11)
            for p, i_total, r_lower in key_rate_scan(g, d, part, grid):
                expected_i = noisy_excess(p, d) + np.log2(d)
                assert abs(i_total - expected_i) < 1e-9
                assert abs(r_lower - max(0.0, expected_i - np.log2(d))) < 1e-9

    def test_scan_rejects_bad_grid(self):
        g = make_star(3)
        part = Bipartition.from_side_a(g, {1})
        with pytest.raises(ValueError):
            key_rate_scan(g, 2, part, [0.0, 1.2])


class TestDisturbanceEntropy:
    def test_endpoints(self):
        for d in (2, 3):
            assert disturbance_entropy(0.0, d) == 0.0
        assert abs(disturbance_entropy(0.5, 2) - 1.0) < 1e-12

    def test_uniform_maximum(self):
        # D = (d-1)/d spreads the distribution uniformly over d outcomes
        for d in (2, 3, 5):
            val = disturbance_entropy((d - 1) / d, d)
            assert abs(val - np.log2(d)) < 1e-12

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            disturbance_entropy(-0.1, 2)


class TestCriticalDisturbance:
    def test_reference_values(self):
        assert abs(critical_disturbance(2) - 0.1100) < 5e-4
        assert abs(critical_disturbance(3) - 0.1595) < 5e-4

    def test_residual_is_zero(self):
        for d in (2, 3, 5):
            dc = critical_disturbance(d)
            assert abs(disturbance_entropy(dc, d) - 0.5 * np.log2(d)) < 1e-7

    def test_matches_scalar_oracle(self):
        for d in (2, 3):
            expected = binary_search_root(
                lambda x: disturbance_entropy(x, d) - 0.5 * np.log2(d),
                1e-12,
                (d - 1) / d,
            )
            assert abs(critical_disturbance(d) - expected) < 1e-8

    def test_monotone_in_d(self):
        vals = [critical_disturbance(d) for d in range(2, 7)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_bad_dimension(self):
        with pytest.raises(ValueError):
            critical_disturbance(1)

    def test_noise_threshold_consistency(self):
        # p_noise relates to the critical disturbance by the depolarizing map
        g = make_star(3)
        for d in (2, 3):
            part = Bipartition.from_side_a(g, {1})
            p_noise = noise_threshold(g, d, part)
            assert abs(p_noise * (d - 1) / d - critical_disturbance(d)) < 1e-6
