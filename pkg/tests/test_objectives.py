import numpy as np
import pytest

from graphscan.errors import DimensionError, InputError, NumericError
from graphscan.graphs import SupportSet
from graphscan.objectives import (ebp_objective,
                                  ems_hessian_quadratic_form, ems_objective,
                                  kulldorff_objective, normalize_counts_ems,
                                  objective_gradient, objective_value,
                                  scan_score, toy_quadratic_objective,
                                  wrsc_delta_ems)


def fd_gradient(obj, x, h=1e-6):
    out = np.empty_like(x)
    for i in range(x.size):
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        out[i] = (objective_value(obj, xp) - objective_value(obj, xm)) / (2 * h)
    return out


class TestToyQuadratic:
    def test_minimum_value(self):
        w = np.array([1.0, 5.0, 1.0])
        obj = toy_quadratic_objective(w)
        assert objective_value(obj, w) == pytest.approx(-0.5 * w @ w)

    def test_gradient_exact(self):
        w = np.array([2.0, -1.0, 0.5])
        obj = toy_quadratic_objective(w)
        x = np.array([0.3, 0.7, -0.2])
        assert np.allclose(objective_gradient(obj, x), x - w)


class TestEms:
    def test_value_at_zero(self):
        obj = ems_objective(np.array([0.5, 0.5, 0.0]))
        assert objective_value(obj, np.zeros(3)) == 0.0

    def test_hand_value(self):
        obj = ems_objective(np.array([0.5, 0.5, 0.0]))
        assert objective_value(obj, np.array([1.0, 1.0, 0.0])) == pytest.approx(0.5, abs=1e-9)

    def test_gradient_convention_at_zero(self):
        c = np.array([0.5, 0.2, 0.0])
        obj = ems_objective(c)
        assert np.array_equal(objective_gradient(obj, np.zeros(3)), -c)

    def test_gradient_matches_fd(self):
        rng = np.random.default_rng(1)
        obj = ems_objective(normalize_counts_ems(rng.uniform(0, 5, 12)))
        for _ in range(10):
            x = rng.uniform(0.05, 0.95, 12)
            ana = objective_gradient(obj, x)
            fd = fd_gradient(obj, x)
            err = np.abs(ana - fd)
            assert np.all((err <= 1e-8) | (err / np.maximum(np.abs(fd), 1e-8) <= 1e-5))

    def test_unnormalized_counts_rejected(self):
        with pytest.raises(InputError):
            ems_objective(np.array([0.5, 1.2]))

    def test_hessian_quadratic_form_bounds(self):
        rng = np.random.default_rng(8)
        counts = normalize_counts_ems(rng.normal(0, 1, 30))
        c_hat = float(np.abs(counts).max())
        obj = ems_objective(counts)
        for _ in range(60):
            x = rng.uniform(0.5, 1.5, 30)
            d = rng.normal(0, 1, 30)
            q = ems_hessian_quadratic_form(obj, x, d)
            assert 1.0 - c_hat ** 2 - 1e-8 <= q <= 1.0 + 1e-8


class TestCountStatistics:
    def test_kulldorff_gradient_matches_fd(self):
        rng = np.random.default_rng(2)
        obj = kulldorff_objective(np.floor(rng.uniform(1, 10, 12)),
                                  rng.uniform(1, 5, 12))
        for _ in range(10):
            x = rng.uniform(0.05, 0.95, 12)
            ana = objective_gradient(obj, x)
            fd = fd_gradient(obj, x)
            err = np.abs(ana - fd)
            assert np.all((err <= 1e-8) | (err / np.maximum(np.abs(fd), 1e-8) <= 1e-5))

    def test_ebp_gradient_matches_fd(self):
        rng = np.random.default_rng(3)
        obj = ebp_objective(np.floor(rng.uniform(1, 10, 12)),
                            rng.uniform(1, 5, 12))
        for _ in range(10):
            x = rng.uniform(0.05, 0.95, 12)
            ana = objective_gradient(obj, x)
            fd = fd_gradient(obj, x)
            err = np.abs(ana - fd)
            assert np.all((err <= 1e-8) | (err / np.maximum(np.abs(fd), 1e-8) <= 1e-5))

    def test_negative_counts_rejected(self):
        with pytest.raises(InputError):
            kulldorff_objective(np.array([-1.0, 2.0]), np.array([1.0, 1.0]))

    def test_baseline_required(self):
        with pytest.raises(InputError):
            ebp_objective(np.array([1.0, 2.0]), None)


class TestValidation:
    def test_dimension_mismatch(self):
        obj = toy_quadratic_objective(np.ones(3))
        with pytest.raises(DimensionError):
            objective_value(obj, np.ones(4))

    def test_non_finite_x(self):
        obj = toy_quadratic_objective(np.ones(3))
        with pytest.raises(NumericError):
            objective_value(obj, np.array([1.0, np.nan, 0.0]))


class TestNormalization:
    def test_constant_vector_zeros(self):
        assert np.array_equal(normalize_counts_ems(np.full(5, 7.0)), np.zeros(5))

    def test_two_point(self):
        out = normalize_counts_ems(np.array([0.0, 10.0]))
        assert out == pytest.approx([-0.99, 0.99])

    def test_peak_bound(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            out = normalize_counts_ems(rng.normal(0, 10, 17))
            assert np.abs(out).max() <= 0.99 + 1e-12


class TestWrscDelta:
    def test_symmetric_point(self):
        assert wrsc_delta_ems(1.0, 0.0) == pytest.approx(0.0)

    def test_closed_form_point(self):
        # c_hat^2 = 0.5, xi = 0.5 -> sqrt(0.75)
        assert wrsc_delta_ems(0.5, np.sqrt(0.5)) == pytest.approx(np.sqrt(0.75))

    def test_boundary_rejected(self):
        c_hat = 0.6
        with pytest.raises(InputError):
            wrsc_delta_ems(2 * (1 - c_hat ** 2), c_hat)
        with pytest.raises(InputError):
            wrsc_delta_ems(0.5, 1.0)

    def test_below_one_on_domain(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            c_hat = rng.uniform(0.0, 0.99)
            bound = 2 * (1 - c_hat ** 2)
            xi = rng.uniform(1e-6, bound * (1 - 1e-9))
            assert wrsc_delta_ems(xi, c_hat) < 1.0


class TestScanScore:
    def test_ems_glrt_form(self):
        obj = ems_objective(np.array([0.5, 0.3, 0.0, 0.1]))
        s = SupportSet((0, 1))
        assert scan_score(obj, s) == pytest.approx(0.8 / np.sqrt(2))

    def test_empty_support(self):
        obj = ems_objective(np.array([0.5, 0.3]))
        assert scan_score(obj, SupportSet(())) == 0.0

    def test_kulldorff_indicator(self):
        c = np.array([1.0, 9.0, 9.0, 1.0, 1.0])
        b = np.full(5, 3.0)
        obj = kulldorff_objective(c, b)
        got = scan_score(obj, SupportSet((1, 2)))
        # direct evaluation of the likelihood-ratio formula
        u, w, C, B = 18.0, 6.0, 21.0, 15.0
        expected = (u * np.log(u / w) - C * np.log(C / B)
                    + (C - u) * np.log((C - u) / (B - w)))
        assert got == pytest.approx(expected, rel=1e-9)
