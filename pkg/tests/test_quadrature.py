"""Quadrature and derivative engine against closed-form moment oracles.

Gauss-Laguerre exactness is checked in log space; the naive moment sum
overflows float range long before the rule itself degrades. Synthetic
SampledState instances (plain polynomials, unit weight) expose the
strip-grid inner product and the finite-difference stencils directly.
"""

import math

import mpmath
import numpy as np
import pytest
from scipy.special import logsumexp

from morseband import (
    ConvergenceError,
    DomainError,
    GridMismatchError,
    GridSpec,
    IntegrationResult,
    SampledState,
    TailDominanceError,
    fd_derivative,
    gauss_laguerre_nodes,
    grid_inner_product,
    integrate_radial,
    integrate_semi_infinite_u,
    weighted_norm,
)

mpmath.mp.dps = 30


class TestGaussLaguerre:
    @pytest.mark.parametrize("alpha", [0.0, 3.0])
    def test_polynomial_moments_exact_in_log_space(self, alpha):
        # order-256 rule integrates u^k exactly for k <= 511; compare
        # log(sum w u^k) with lgamma(k + alpha + 1)
        u, w = gauss_laguerre_nodes(256, alpha)
        with np.errstate(divide="ignore"):
            # weights at the far nodes underflow; logsumexp drops the -inf
            ln_u = np.log(u)
            ln_w = np.log(w)
        worst = 0.0
        for k in (0, 1, 2, 7, 63, 255, 400, 511):
            got = logsumexp(ln_w + k * ln_u)
            want = math.lgamma(k + alpha + 1.0)
            worst = max(worst, abs(got - want) / max(1.0, abs(want)))
        assert worst <= 1e-12

    def test_small_orders_against_closed_moments(self):
        for order in (1, 2, 3, 5):
            u, w = gauss_laguerre_nodes(order)
            for k in range(2 * order):
                assert abs(np.sum(w * u**k) - math.factorial(k)) <= 1e-12 * math.factorial(k)

    def test_nodes_are_cached_and_frozen(self):
        u1, _ = gauss_laguerre_nodes(64)
        u2, _ = gauss_laguerre_nodes(64)
        assert u1 is u2
        with pytest.raises((ValueError, RuntimeError)):
            u1[0] = 0.0

    def test_guards(self):
        with pytest.raises(DomainError):
            gauss_laguerre_nodes(0)
        with pytest.raises(DomainError):
            gauss_laguerre_nodes(257)
        with pytest.raises(DomainError):
            gauss_laguerre_nodes(16, alpha=-1.0)


class TestSemiInfinite:
    def test_log_moments_against_polygamma_closed_forms(self):
        # int u^(nu-1) e^-u ln u du = Gamma(nu) psi(nu); the squared-log
        # version adds Gamma(nu) psi'(nu)
        for nu in (0.1, 1.0, 2.5, 41.0):
            res = integrate_semi_infinite_u(np.log, nu - 1.0)
            want = float(mpmath.gamma(nu) * mpmath.digamma(nu))
            assert abs(res.value - want) <= 1e-12 * max(1.0, abs(want))

            res2 = integrate_semi_infinite_u(lambda u: np.log(u) ** 2, nu - 1.0)
            want2 = float(
                mpmath.gamma(nu) * (mpmath.digamma(nu) ** 2 + mpmath.polygamma(1, nu))
            )
            assert abs(res2.value - want2) <= 1e-12 * max(1.0, abs(want2))

    def test_singular_weight_endpoint(self):
        res = integrate_semi_infinite_u(lambda u: np.ones_like(u), -0.9)
        want = math.gamma(0.1)
        assert abs(res.value - want) <= 1e-11 * want

    def test_high_degree_monomial(self):
        res = integrate_semi_infinite_u(lambda u: u**20, 60.0)
        want = math.exp(math.lgamma(81.0))
        assert abs(res.value - want) <= 1e-11 * want

    def test_error_estimate_is_honest(self):
        res = integrate_semi_infinite_u(np.log, 1.5)
        want = float(mpmath.gamma(2.5) * mpmath.digamma(2.5))
        assert abs(res.value - want) <= max(res.error_estimate, 1e-13 * abs(want))

    def test_oscillatory_integrand_refuses(self):
        with pytest.raises(ConvergenceError):
            integrate_semi_infinite_u(lambda u: np.cos(50.0 * u), 0.0)

    def test_guard(self):
        with pytest.raises(DomainError):
            integrate_semi_infinite_u(np.log, -1.0)


class TestRadial:
    def test_exponential_moment(self):
        res = integrate_radial(lambda r: r**3 * np.exp(-2.0 * r), 30.0)
        assert abs(res.value - 3.0 / 8.0) <= 1e-12

    def test_gaussian(self):
        res = integrate_radial(lambda r: r * np.exp(-(r**2)), 12.0)
        assert abs(res.value - 0.5) <= 1e-12

    def test_complex_integrand(self):
        res = integrate_radial(lambda r: np.exp((1j - 1.0) * r), 60.0)
        want = 1.0 / (1.0 - 1j)
        assert abs(res.value - want) <= 1e-12

    def test_slow_tail_refuses(self):
        with pytest.raises(TailDominanceError):
            integrate_radial(lambda r: 1.0 / (1.0 + r**2), 50.0)

    def test_guard(self):
        with pytest.raises(DomainError):
            integrate_radial(lambda r: r, 0.0)


def _flat_state(nx: int, ny: int, fx, x_min=0.0, x_max=1.0, y_period=1.0) -> SampledState:
    grid = GridSpec(x_min, x_max, nx, ny)
    x = np.linspace(x_min, x_max, nx)
    y = -0.5 * y_period + np.arange(ny) * (y_period / ny)
    values = np.repeat(fx(x)[:, None], ny, axis=1).astype(complex)
    return SampledState(
        grid=grid, x=x, y=y, values=values, weight=np.ones(nx), y_period=y_period
    )


def _harmonic_state(nx: int, ny: int, m: int, y_period=1.0) -> SampledState:
    grid = GridSpec(0.0, 1.0, nx, ny)
    x = np.linspace(0.0, 1.0, nx)
    y = -0.5 * y_period + np.arange(ny) * (y_period / ny)
    values = np.repeat(
        np.exp(2j * math.pi * m * y / y_period)[None, :], nx, axis=0
    )
    return SampledState(
        grid=grid, x=x, y=y, values=values, weight=np.ones(nx), y_period=y_period
    )


class TestGridInnerProduct:
    @pytest.mark.parametrize("nx", [8, 9, 1024, 1025])
    def test_simpson_exact_on_cubics(self, nx):
        # <1|x^3> over [0,1] with unit weight integrates the cubic exactly
        ones = _flat_state(nx, 8, lambda x: np.ones_like(x))
        cubic = _flat_state(nx, 8, lambda x: x**3 - 2.0 * x**2 + 0.5 * x - 1.0)
        got = grid_inner_product(ones, cubic)
        want = 0.25 - 2.0 / 3.0 + 0.5 / 2.0 - 1.0
        assert abs(got - want) <= 1e-14

    def test_periodic_sum_kills_harmonics_exactly(self):
        ones = _harmonic_state(16, 32, 0)
        for m in (1, 2, 7, 31):
            h = _harmonic_state(16, 32, m)
            assert abs(grid_inner_product(ones, h)) <= 1e-13

    def test_conjugation_side(self):
        a = _harmonic_state(16, 32, 1)
        b = _harmonic_state(16, 32, 1)
        # <a|a> positive: first slot is conjugated
        assert grid_inner_product(a, b).real > 0.99
        assert abs(grid_inner_product(a, b).imag) <= 1e-14

    def test_weighted_norm_margin_guard(self):
        s = _flat_state(16, 8, lambda x: np.ones_like(x))
        assert abs(weighted_norm(s) - 1.0) <= 1e-14
        with pytest.raises(DomainError):
            weighted_norm(s, exclude_margin=8)

    def test_grid_mismatch_raises(self):
        a = _flat_state(16, 8, lambda x: x)
        b = _flat_state(32, 8, lambda x: x)
        with pytest.raises(GridMismatchError):
            grid_inner_product(a, b)


class TestDerivatives:
    def test_x_derivative_converges_at_fourth_order(self):
        errs = []
        for nx in (64, 128):
            s = _flat_state(nx, 8, lambda x: np.exp(np.sin(3.0 * x)))
            d = fd_derivative(s, "x", 1)
            exact = 3.0 * np.cos(3.0 * s.x) * np.exp(np.sin(3.0 * s.x))
            errs.append(np.max(np.abs(d.values[:, 0].real - exact)))
        order = math.log2(errs[0] / errs[1])
        assert order >= 3.7

    def test_x_second_derivative_converges(self):
        # interior rows are fourth order; the one-sided edge rows drop to
        # third, which is why the operator layer excludes a margin
        errs_interior = []
        errs_edge = []
        for nx in (64, 128):
            s = _flat_state(nx, 8, lambda x: np.exp(np.sin(3.0 * x)))
            d = fd_derivative(s, "x", 2)
            f = np.exp(np.sin(3.0 * s.x))
            exact = (3.0 * np.cos(3.0 * s.x)) ** 2 * f - 9.0 * np.sin(3.0 * s.x) * f
            err = np.abs(d.values[:, 0].real - exact)
            errs_interior.append(np.max(err[2:-2]))
            errs_edge.append(np.max(err))
        assert math.log2(errs_interior[0] / errs_interior[1]) >= 3.7
        assert math.log2(errs_edge[0] / errs_edge[1]) >= 2.7

    def test_y_derivative_is_spectrally_exact_on_harmonics(self):
        for m in (1, 5, 15):
            h = _harmonic_state(8, 64, m)
            d = fd_derivative(h, "y", 1)
            exact = 2j * math.pi * m * h.values
            assert np.max(np.abs(d.values - exact)) <= 5e-13 * max(1.0, 2 * math.pi * m)
            d2 = fd_derivative(h, "y", 2)
            exact2 = -((2 * math.pi * m) ** 2) * h.values
            assert np.max(np.abs(d2.values - exact2)) <= 5e-11 * (2 * math.pi * m) ** 2

    def test_guards(self):
        s = _flat_state(16, 8, lambda x: x)
        with pytest.raises(DomainError):
            fd_derivative(s, "x", 3)
        with pytest.raises(DomainError):
            fd_derivative(s, "z", 1)


class TestContainers:
    def test_integration_result_guards(self):
        with pytest.raises(DomainError):
            IntegrationResult(value=1.0, error_estimate=-1.0, evaluations=4)
        with pytest.raises(DomainError):
            IntegrationResult(value=1.0, error_estimate=0.0, evaluations=0)

    def test_grid_spec_guards(self):
        with pytest.raises(DomainError):
            GridSpec(1.0, 0.0, 16, 16)
        with pytest.raises(DomainError):
            GridSpec(0.0, 1.0, 4, 16)

    def test_sampled_state_shape_guards(self):
        grid = GridSpec(0.0, 1.0, 16, 8)
        x = np.linspace(0.0, 1.0, 16)
        y = np.arange(8) / 8.0
        vals = np.zeros((16, 8), dtype=complex)
        with pytest.raises(DomainError):
            SampledState(grid=grid, x=x, y=y, values=vals, weight=-np.ones(16), y_period=1.0)
        with pytest.raises(DomainError):
            SampledState(grid=grid, x=x, y=y, values=np.zeros((8, 16), dtype=complex), weight=np.ones(16), y_period=1.0)
