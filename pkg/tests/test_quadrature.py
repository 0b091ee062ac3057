import math

import mpmath as mp
import numpy as np
import pytest

from zetaid.errors import NoConvergence, TailModelUnusable
from zetaid.quadrature import (
    QuadratureOutcome,
    TailModel,
    eta_mean_square_density,
    initial_edges,
    integrate_finite,
    integrate_semi_infinite,
    integrate_vertical_line,
)
from zetaid.zeta_core import constant_A, eta_array


def test_polynomial_exactness():
    out = integrate_finite(lambda x: x * x, 0.0, 1.0, 1e-12)
    assert out.value == pytest.approx(1 / 3, abs=1e-15)
    assert out.evaluations > 0
    assert out.error_estimate >= 0 and out.tail_bound == 0


def test_degenerate_interval():
    out = integrate_finite(np.sin, 2.0, 2.0, 1e-10)
    assert (out.value, out.evaluations) == (0.0, 0)


def test_scalar_integrand_and_complex_values():
    out = integrate_finite(math.exp, 0.0, 1.0, 1e-12, vectorized=False)
    assert out.value == pytest.approx(math.e - 1, rel=1e-14)
    z = integrate_finite(lambda t: np.exp(1j * t), 0.0, math.pi, 1e-12)
    assert abs(z.value - 2j) < 1e-13


def test_lorentzian_partial_integral():
    out = integrate_finite(lambda x: np.cos(x) / (1 + x * x), -10.0, 10.0, 1e-12)
    with mp.workdps(30):
        ref = float(mp.quad(lambda x: mp.cos(x) / (1 + x * x), mp.linspace(-10, 10, 41)))
    assert abs(out.value - ref) < 1e-12


def test_error_estimate_covers_true_error():
    cases = [
        (lambda x: np.sqrt(x), 0.0, 1.0, 2 / 3),
        (lambda x: np.exp(-x) * np.sin(5 * x), 0.0, 6.0,
         float(mp.quad(lambda x: mp.exp(-x) * mp.sin(5 * x), [0, 6]))),
        (lambda x: 1 / (1 + 25 * x * x), -1.0, 1.0, 0.4 * math.atan(5)),
    ]
    for f, a, b, ref in cases:
        out = integrate_finite(f, a, b, 1e-9)
        assert abs(out.value - ref) <= out.total_uncertainty + 1e-15


def test_linearity_and_even_symmetry():
    f = lambda x: np.cos(3 * x) / (2 + x * x)
    g = lambda x: np.exp(-x * x)
    fg = integrate_finite(lambda x: 2 * f(x) - 0.5 * g(x), -4, 4, 1e-12).value
    assert fg == pytest.approx(2 * integrate_finite(f, -4, 4, 1e-12).value
                               - 0.5 * integrate_finite(g, -4, 4, 1e-12).value, abs=1e-12)
    full = integrate_finite(f, -7, 7, 1e-12).value
    half = integrate_finite(f, 0, 7, 1e-12).value
    assert full == pytest.approx(2 * half, abs=1e-12)


def test_budget_exhaustion_keeps_partial():
    with pytest.raises(NoConvergence) as info:
        integrate_finite(lambda x: np.sin(1 / x), 1e-6, 1.0, 1e-14, max_evaluations=3000)
    assert isinstance(info.value.partial, QuadratureOutcome)


def test_initial_edges_honour_breakpoints_and_width():
    e = initial_edges(0.0, 5.0, breakpoints=[1.5, 7.0], max_panel_width=1.0)
    assert 1.5 in e and e[0] == 0 and e[-1] == 5
    assert np.max(np.diff(e)) <= 1.0 + 1e-12


def test_deterministic_reduction():
    f = lambda x: np.cos(40 * x) * np.exp(-x)
    a = integrate_finite(f, 0, 30, 1e-13)
    b = integrate_finite(f, 0, 30, 1e-13)
    assert a.value == b.value and a.error_estimate == b.error_estimate


def test_inverse_power_tail():
    out = integrate_semi_infinite(lambda x: x ** -2.0, 1.0, TailModel.inverse_power(2, 0.0, 1.0), 1e-10)
    assert out.value == pytest.approx(1.0, abs=1e-10)
    # envelope-only use: the bound decides the cutoff
    out = integrate_semi_infinite(lambda x: x ** -3.0, 1.0, TailModel.inverse_power(3), 1e-8)
    assert abs(out.value - 0.5) <= out.total_uncertainty
    with pytest.raises(ValueError):
        TailModel.inverse_power(1.0)


def test_tail_model_failures():
    with pytest.raises(TailModelUnusable):
        integrate_semi_infinite(np.exp, 0.0, TailModel.none(), 1e-6)
    with pytest.raises(TailModelUnusable):
        integrate_semi_infinite(lambda x: x ** -1.5, 1.0, TailModel.inverse_power(1.5), 1e-12)
    with pytest.raises(ValueError):
        TailModel("gaussian")


@pytest.mark.parametrize("alpha", [0.0, 0.5, math.log(2), 3.0])
@pytest.mark.parametrize("sigma", [0.25, 0.5, 1.0, 2.0])
def test_lorentzian_full_line(alpha, sigma):
    f = lambda x: np.cos(alpha * x) / (sigma * sigma + x * x)
    rhs = math.pi / sigma * math.exp(-abs(alpha) * sigma)
    tail = (TailModel.inverse_power(2, sigma * sigma, 1.0, 4) if alpha == 0
            else TailModel.alternating(math.pi / alpha))
    out = integrate_semi_infinite(f, 0.0, tail, 1e-11 * rhs)
    assert abs(2 * out.value - rhs) / rhs <= 1e-8


def test_lorentzian_example_value():
    f = lambda x: np.cos(math.log(2) * x) / (0.25 + x * x)
    out = integrate_semi_infinite(f, 0.0, TailModel.alternating(math.pi / math.log(2)), 1e-12)
    assert 2 * out.value == pytest.approx(2 * math.pi * 2 ** -0.5, rel=1e-10)
    assert 2 * out.value == pytest.approx(4.442882938158366, rel=1e-10)


def test_phi_square_tail_closed_form():
    # int_X^inf (log(x)/4 + A)^2 x^-2 dx at X = 1000, evaluated with sympy:
    # 0.0049145202123584320069
    est, bound, _ = TailModel.phi_square_closed_form()._tail_phi_square(1000.0)
    assert est == pytest.approx(0.0049145202123584320069, rel=1e-14)
    # and at X = 1 the whole integral
    A = constant_A()
    ref = float(mp.quad(lambda x: (mp.log(x) / 4 + A) ** 2 / x ** 2, [1, mp.inf]))
    assert TailModel.phi_square_closed_form()._tail_phi_square(1.0)[0] == pytest.approx(ref, rel=1e-14)


def test_mean_square_density_tracks_measured_mean():
    # average |eta(1/2 + it)|^2 over [2000, 3000] against the model
    t = np.linspace(2000, 3000, 40001)
    measured = np.mean(np.abs(eta_array(0.5 + 1j * t)) ** 2)
    model = np.mean(eta_mean_square_density(0.5, t))
    assert abs(measured / model - 1) < 0.02
    t = np.linspace(2000, 3000, 40001)
    measured = np.mean(np.abs(eta_array(0.6 + 1j * t)) ** 2)
    model = np.mean(eta_mean_square_density(0.6, t))
    assert abs(measured / model - 1) < 0.02


def test_vertical_line_constant():
    out = integrate_vertical_line(lambda s: np.ones_like(s), 1.0, math.pi, 1e-12)
    assert out.value == pytest.approx(1.0, abs=1e-14)


def test_vertical_line_inverse_square():
    # (1/2 pi) int_{-T}^{T} (1 + it)^-2 dt = T / (pi (1 + T^2)) -> 0
    for T in (10.0, 1000.0):
        out = integrate_vertical_line(lambda s: 1 / s ** 2, 1.0, T, 1e-13)
        assert abs(out.value - T / (math.pi * (1 + T * T))) < 1e-12
        sym = integrate_vertical_line(lambda s: 1 / s ** 2, 1.0, T, 1e-13, conjugate_symmetric=True)
        assert sym.value == pytest.approx(out.value.real, abs=1e-12)
