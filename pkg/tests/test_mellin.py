import math

import mpmath as mp
import numpy as np
import pytest

from zetaid.errors import DivergentTransform, DomainError
from zetaid.mellin import (
    MellinFunction,
    indicator_function,
    inverse_mellin_phi,
    log_measure_fold,
    mellin_of_indicator_closed_form,
    mellin_square_convolution,
    mellin_transform,
    modified_mellin,
    parseval_pair,
    phi_function,
    phi_remainder_function,
    phi_transform_closed_form,
    power_function,
)
from zetaid.phi import PhiTable, indicator_g, phi_exact
from zetaid.quadrature import TailModel

PI = math.pi


@pytest.fixture(scope="module")
def table():
    return PhiTable(1e6)


def test_constant_function():
    one = MellinFunction(lambda x: np.ones_like(np.asarray(x, dtype=float)), growth_hint=0.0, name="1")
    assert modified_mellin(one, 2, 1e-9) == pytest.approx(0.5, abs=1e-9)


def test_power_function():
    f = power_function(1.0)
    assert modified_mellin(f, 0.5 + 2j, 1e-10) == pytest.approx(1 / (1.5 + 2j), abs=1e-10)


def test_divergent_transform():
    with pytest.raises(DivergentTransform):
        modified_mellin(indicator_function(), 0.0)
    with pytest.raises(DivergentTransform):
        modified_mellin(phi_remainder_function(1e3), -0.3)


def test_indicator_closed_form():
    assert mellin_of_indicator_closed_form(2) == pytest.approx(PI ** 2 / 24, rel=1e-15)
    assert mellin_of_indicator_closed_form(1) == math.log(2)
    s = 0.5 + 1j
    ref = complex((1 - mp.power(2, 1 - mp.mpc(0.5, 1))) * mp.zeta(mp.mpc(0.5, 1)) / mp.mpc(0.5, 1))
    assert abs(mellin_of_indicator_closed_form(s) - ref) < 1e-13


@pytest.mark.parametrize("s", [2, 0.5 + 1j])
def test_indicator_numeric_transform(s):
    g = indicator_function()
    out = mellin_transform(g, s, 1e-9, cutoff=1e6)
    cf = mellin_of_indicator_closed_form(s)
    assert abs(out.value - cf) / abs(cf) <= 1e-6
    # the reported uncertainty covers the actual discrepancy
    assert abs(out.value - cf) <= out.total_uncertainty + 1e-12


def test_indicator_transform_automatic_cutoff():
    out = mellin_transform(indicator_function(), 3.0, 1e-10)
    assert out.cutoff < 1e6
    assert abs(out.value - mellin_of_indicator_closed_form(3.0)) < 1e-10


def test_indicator_tail_at_odd_cutoff():
    # a cutoff inside an odd interval still gives the right answer
    g = indicator_function()
    a = modified_mellin(g, 2.0, 1e-11, cutoff=10001.5)
    assert a == pytest.approx(PI ** 2 / 24, abs=1e-10)


def test_phi_transform(table):
    phi = phi_function(table=table)
    v = modified_mellin(phi, 2, 1e-12, cutoff=1e6)
    assert v == pytest.approx(PI ** 4 / 576, rel=1e-9)
    assert v == pytest.approx(0.16911300526736534, rel=1e-9)
    assert phi_transform_closed_form(2) == pytest.approx(PI ** 4 / 576, rel=1e-14)


def test_inverse_mellin_examples():
    assert abs(inverse_mellin_phi(1.0, 1.0, 500.0)) <= 5e-3
    assert abs(inverse_mellin_phi(2.0, 1.0, 500.0) - math.log(2)) <= 5e-3
    assert abs(inverse_mellin_phi(100.0, 1.0, 1e3) - phi_exact(100.0)) <= 1e-2
    with pytest.raises(DomainError):
        inverse_mellin_phi(0.5)
    with pytest.raises(DomainError):
        inverse_mellin_phi(2.0, c=-1.0)


def test_inverse_mellin_other_line():
    # c = 2, T = 400 at x = 2: the truncation error is about 1.6e-3 here
    assert abs(inverse_mellin_phi(2.0, 2.0, 400.0) - math.log(2)) <= 2e-3


def test_inverse_mellin_grid():
    xs = np.linspace(1.0, 60.0, 20)
    errs = [abs(inverse_mellin_phi(x, 1.0, 1e3) - phi_exact(x)) for x in xs]
    assert max(errs) <= 5e-3


def test_parseval_power_pair():
    # f = g = 1/x, sigma = 1: int x^-2 x^-3 dx = 1/4 = (1/2 pi) int dt / (4 + t^2)
    f = power_function(1.0)
    rep = parseval_pair(f, f, 1.0, T=1e4, tol=1e-8, tail=TailModel.inverse_power(2, 4.0, 1.0, 4))
    assert rep.lhs == pytest.approx(0.25, rel=1e-9)
    assert rep.rhs == pytest.approx(0.25, rel=1e-9)
    assert rep.passed


def test_parseval_indicator_pair():
    g = indicator_function()
    rep = parseval_pair(g, g, 1.0, T=3000, tol=1e-4, product=g,
                        tail=TailModel.eta_mean_square(1.0), cutoff=1e6)
    assert rep.passed
    assert rep.lhs == pytest.approx(PI ** 2 / 24, rel=1e-9)


def test_parseval_needs_closed_forms(table):
    phi = phi_function(table=table)
    with pytest.raises(ValueError):
        parseval_pair(phi, phi, 1.0)


def test_square_convolution_examples():
    one = mellin_square_convolution(lambda x: np.ones_like(x), 1.0, 2.0, 0.0)
    assert one.lhs == pytest.approx(1.0, abs=1e-14) and one.rhs == pytest.approx(1.0, abs=1e-10)
    lin = mellin_square_convolution(lambda x: x, 1.0, 2.0, 2.0)
    assert lin.lhs == pytest.approx(math.log(2) ** 2, rel=1e-13)
    assert abs(lin.rhs - math.log(2) ** 2) < 1e-8
    sq = mellin_square_convolution(lambda x: x * x, 0.5, 3.0, 1 + 1j, 1e-6)
    assert sq.passed and sq.rel_error < 1e-6


def test_square_convolution_limits_and_errors():
    with pytest.raises(DomainError):
        mellin_square_convolution(np.cos, 2.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        mellin_square_convolution(np.cos, 1.0, math.inf, 2.0)
    # a < 1 < b with a fast-varying f exercises the inner limits max(a, X/b), min(X/a, b)
    rep = mellin_square_convolution(lambda x: np.exp(x) * np.cos(3 * x), 0.3, 4.5, 0.5 + 3j, 1e-6)
    assert rep.rel_error < 1e-8
    ref = complex(mp.quad(lambda x: mp.exp(x) * mp.cos(3 * x) * mp.power(x, -mp.mpc(0.5, 3)), [0.3, 4.5])) ** 2
    assert abs(rep.lhs - ref) < 1e-10 * abs(ref)


def test_symmetrization():
    x = 37.0
    h = lambda u: indicator_g(u) * indicator_g(x / u)
    jumps = np.concatenate([np.arange(1, 38), x / np.arange(1, 38)])
    full, folded = log_measure_fold(h, x, breakpoints=jumps)
    assert full == pytest.approx(folded, abs=1e-8)
    assert full == pytest.approx(phi_exact(x), abs=1e-8)
    h2 = lambda u: np.cos(np.log(u) * np.log(x / u))
    full, folded = log_measure_fold(h2, x)
    assert full == pytest.approx(folded, abs=1e-10)


def test_phi1_transform_converges_below_zero(table):
    f = phi_remainder_function(table=table)
    v = modified_mellin(f, -0.1, 1e-9, cutoff=1e6)
    assert math.isfinite(abs(v))
