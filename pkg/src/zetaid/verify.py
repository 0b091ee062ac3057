"""Both sides of every identity, packaged as IdentityReports.

Each check function returns one :class:`IdentityReport`.  ``CHECKS`` maps the
short CLI names to suites (lists of reports) with pinned default parameters.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import zeta_core as zc
from .errors import DomainError, InsufficientData
from .mellin import (
    indicator_function,
    inverse_mellin_phi_outcome,
    mellin_of_indicator_closed_form,
    mellin_square_convolution,
    mellin_transform,
    parseval_pair,
    phi_function,
    phi_remainder_function,
)
from .phi import PhiTable, phi_exact, phi_remainder
from .quadrature import (
    TailModel,
    integrate_semi_infinite,
)
from .report import IdentityReport, build_report

# quadrature tolerances are this fraction of the report tolerance
_QUAD_SHARE = 1e-2
_LINE_BUDGET_PER_UNIT = 60


def _qtol(tol, scale):
    """Quadrature tolerance, floored near binary64 resolution of ``scale``."""
    return max(tol, 1e-15 * abs(scale))


def _ms(start):
    return 1e3 * (time.perf_counter() - start)


def _line_budget(T):
    return max(1_000_000, int(_LINE_BUDGET_PER_UNIT * T))


def theorem1_rhs(sigma: float) -> float:
    """(pi/sigma)(1 - 2^{1-2 sigma}) zeta(2 sigma), with 2 pi log 2 at sigma = 1/2."""
    if sigma == 0.5:
        return 2.0 * math.pi * zc.LOG2
    return math.pi / sigma * zc.eta(2.0 * sigma).real


def _eta_over_s_sq(sigma, power=1):
    def f(t):
        s = sigma + 1j * np.asarray(t, dtype=float)
        e = zc.eta_array(s)
        return (np.abs(e) ** 2 / (sigma * sigma + t * t)) ** power
    return f


def theorem1(sigma: float, T: float = 1.0e4, tol: float | None = None) -> IdentityReport:
    """int_{-T}^{T} |eta(sigma+it)|^2/(sigma^2+t^2) dt plus the mean-square tail."""
    if not sigma > 0:
        raise DomainError("theorem1 needs sigma > 0")
    if tol is None:
        tol = 5e-3 if sigma == 0.5 else 1e-3
    start = time.perf_counter()
    rhs = theorem1_rhs(sigma)
    half = integrate_semi_infinite(
        _eta_over_s_sq(sigma), 0.0, TailModel.eta_mean_square(sigma),
        _qtol(_QUAD_SHARE * tol * rhs / 2, rhs), cutoff=T, max_panel_width=1.0,
        max_evaluations=_line_budget(T),
    )
    return build_report(
        "t1", {"sigma": sigma, "T": T}, 2.0 * half.value, rhs, tol,
        tail_bound=2.0 * half.tail_bound, elapsed_ms=_ms(start),
    )


def theorem1_parseval_route(sigma: float, tol: float = 1e-9) -> float:
    """2 pi m[g](2 sigma) by direct quadrature; equals the right side checked by :func:`theorem1`."""
    out = mellin_transform(indicator_function(), 2.0 * sigma, tol)
    return 2.0 * math.pi * float(np.real(out.value))


def corollary1(T: float = 5000.0, tol: float = 5e-3) -> IdentityReport:
    """int_0^T (3 - sqrt8 cos(t log 2)) |zeta(1/2+it)|^2 / (1/4 + t^2) dt against pi log 2."""
    start = time.perf_counter()
    rhs = math.pi * zc.LOG2

    def f(t):
        t = np.asarray(t, dtype=float)
        z = zc.zeta_array(0.5 + 1j * t)
        return zc.eta_weight_sq(0.5, t) * np.abs(z) ** 2 / (0.25 + t * t)

    out = integrate_semi_infinite(
        f, 0.0, TailModel.eta_mean_square(0.5), _qtol(_QUAD_SHARE * tol * rhs, rhs),
        cutoff=T, max_panel_width=1.0, max_evaluations=_line_budget(T),
    )
    return build_report(
        "c1", {"T": T}, out.value, rhs, tol,
        tail_bound=out.tail_bound, elapsed_ms=_ms(start),
    )


def theorem2(s, X: float = 1.0e6, tol: float = 1e-3, table: PhiTable | None = None) -> IdentityReport:
    """s^2 m[phi](s) against (1 - 2^{1-s})^2 zeta(s)^2."""
    s = zc.as_point(s)
    if not s.real > 0:
        raise DomainError("theorem2 needs Re s > 0")
    start = time.perf_counter()
    rhs = zc.eta(s) ** 2
    phi = phi_function(X, table)
    quad_tol = _qtol(_QUAD_SHARE * tol * abs(rhs), abs(rhs)) / abs(s * s)
    out = mellin_transform(phi, s, quad_tol, cutoff=X)
    lhs = s * s * out.value
    return build_report(
        "t2", {"s": s, "X": X}, _tidy(lhs, s), _tidy(rhs, s), tol,
        tail_bound=abs(s * s) * out.tail_bound, elapsed_ms=_ms(start),
    )


def _tidy(v, s):
    # real arguments give real values; drop round-off imaginary parts
    v = complex(v)
    return complex(v.real, 0.0) if s.imag == 0 else v


def corollary2(T: float = 500.0, X: float = 1.0e5, tol: float = 1e-2,
               table: PhiTable | None = None) -> IdentityReport:
    """Quartic weighted moment on the critical line against pi int phi^2 x^-2."""
    start = time.perf_counter()

    def f(t):
        t = np.asarray(t, dtype=float)
        z = zc.zeta_array(0.5 + 1j * t)
        return (zc.eta_weight_sq(0.5, t) * np.abs(z) ** 2 / (0.25 + t * t)) ** 2

    table = table if table is not None else PhiTable(X)
    probe = 2.0  # order of magnitude of the right side

    left = integrate_semi_infinite(
        f, 0.0, TailModel.eta_mean_square(0.5, moment=2), _qtol(_QUAD_SHARE * tol * probe, probe),
        cutoff=T, max_panel_width=1.0, max_evaluations=_line_budget(T),
    )

    def g(x):
        return table(x) ** 2 / (x * x)

    right = integrate_semi_infinite(
        g, 1.0, TailModel.phi_square_closed_form(), _qtol(_QUAD_SHARE * tol * probe, probe) / math.pi,
        cutoff=X, breakpoints=np.arange(2.0, X), max_evaluations=max(1_000_000, int(40 * X)),
    )
    return build_report(
        "c2", {"T": T, "X": X}, left.value, math.pi * right.value, tol,
        tail_bound=left.tail_bound + math.pi * right.tail_bound, elapsed_ms=_ms(start),
    )


DEFAULT_DECAY_GRID = tuple(np.geomspace(1e2, 1e6, 50))
DECAY_TARGET = -0.25


def theorem3_decay(x_grid=DEFAULT_DECAY_GRID, tol: float = 0.05) -> IdentityReport:
    """Least-squares slope of log|phi_1| against log x; passes if slope <= -1/4 + tol."""
    start = time.perf_counter()
    x = np.asarray(x_grid, dtype=float)
    if x.size < 10:
        raise DomainError("theorem3_decay needs at least 10 grid points")
    if np.any(x < 10) or np.any(x > 1e8):
        raise DomainError("theorem3_decay grid must lie in [10, 1e8]")
    ratios = x[1:] / x[:-1]
    if np.any(ratios <= 1) or np.ptp(np.log(ratios)) > 1e-6 * np.mean(np.log(ratios)):
        raise DomainError("theorem3_decay grid must be increasing and geometric")
    r = phi_remainder(x)
    usable = np.abs(r) >= 1e-6
    if usable.sum() < 5:
        raise InsufficientData(f"only {int(usable.sum())} usable points for the decay fit")
    slope = float(np.polyfit(np.log(x[usable]), np.log(np.abs(r[usable])), 1)[0])
    anchor = phi_remainder(1.0)
    params = {
        "x_min": float(x[0]),
        "x_max": float(x[-1]),
        "points": int(usable.sum()),
        "phi1_at_1": anchor,
        "max_scaled": float(np.max(np.abs(r) * x ** 0.2)),
    }
    return build_report(
        "t3", params, slope, DECAY_TARGET, tol,
        elapsed_ms=_ms(start), passed=slope <= DECAY_TARGET + tol,
    )


def phi1_identity(s, X: float = 1.0e6, tol: float = 1e-2, table: PhiTable | None = None) -> IdentityReport:
    """A s + 1/4 + s^2 m[phi_1](s) against (1 - 2^{1-s})^2 zeta(s)^2, Re s > -1/4."""
    s = zc.as_point(s)
    if not s.real > -0.25:
        raise DomainError("phi1_identity needs Re s > -1/4")
    start = time.perf_counter()
    rhs = zc.eta(s) ** 2
    f = phi_remainder_function(X, table)
    scale = abs(s * s) if s != 0 else 1.0
    out = mellin_transform(f, s, _qtol(_QUAD_SHARE * tol * abs(rhs), abs(rhs)) / scale, cutoff=X)
    lhs = zc.constant_A() * s + 0.25 + s * s * out.value
    return build_report(
        "phi1", {"s": s, "X": X}, _tidy(lhs, s), _tidy(rhs, s), tol,
        tail_bound=abs(s * s) * out.tail_bound, elapsed_ms=_ms(start),
    )


LORENTZ_ALPHAS = (0.0, 0.5, math.log(2.0), 3.0)
LORENTZ_SIGMAS = (0.25, 0.5, 1.0, 2.0)


def lorentzian_check(alpha: float, sigma: float, tol: float = 1e-8) -> IdentityReport:
    """int_R cos(alpha x)/(sigma^2 + x^2) dx against (pi/sigma) e^{-|alpha| sigma}."""
    start = time.perf_counter()
    rhs = math.pi / sigma * math.exp(-abs(alpha) * sigma)

    def f(x):
        return np.cos(alpha * x) / (sigma * sigma + x * x)

    if alpha == 0:
        tail = TailModel.inverse_power(2, sigma * sigma, 1.0, 4)
    else:
        tail = TailModel.alternating(math.pi / abs(alpha))
    out = integrate_semi_infinite(f, 0.0, tail, _qtol(1e-3 * tol * rhs / 2, rhs))
    return build_report(
        "eq7", {"alpha": alpha, "sigma": sigma}, 2.0 * out.value, rhs, tol,
        tail_bound=2.0 * out.tail_bound, elapsed_ms=_ms(start),
    )


def indicator_transform_check(s, X: float = 1.0e6, tol: float = 1e-4) -> IdentityReport:
    """Numeric m[g](s) against (1 - 2^{1-s}) zeta(s) / s."""
    s = zc.as_point(s)
    start = time.perf_counter()
    rhs = mellin_of_indicator_closed_form(s)
    out = mellin_transform(indicator_function(), s, _qtol(_QUAD_SHARE * tol * abs(rhs), abs(rhs)), cutoff=X)
    return build_report(
        "eq8", {"s": s, "X": X}, _tidy(out.value, s), _tidy(rhs, s), tol,
        tail_bound=out.tail_bound, elapsed_ms=_ms(start),
    )


def parseval_indicator(sigma: float, T: float = 1.0e4, X: float = 1.0e6, tol: float = 1e-4) -> IdentityReport:
    """g x^{-1-2 sigma} integrated directly against the line integral of |m[g]|^2."""
    g = indicator_function()
    rep = parseval_pair(g, g, sigma, T, tol, product=g,
                        tail=TailModel.eta_mean_square(sigma), cutoff=X)
    closed = zc.eta(2.0 * sigma).real / (2.0 * sigma)
    extras = {
        "closed_form": closed,
        "lhs_vs_closed": abs(rep.lhs - closed) / closed,
        "rhs_vs_closed": abs(rep.rhs - closed) / closed,
    }
    return build_report(
        "parseval", {"sigma": sigma, "T": T, "X": X}, rep.lhs, rep.rhs, tol,
        tail_bound=rep.tail_bound, elapsed_ms=rep.elapsed_ms, extras=extras,
    )


def inversion(x: float, c: float = 1.0, T: float = 1.0e3, tol: float = 5e-3) -> IdentityReport:
    """Truncated inverse transform of (eta(s)/s)^2 against phi_exact(x)."""
    start = time.perf_counter()
    out = inverse_mellin_phi_outcome(x, c, T, max(1e-2 * tol, 1e-13))
    return build_report(
        "inversion", {"x": x, "c": c, "T": T}, out.value, phi_exact(x), tol,
        elapsed_ms=_ms(start),
    )


CONVOLUTION_S_VALUES = (0.0, 1.0, 2.0, 1.0 + 1.0j, 0.5 + 3.0j)


@dataclass(frozen=True)
class ConvolutionCase:
    coefficients: tuple
    a: float
    b: float
    s: complex

    def f(self, x):
        return np.polynomial.polynomial.polyval(x, self.coefficients)


def convolution_cases(count: int = 50, seed: int = 0) -> list[ConvolutionCase]:
    """Random polynomials (degree <= 4, positive coefficients) on 0 < a < b <= 5."""
    rng = np.random.default_rng(seed)
    cases = []
    for i in range(count):
        deg = int(rng.integers(0, 5))
        coeffs = tuple(float(c) for c in rng.uniform(0.1, 1.0, deg + 1))
        a = float(rng.uniform(0.1, 4.0))
        b = float(rng.uniform(a + 0.2, 5.0)) if a + 0.2 < 5.0 else 5.0
        cases.append(ConvolutionCase(coeffs, a, b, complex(CONVOLUTION_S_VALUES[i % len(CONVOLUTION_S_VALUES)])))
    return cases


def square_convolution_check(count: int = 50, seed: int = 0, tol: float = 1e-6) -> IdentityReport:
    """Aggregate over random cases: lhs is the worst relative discrepancy, rhs is 0."""
    start = time.perf_counter()
    worst = 0.0
    for case in convolution_cases(count, seed):
        rep = mellin_square_convolution(case.f, case.a, case.b, case.s, tol)
        worst = max(worst, rep.rel_error)
    return build_report(
        "lemma10", {"cases": count, "seed": seed}, worst, 0.0, tol, elapsed_ms=_ms(start),
    )


# ---------------------------------------------------------------------------
# suites for the command line


@dataclass
class SuiteOptions:
    sigma: float | None = None
    s: complex | None = None
    t_max: float | None = None
    x_max: float | None = None
    tol: float | None = None


def _pick(value, default):
    return default if value is None else value


def _tol(opts, default):
    return _pick(opts.tol, default)


def suite_t1(o: SuiteOptions):
    sigmas = (o.sigma,) if o.sigma is not None else (0.6, 0.75, 1.0, 1.5)
    return [theorem1(sg, _pick(o.t_max, 5000.0), o.tol) for sg in sigmas]


def suite_c1(o):
    return [corollary1(_pick(o.t_max, 5000.0), _tol(o, 5e-3))]


def suite_t2(o):
    if o.s is not None:
        return [theorem2(o.s, _pick(o.x_max, 1e6), _tol(o, 1e-3))]
    X = _pick(o.x_max, 1e6)
    table = PhiTable(X)
    return [theorem2(s, X, _tol(o, t), table) for s, t in ((2, 1e-6), (1, 1e-4), (0.5 + 1j, 1e-3))]


def suite_c2(o):
    return [corollary2(_pick(o.t_max, 500.0), _pick(o.x_max, 1e5), _tol(o, 1e-2))]


def suite_t3(o):
    return [theorem3_decay(tol=_tol(o, 0.05))]


def suite_phi1(o):
    X = _pick(o.x_max, 1e6)
    values = (o.s,) if o.s is not None else (2.0, 0.25, -0.1)
    table = PhiTable(X)
    return [phi1_identity(s, X, _tol(o, 1e-2), table) for s in values]


def suite_eq7(o):
    return [lorentzian_check(a, sg, _tol(o, 1e-8)) for a in LORENTZ_ALPHAS for sg in LORENTZ_SIGMAS]


def suite_lemma10(o):
    return [square_convolution_check(tol=_tol(o, 1e-6))]


def suite_parseval(o):
    sigmas = (o.sigma,) if o.sigma is not None else (0.75, 1.0)
    return [parseval_indicator(sg, _pick(o.t_max, 5000.0), _pick(o.x_max, 1e6), _tol(o, 1e-4))
            for sg in sigmas]


def suite_eq8(o):
    values = (o.s,) if o.s is not None else (2.0, 1.5, 0.5 + 1j, 0.75 + 5j)
    return [indicator_transform_check(s, _pick(o.x_max, 1e6), _tol(o, 1e-4)) for s in values]


def suite_inversion(o):
    return [inversion(x, 1.0, _pick(o.t_max, 1e3), _tol(o, 5e-3)) for x in (1.0, 2.0, 100.0)]


CHECKS = {
    "t1": suite_t1,
    "c1": suite_c1,
    "t2": suite_t2,
    "c2": suite_c2,
    "t3": suite_t3,
    "phi1": suite_phi1,
    "eq7": suite_eq7,
    "lemma10": suite_lemma10,
    "parseval": suite_parseval,
    "eq8": suite_eq8,
    "inversion": suite_inversion,
}


def run_checks(names, options: SuiteOptions | None = None) -> list[IdentityReport]:
    options = options or SuiteOptions()
    if "all" in names:
        names = list(CHECKS)
    reports = []
    for name in names:
        reports.extend(CHECKS[name](options))
    return reports
