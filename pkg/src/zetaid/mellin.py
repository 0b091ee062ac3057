"""Modified Mellin transforms m[f](s) = int_1^inf f(x) x^{-s-1} dx and friends.

A :class:`MellinFunction` bundles an evaluator with what the integrators need
to know about it: a growth exponent alpha with |f(x)| << x^alpha log x, an
optional closed-form tail beyond the truncation point, integer breakpoints for
piecewise-analytic functions, and an optional closed-form transform.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DivergentTransform, DomainError, TailModelUnusable
from .phi import PhiTable, indicator_g
from .quadrature import (
    DEFAULT_BUDGET,
    MAX_CUTOFF,
    QuadratureOutcome,
    TailModel,
    integrate_finite,
    integrate_semi_infinite,
    integrate_vertical_line,
)
from .report import IdentityReport, build_report
from .zeta_core import as_point, constant_A, eta_array

# panels per unit of budget: GK15 on every integer panel plus a few splits
_EVALS_PER_PANEL = 40


@dataclass(frozen=True)
class MellinFunction:
    """A function on [1, inf) prepared for Mellin-type integration.

    ``tail(s, X)`` returns ``(estimate, bound)`` for int_X^inf f x^{-s-1};
    ``breakpoints(a, b)`` returns panel edges inside [a, b];
    ``transform(s)`` is an exact m[f](s) if one is known.
    """

    evaluator: Callable
    growth_hint: float = 0.0
    tail: Callable | None = None
    breakpoints: Callable | None = None
    transform: Callable | None = None
    name: str = "f"
    x_max: float = MAX_CUTOFF

    def __call__(self, x):
        return self.evaluator(x)


def integer_breakpoints(a, b):
    return np.arange(math.ceil(a), math.floor(b) + 1, dtype=float)


# ---------------------------------------------------------------------------
# closed forms


def mellin_of_indicator_closed_form(s):
    """m[g](s) = (1 - 2^{1-s}) zeta(s) / s, with log 2 at s = 1."""
    arr = np.asarray(s, dtype=complex)
    out = eta_array(arr.ravel()) / arr.ravel()
    out = out.reshape(arr.shape)
    return complex(out) if out.ndim == 0 else out


def _indicator_tail(s, X):
    # exact piece up to the next even integer E, then the half-density estimate
    E = 2.0 * math.ceil(X / 2.0)
    lo = max(X, E - 1.0)
    piece = (lo ** -s - E ** -s) / s if E > lo else 0.0
    est = E ** -s / (2.0 * s)
    sig = s.real
    bound = 0.5 * abs(s + 1) * (E ** (-sig - 2) + E ** (-sig - 1) / (2.0 * (sig + 1.0)))
    return piece + est, bound


def indicator_function() -> MellinFunction:
    return MellinFunction(
        evaluator=indicator_g,
        growth_hint=0.0,
        tail=_indicator_tail,
        breakpoints=integer_breakpoints,
        transform=mellin_of_indicator_closed_form,
        name="g",
    )


_REMAINDER_C = 0.5
_REMAINDER_THETA = 0.2


def _phi_tail(s, X):
    # int_X^inf (log(x)/4 + A) x^{-s-1} dx in closed form; the remainder
    # |phi_1| <= c x^-theta gives the bound
    A = constant_A()
    L = math.log(X)
    est = (0.25 * (L / s + 1.0 / s ** 2) + A / s) * X ** -s
    e = _REMAINDER_THETA + s.real
    if e <= 0:
        raise TailModelUnusable("the phi tail bound needs Re s > -0.2")
    return est, _REMAINDER_C * X ** -e / e


def _remainder_tail(s, X):
    e = _REMAINDER_THETA + s.real
    if e <= 0:
        raise TailModelUnusable("the phi_1 tail bound needs Re s > -0.2")
    return 0.0, _REMAINDER_C * X ** -e / e


def phi_function(x_max=1.0e6, table: PhiTable | None = None) -> MellinFunction:
    """phi backed by a :class:`PhiTable` (exact up to rounding on [1, x_max])."""
    table = table if table is not None else PhiTable(x_max)
    return MellinFunction(
        evaluator=table,
        growth_hint=0.0,
        tail=_phi_tail,
        breakpoints=integer_breakpoints,
        name="phi",
        x_max=table.x_max,
    )


def phi_remainder_function(x_max=1.0e6, table: PhiTable | None = None) -> MellinFunction:
    table = table if table is not None else PhiTable(x_max)
    A = constant_A()

    def ev(x):
        return table(x) - 0.25 * np.log(x) - A

    return MellinFunction(
        evaluator=ev,
        growth_hint=-_REMAINDER_THETA,
        tail=_remainder_tail,
        breakpoints=integer_breakpoints,
        name="phi_1",
        x_max=table.x_max,
    )


def power_function(p: float) -> MellinFunction:
    """x^{-p}; m[x^-p](s) = 1/(s + p)."""

    def tail(s, X):
        return X ** (-s - p) / (s + p), 0.0

    return MellinFunction(
        evaluator=lambda x: np.asarray(x, dtype=float) ** -p,
        growth_hint=-p,
        tail=tail,
        transform=lambda s: 1.0 / (np.asarray(s, dtype=complex) + p),
        name=f"x^-{p:g}",
    )


# ---------------------------------------------------------------------------
# forward transform


def _envelope_tail(f, s, X):
    # |f| <= x^alpha log x, so |tail| <= X^{alpha-sigma}(log X/d + 1/d^2), d = sigma - alpha
    d = s.real - f.growth_hint
    return 0.0, X ** -d * (max(math.log(X), 1.0) / d + 1.0 / d ** 2)


def _pick_cutoff(f, s, tol):
    X = 16.0
    while X <= min(f.x_max, MAX_CUTOFF):
        _, bound = f.tail(s, X) if f.tail is not None else _envelope_tail(f, s, X)
        if bound <= tol / 2:
            return X
        X *= 2.0
    raise TailModelUnusable(
        f"no cutoff below {min(f.x_max, MAX_CUTOFF):g} brings the tail of m[{f.name}]({s}) under {tol:g}"
    )


def mellin_transform(f: MellinFunction, s, tol: float = 1e-10, cutoff=None,
                     max_evaluations=None) -> QuadratureOutcome:
    """m[f](s) with error estimate and tail bound."""
    s = as_point(s)
    if not s.real > f.growth_hint:
        raise DivergentTransform(
            f"m[{f.name}](s) needs Re s > {f.growth_hint:g}, got {s.real:g}"
        )
    X = _pick_cutoff(f, s, tol) if cutoff is None else float(cutoff)
    if X > f.x_max:
        raise DomainError(f"cutoff {X:g} beyond the range of {f.name} ({f.x_max:g})")
    if f.tail is not None:
        est, bound = f.tail(s, X)
    else:
        est, bound = _envelope_tail(f, s, X)

    def h(x):
        return f(x) * np.exp(-(s + 1.0) * np.log(x))

    if f.breakpoints is not None:
        bp = f.breakpoints(1.0, X)
    else:
        bp = 2.0 ** np.arange(1, math.ceil(math.log2(X)) + 1)
    n_panels = bp.size + 1
    budget = max(DEFAULT_BUDGET, _EVALS_PER_PANEL * n_panels) if max_evaluations is None else max_evaluations
    body = integrate_finite(h, 1.0, X, tol / 2, breakpoints=bp, max_evaluations=budget)
    return QuadratureOutcome(
        value=complex(body.value) + est,
        error_estimate=body.error_estimate,
        tail_bound=float(bound),
        evaluations=body.evaluations,
        cutoff=X,
    )


def modified_mellin(f: MellinFunction, s, tol: float = 1e-10, cutoff=None) -> complex:
    return complex(mellin_transform(f, s, tol, cutoff).value)


# ---------------------------------------------------------------------------
# inversion, Parseval and the square convolution


def phi_transform_closed_form(s):
    """(eta(s) / s)^2, the transform of phi."""
    return mellin_of_indicator_closed_form(s) ** 2


def inverse_mellin_phi_outcome(x: float, c: float = 1.0, T: float = 1.0e3,
                               tol: float = 1e-6) -> QuadratureOutcome:
    """(1/2 pi i) int_{c-iT}^{c+iT} eta(s)^2 x^s / s^2 ds."""
    if not x >= 1.0:
        raise DomainError("inverse_mellin_phi needs x >= 1")
    if not c > 0:
        raise DomainError("the inversion line must have c > 0")
    log_x = math.log(x)

    def F(s):
        return phi_transform_closed_form(s) * np.exp(s * log_x)

    return integrate_vertical_line(
        F, c, T, tol, conjugate_symmetric=True,
        max_evaluations=max(DEFAULT_BUDGET, int(_EVALS_PER_PANEL * T)),
    )


def inverse_mellin_phi(x: float, c: float = 1.0, T: float = 1.0e3, tol: float = 1e-6) -> float:
    """Truncated inverse transform of (eta(s)/s)^2 at x; tends to phi(x) as T grows.

    At the jump points of x phi'(x) (integers) the truncation error decays
    like 1/T rather than faster.
    """
    return float(inverse_mellin_phi_outcome(x, c, T, tol).value)


def _product(f: MellinFunction, g: MellinFunction) -> MellinFunction:
    def bp(a, b):
        parts = [h.breakpoints(a, b) for h in (f, g) if h.breakpoints is not None]
        return np.unique(np.concatenate(parts)) if parts else None

    return MellinFunction(
        evaluator=lambda x: f(x) * g(x),
        growth_hint=f.growth_hint + g.growth_hint,
        breakpoints=bp if (f.breakpoints or g.breakpoints) else None,
        name=f"{f.name}*{g.name}",
        x_max=min(f.x_max, g.x_max),
    )


def parseval_pair(f: MellinFunction, g: MellinFunction, sigma: float, T: float = 1.0e4,
                  tol: float = 1e-4, *, product: MellinFunction | None = None,
                  tail: TailModel | None = None, cutoff=None) -> IdentityReport:
    """int_1^inf f g x^{-1-2 sigma} dx against (1/2 pi) int |m[f] m[g]| on Re s = sigma.

    For real f and g the line integrand F(s) conj(G(s)) is conjugate-even, so
    only t in [0, T] is integrated.  ``tail`` models the line integrand beyond
    T (default: plain truncation).  Both transforms need closed forms.
    """
    start = time.perf_counter()
    if f.transform is None or g.transform is None:
        raise ValueError("parseval_pair needs closed-form transforms for f and g")
    h = product if product is not None else _product(f, g)
    quad_tol = max(1e-3 * tol, 1e-14)
    left = mellin_transform(h, 2.0 * sigma, quad_tol, cutoff)
    lhs = float(np.real(left.value))

    def line(t):
        s = sigma + 1j * t
        return np.real(f.transform(s) * np.conj(g.transform(s)))

    model = tail if tail is not None else TailModel.none()
    right = integrate_semi_infinite(
        line, 0.0, model, math.pi * quad_tol * max(abs(lhs), 1e-12),
        cutoff=T, max_panel_width=1.0,
        max_evaluations=max(DEFAULT_BUDGET, int(_EVALS_PER_PANEL * T)),
    )
    rhs = float(np.real(right.value)) / math.pi
    return build_report(
        "parseval",
        {"sigma": sigma, "T": T, "f": f.name, "g": g.name},
        lhs, rhs, tol,
        tail_bound=left.tail_bound + right.tail_bound / math.pi,
        elapsed_ms=1e3 * (time.perf_counter() - start),
    )


def mellin_square_convolution(f: Callable, a: float, b: float, s, tol: float = 1e-6) -> IdentityReport:
    """(int_a^b f(x) x^{-s} dx)^2 against int_{a^2}^{b^2} X^{-s} (f*f)(X) dX.

    The inner convolution int f(Y) f(X/Y) dY/Y runs over
    max(a, X/b) <= Y <= min(b, X/a); the outer integral is split at ab where
    the inner limits change form.  ``f`` is vectorised.
    """
    start = time.perf_counter()
    s = as_point(s)
    if not (0 < a < b):
        raise DomainError("mellin_square_convolution needs 0 < a < b")
    if not math.isfinite(b):
        raise DomainError("an infinite upper limit is not supported")

    def fv(x):
        return np.broadcast_to(np.asarray(f(x)), np.shape(x))

    def single(x):
        return fv(x) * np.exp(-s * np.log(x))

    rough = integrate_finite(single, a, b, 1e-6 * (b - a), max_evaluations=200_000)
    scale = abs(rough.value) or 1e-300
    first = integrate_finite(single, a, b, 1e-13 * scale, max_evaluations=200_000)
    probe = abs(first.value) or 1.0
    lhs = complex(first.value) ** 2
    outer_tol = max(1e-3 * tol, 1e-13) * probe * probe
    inner_tol = outer_tol / (10.0 * (b * b - a * a))

    def inner(X):
        lo, hi = max(a, X / b), min(b, X / a)
        if hi <= lo:
            return 0.0
        out = integrate_finite(lambda y: fv(y) * fv(X / y) / y, lo, hi, inner_tol,
                               max_evaluations=200_000)
        return out.value

    def outer(X):
        X = np.asarray(X, dtype=float)
        vals = np.array([inner(float(v)) for v in X], dtype=complex)
        return vals * np.exp(-s * np.log(X))

    ab = a * b
    right = integrate_finite(outer, a * a, ab, outer_tol / 2, max_evaluations=200_000)
    right2 = integrate_finite(outer, ab, b * b, outer_tol / 2, max_evaluations=200_000)
    rhs = complex(right.value) + complex(right2.value)
    return build_report(
        "lemma10",
        {"a": a, "b": b, "s": s},
        lhs, rhs, tol,
        elapsed_ms=1e3 * (time.perf_counter() - start),
    )


def log_measure_fold(h: Callable, x: float, tol: float = 1e-12, breakpoints=None) -> tuple[float, float]:
    """int_1^x h(u) du/u directly and as 2 int_sqrt(x)^x h(u) du/u.

    The two agree when h(u) = h(x/u).  Pass the jump points of a piecewise h
    as ``breakpoints``.
    """
    full = integrate_finite(lambda u: h(u) / u, 1.0, x, tol, breakpoints=breakpoints)
    half = integrate_finite(lambda u: h(u) / u, math.sqrt(x), x, tol / 2, breakpoints=breakpoints)
    return float(np.real(full.value)), 2.0 * float(np.real(half.value))


__all__ = [
    "MellinFunction",
    "indicator_function",
    "inverse_mellin_phi",
    "inverse_mellin_phi_outcome",
    "log_measure_fold",
    "mellin_of_indicator_closed_form",
    "mellin_square_convolution",
    "mellin_transform",
    "modified_mellin",
    "parseval_pair",
    "phi_function",
    "phi_remainder_function",
    "phi_transform_closed_form",
    "power_function",
]
