"""Adaptive Gauss-Kronrod integration with explicit tail accounting.

Integrands are called with 1-d numpy arrays of abscissae and must return an
array of the same length (real or complex).  Pass ``vectorized=False`` for a
scalar callable.  All panel results are reduced with ``math.fsum`` in
left-to-right panel order, so outcomes are bit-stable across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NoConvergence, TailModelUnusable, ZetaIdError
from .zeta_core import zeta

EULER_GAMMA = 0.5772156649015329
MAX_CUTOFF = 1.0e8
DEFAULT_BUDGET = 1_000_000

# 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
])
_WGK_CENTRE = 0.209482141084727828012999174891714
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
])
_WG_CENTRE = 0.417959183673469387755102040816327

NODES = np.concatenate([-_XGK, [0.0], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK, [_WGK_CENTRE], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG
GAUSS_WEIGHTS[[13, 11, 9]] = _WG
GAUSS_WEIGHTS[7] = _WG_CENTRE

_CHUNK_NODES = 1 << 18


@dataclass(frozen=True)
class QuadratureOutcome:
    value: complex | float
    error_estimate: float
    tail_bound: float = 0.0
    evaluations: int = 0
    cutoff: float | None = None

    @property
    def total_uncertainty(self) -> float:
        return self.error_estimate + self.tail_bound


def _fsum(values):
    values = np.asarray(values)
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real), math.fsum(values.imag))
    return math.fsum(values)


def _as_vectorized(f, vectorized):
    if vectorized:
        return f

    def wrapped(x):
        return np.array([f(float(v)) for v in x])

    return wrapped


def _evaluate(f, lo, hi):
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    kron = None
    gauss = None
    step = max(1, _CHUNK_NODES // 15)
    for i in range(0, lo.size, step):
        x = centre[i:i + step, None] + half[i:i + step, None] * NODES
        y = np.asarray(f(x.ravel()))
        if y.shape != (x.size,):
            raise ZetaIdError("integrand must return one value per abscissa")
        if not np.all(np.isfinite(y)):
            raise ZetaIdError("integrand returned non-finite values")
        y = y.reshape(x.shape)
        k = half[i:i + step] * (y @ KRONROD_WEIGHTS)
        g = half[i:i + step] * (y @ GAUSS_WEIGHTS)
        if kron is None:
            dtype = np.result_type(k.dtype, float)
            kron = np.empty(lo.size, dtype=dtype)
            gauss = np.empty(lo.size, dtype=dtype)
        elif np.iscomplexobj(k) and not np.iscomplexobj(kron):
            kron = kron.astype(complex)
            gauss = gauss.astype(complex)
        kron[i:i + step] = k
        gauss[i:i + step] = g
    return kron, np.abs(kron - gauss)


def initial_edges(a, b, breakpoints=None, max_panel_width=None):
    """Sorted panel edges on [a, b] honouring breakpoints and a width cap."""
    edges = [np.array([a, b], dtype=float)]
    if breakpoints is not None:
        bp = np.asarray(breakpoints, dtype=float)
        edges.append(bp[(bp > a) & (bp < b)])
    edges = np.unique(np.concatenate(edges))
    if max_panel_width is not None:
        widths = np.diff(edges)
        counts = np.maximum(1, np.ceil(widths / max_panel_width).astype(np.int64))
        if np.any(counts > 1):
            starts = np.repeat(edges[:-1], counts)
            steps = np.repeat(widths / counts, counts)
            offsets = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
            edges = np.append(starts + offsets * steps, b)
    return edges


def integrate_finite(
    f: Callable,
    a: float,
    b: float,
    tol: float,
    *,
    breakpoints=None,
    max_panel_width: float | None = None,
    max_evaluations: int = DEFAULT_BUDGET,
    vectorized: bool = True,
) -> QuadratureOutcome:
    """Adaptive GK15 on [a, b] until the summed |K15 - G7| is at most ``tol``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not a <= b:
        raise ValueError("integrate_finite needs a <= b")
    if a == b:
        return QuadratureOutcome(0.0, 0.0, 0.0, 0)
    f = _as_vectorized(f, vectorized)

    edges = initial_edges(a, b, breakpoints, max_panel_width)
    lo, hi = edges[:-1], edges[1:]
    if 15 * lo.size > max_evaluations:
        raise NoConvergence(
            f"{lo.size} initial panels exceed the budget of {max_evaluations} evaluations"
        )
    kron, err = _evaluate(f, lo, hi)
    evaluations = 15 * lo.size
    span = b - a

    while True:
        total_err = math.fsum(err)
        if total_err <= tol:
            break
        width = hi - lo
        mid = 0.5 * (lo + hi)
        splittable = (mid > lo) & (mid < hi) & (width > 4e-15 * np.maximum(1.0, np.abs(mid)))
        split = (err > tol * width / span) & splittable
        if not np.any(split):
            candidates = np.where(splittable, err, -1.0)
            worst = int(np.argmax(candidates))
            if candidates[worst] <= 0:
                raise NoConvergence(
                    f"panels cannot be refined further; error estimate {total_err:.3g} > tol {tol:.3g}",
                    partial=QuadratureOutcome(_fsum(kron), total_err, 0.0, evaluations),
                )
            split[worst] = True
        n_new = 2 * int(split.sum())
        if evaluations + 15 * n_new > max_evaluations:
            raise NoConvergence(
                f"evaluation budget {max_evaluations} exhausted; error estimate {total_err:.3g} > tol {tol:.3g}",
                partial=QuadratureOutcome(_fsum(kron), total_err, 0.0, evaluations),
            )
        new_lo = np.concatenate([lo[split], mid[split]])
        new_hi = np.concatenate([mid[split], hi[split]])
        new_k, new_e = _evaluate(f, new_lo, new_hi)
        evaluations += 15 * n_new
        keep = ~split
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        kron = np.concatenate([kron[keep], new_k])
        err = np.concatenate([err[keep], new_e])
        order = np.argsort(lo, kind="stable")
        lo, hi, kron, err = lo[order], hi[order], kron[order], err[order]

    return QuadratureOutcome(_fsum(kron), math.fsum(err), 0.0, evaluations)


# ---------------------------------------------------------------------------
# tail models


def eta_mean_square_density(sigma: float, t):
    """Model for the local mean of |(1 - 2^{1-s}) zeta(s)|^2 at height t.

    Diagonal of the mean-value theorem for the alternating Dirichlet series,
    summed to an effective length 4 e^gamma t / 2 pi; on sigma = 1/2 this is
    log(t / 2 pi) + 2 gamma + 2 log 2.
    """
    t = np.maximum(np.asarray(t, dtype=float), 1.0)
    n_eff = np.maximum(4.0 * math.exp(EULER_GAMMA) * t / (2.0 * math.pi), 1.0)
    if abs(sigma - 0.5) < 1e-9:
        return np.log(n_eff) + EULER_GAMMA
    z2 = zeta(2.0 * sigma).real
    return np.maximum(z2 - n_eff ** (1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0), 1e-3)


_KINDS = ("none", "inverse_power", "eta_mean_square", "phi_square_closed_form", "alternating")


@dataclass(frozen=True)
class TailModel:
    """What is known about an integrand beyond the truncation point X.

    * ``none``: nothing beyond X (caller supplies X).
    * ``inverse_power`` (p, C, A, q): f = A x^-p + r with |r| <= C x^-q.
      The leading part is added in closed form, the residual is the bound.
    * ``eta_mean_square`` (sigma, k, safety): f = |eta(sigma+it)|^{2k}/|s|^{2k};
      the mean-value model is added and ``safety`` times it reported.
    * ``phi_square_closed_form`` (c, theta): f = phi(x)^2 / x^2 with
      |phi_1(x)| <= c x^-theta.
    * ``alternating`` (half_period, terms): f changes sign every half period;
      the tail is summed from ``terms`` half-period integrals by repeated
      averaging of the partial sums.
    """

    kind: str
    parameters: tuple = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown tail model {self.kind!r}")
        object.__setattr__(self, "parameters", tuple(float(p) for p in self.parameters))
        if self.kind == "inverse_power":
            p, _, _, q = self._power_params()
            if not (p > 1 and q > 1):
                raise ValueError("inverse_power needs exponents > 1")
        if self.kind == "alternating" and not self.parameters[0] > 0:
            raise ValueError("alternating needs a positive half period")

    @classmethod
    def none(cls):
        return cls("none")

    @classmethod
    def inverse_power(cls, p, envelope=1.0, leading=0.0, residual_power=None):
        q = p if residual_power is None else residual_power
        return cls("inverse_power", (p, envelope, leading, q))

    @classmethod
    def eta_mean_square(cls, sigma, moment=1, safety=3.0):
        return cls("eta_mean_square", (sigma, moment, safety))

    @classmethod
    def phi_square_closed_form(cls, c=0.5, theta=0.2):
        return cls("phi_square_closed_form", (c, theta))

    @classmethod
    def alternating(cls, half_period, terms=16):
        return cls("alternating", (half_period, terms))

    def _power_params(self):
        p = self.parameters[0]
        C = self.parameters[1] if len(self.parameters) > 1 else 1.0
        A = self.parameters[2] if len(self.parameters) > 2 else 0.0
        q = self.parameters[3] if len(self.parameters) > 3 else p
        return p, C, A, q

    # each _tail_* returns (estimate, bound, evaluations) for the tail beyond X

    def _tail_inverse_power(self, X):
        p, C, A, q = self._power_params()
        return A * X ** (1 - p) / (p - 1), C * X ** (1 - q) / (q - 1), 0

    def _tail_eta(self, X):
        sigma, k, safety = self.parameters
        k = int(k)
        fact = math.factorial(k)

        # t = X / u maps [X, inf) to (0, 1]
        def g(u):
            t = X / u
            m = eta_mean_square_density(sigma, t)
            return fact * m ** k * X * u ** (2 * k - 2) / (sigma * sigma * u * u + X * X) ** k

        out = integrate_finite(g, 0.0, 1.0, 1e-9 / X, max_evaluations=200_000)
        est = float(out.value)
        return est, safety * est + out.error_estimate, out.evaluations

    def _tail_phi_square(self, X):
        from .zeta_core import constant_A

        c, theta = self.parameters
        A = constant_A()
        L = math.log(X)
        est = ((L * L + 2 * L + 2) / 16 + 0.5 * A * (L + 1) + A * A) / X
        e = 1.0 + theta
        xp = X ** -e
        bound = c * (0.5 * (xp * L / e + xp / (e * e)) + (2 * A + c) * xp / e)
        return est, bound, 0

    def _tail_alternating(self, f, X, tol):
        half, terms = self.parameters[0], int(self.parameters[1])
        chunks = []
        evals = 0
        for j in range(terms):
            out = integrate_finite(f, X + j * half, X + (j + 1) * half, tol / (10 * terms))
            chunks.append(out.value)
            evals += out.evaluations
        level = np.cumsum(np.asarray(chunks))
        previous = level[0]
        while level.size > 1:
            previous = level[0]
            level = 0.5 * (level[:-1] + level[1:])
        est = level[0]
        bound = 2.0 * abs(est - previous) + tol / 10
        return est, bound, evals

    def resolve(self, f, a, tol, cutoff=None):
        """Pick the truncation point and evaluate the tail: (X, estimate, bound, evals)."""
        kind = self.kind
        if cutoff is not None:
            X = float(cutoff)
            if X < a:
                raise ValueError("cutoff must not precede the lower limit")
            if X > MAX_CUTOFF:
                raise TailModelUnusable(f"cutoff {X:g} exceeds {MAX_CUTOFF:g}")
            return (X,) + self._tail_at(f, X, tol)
        if kind == "none":
            raise TailModelUnusable("tail model 'none' needs an explicit cutoff")
        if kind == "inverse_power":
            p, C, A, q = self._power_params()
            X = a
            if C > 0:
                X = max(a, (2.0 * C / ((q - 1) * tol)) ** (1.0 / (q - 1)))
            if X <= 0:
                X = 1.0
            if X > MAX_CUTOFF:
                raise TailModelUnusable(
                    f"inverse_power tail needs X = {X:.3g} > {MAX_CUTOFF:g} for tol {tol:g}"
                )
            return (X,) + self._tail_at(f, X, tol)
        # geometric search for the remaining kinds
        step = self.parameters[0] * 8 if kind == "alternating" else max(1.0, abs(a))
        X = a + step
        evals = 0
        while X <= MAX_CUTOFF:
            est, bound, n = self._tail_at(f, X, tol)
            evals += n
            if bound <= tol / 2:
                return X, est, bound, evals
            X = a + 2.0 * (X - a)
        raise TailModelUnusable(f"{kind} tail cannot reach tol {tol:g} below X = {MAX_CUTOFF:g}")

    def _tail_at(self, f, X, tol):
        if self.kind == "none":
            return 0.0, 0.0, 0
        if self.kind == "inverse_power":
            return self._tail_inverse_power(X)
        if self.kind == "eta_mean_square":
            return self._tail_eta(X)
        if self.kind == "phi_square_closed_form":
            return self._tail_phi_square(X)
        if f is None:
            raise ValueError("the alternating tail needs the integrand")
        return self._tail_alternating(f, X, tol)


def integrate_semi_infinite(
    f: Callable,
    a: float,
    tail: TailModel,
    tol: float,
    *,
    cutoff: float | None = None,
    breakpoints=None,
    max_panel_width: float | None = None,
    max_evaluations: int = DEFAULT_BUDGET,
    vectorized: bool = True,
) -> QuadratureOutcome:
    """int_a^inf f: adaptive on [a, X] plus the tail model beyond X.

    Without ``cutoff`` the model picks X so that its tail bound is at most
    tol/2; the finite part then gets the other half of the budget.
    """
    f_vec = _as_vectorized(f, vectorized)
    X, est, bound, tail_evals = tail.resolve(f_vec, a, tol, cutoff)
    body = integrate_finite(
        f_vec, a, X, tol / 2,
        breakpoints=breakpoints,
        max_panel_width=max_panel_width,
        max_evaluations=max_evaluations,
    )
    return QuadratureOutcome(
        value=body.value + est,
        error_estimate=body.error_estimate,
        tail_bound=float(bound),
        evaluations=body.evaluations + tail_evals,
        cutoff=X,
    )


def integrate_vertical_line(
    F: Callable,
    sigma: float,
    T: float,
    tol: float,
    *,
    conjugate_symmetric: bool = False,
    max_panel_width: float = 1.0,
    max_evaluations: int = DEFAULT_BUDGET,
) -> QuadratureOutcome:
    """(1/2 pi) int_{-T}^{T} F(sigma + it) dt, i.e. (1/2 pi i) int F ds on Re s = sigma.

    With ``conjugate_symmetric`` (F(conj s) = conj F(s)) only [0, T] is
    integrated and the result is real.
    """
    if not T >= 0:
        raise ValueError("T must be non-negative")

    def g(t):
        return F(sigma + 1j * t)

    if conjugate_symmetric:
        out = integrate_finite(
            lambda t: np.real(g(t)), 0.0, T, math.pi * tol,
            max_panel_width=max_panel_width, max_evaluations=max_evaluations,
        )
        return QuadratureOutcome(out.value / math.pi, out.error_estimate / math.pi, 0.0, out.evaluations, T)
    out = integrate_finite(
        g, -T, T, 2 * math.pi * tol,
        max_panel_width=max_panel_width, max_evaluations=max_evaluations,
    )
    scale = 1.0 / (2 * math.pi)
    return QuadratureOutcome(out.value * scale, out.error_estimate * scale, 0.0, out.evaluations, T)
