"""The multiplicative self-convolution phi(x) of the odd-interval indicator.

    phi(x) = sum_{m,n} int_1^x chi_[2m-1,2m)(x/u) chi_[2n-1,2n)(u) du/u

Three independent evaluation routes live here:

* :func:`phi_pieces` enumerates the (m, n) intervals directly and sums
  ``log(upper/lower)``;
* :func:`phi_exact` folds the integral at sqrt(x) (the integrand is symmetric
  under u -> x/u) and uses a closed form for the cumulative integral of the
  indicator, costing O(sqrt x) per point;
* :class:`PhiTable` tabulates phi at the integers from the jump structure of
  x phi'(x), after which phi is ``a_k + b_k log x`` on each [k, k+1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .zeta_core import constant_A

X_MAX = 1.0e8

_HALF_LOG_PI = 0.5 * math.log(math.pi)


@dataclass(frozen=True)
class IntervalPiece:
    m: int
    n: int
    lower: float
    upper: float
    contribution: float


@dataclass(frozen=True)
class PhiEvaluation:
    x: float
    exact: float
    asymptotic: float
    remainder: float


def _check_x(x):
    if not x >= 1.0:
        raise DomainError(f"phi is defined for x >= 1, got {x!r}")
    if x > X_MAX:
        raise DomainError(f"x = {x:g} exceeds the supported maximum {X_MAX:g}")


def indicator_g(x):
    """1 on the odd unit intervals [2n-1, 2n), else 0.  Works on arrays."""
    x = np.asarray(x, dtype=float)
    out = (np.floor(x) % 2 == 1).astype(float)
    return float(out) if out.ndim == 0 else out


def phi_pieces(x: float) -> list[IntervalPiece]:
    """All (m, n) with |[2n-1, 2n] & [x/2m, x/(2m-1)] & [1, x]| > 0, sorted by (n, m)."""
    _check_x(x)
    pieces = []
    n_max = math.ceil((x + 1) / 2)
    for n in range(1, n_max + 1):
        lo_n, hi_n = 2 * n - 1, 2 * n
        if lo_n >= x:
            break
        m_lo = max(1, math.floor(x / (4 * n)))
        m_hi = math.ceil(x / (4 * n - 4)) + 1 if n > 1 else math.ceil((x + 1) / 2)
        for m in range(m_lo, m_hi + 1):
            lower = max(lo_n, x / (2 * m), 1.0)
            upper = min(hi_n, x / (2 * m - 1), x)
            if upper > lower:
                pieces.append(IntervalPiece(m, n, lower, upper, math.log(upper / lower)))
    return pieces


def phi_from_pieces(x: float) -> float:
    return math.fsum(p.contribution for p in phi_pieces(x))


# W(k) = sum_{n<k} log(2n/(2n-1)) = log(sqrt(pi) Gamma(k) / Gamma(k - 1/2)).
_W_DIRECT = 64
_W_TABLE = np.concatenate(
    [[0.0, 0.0], np.cumsum([math.log(2 * n / (2 * n - 1)) for n in range(1, _W_DIRECT)])]
)
# Stirling coefficients B_2j / (2j (2j-1)), j = 1..6
_STIRLING = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360)


def _wallis_log(k):
    """W(k) for integer arrays k >= 1, accurate to a few ulps in absolute terms."""
    k = np.asarray(k, dtype=np.int64)
    out = np.empty(k.shape, dtype=float)
    small = k < _W_DIRECT
    out[small] = _W_TABLE[k[small]]
    big = ~small
    if np.any(big):
        kf = k[big].astype(float)
        # log Gamma(k) - log Gamma(k - 1/2) via Stirling, with the O(1) part
        # rearranged through log1p to avoid cancellation
        d = 0.5 * np.log(kf) - (kf - 1.0) * np.log1p(-0.5 / kf) - 0.5
        kh = kf - 0.5
        for j, c in enumerate(_STIRLING, start=1):
            p = 2 * j - 1
            d += c * (kf ** -p - kh ** -p)
        out[big] = _HALF_LOG_PI + d
    return out


def cumulative_indicator_log(y):
    """int_1^y g(u) du/u for y >= 1 (arrays allowed)."""
    y = np.asarray(y, dtype=float)
    k = np.floor((y + 1.0) / 2.0).astype(np.int64)  # y in [2k-1, 2k+1)
    return _wallis_log(k) + np.log(np.minimum(y, 2.0 * k) / (2.0 * k - 1.0))


def phi_exact(x):
    """phi(x) through the sqrt(x) fold; scalar or array input."""
    arr = np.asarray(x, dtype=float)
    if arr.size and (np.any(~(arr >= 1.0)) or np.any(arr > X_MAX)):
        raise DomainError(f"phi is defined for 1 <= x <= {X_MAX:g}")
    flat = arr.ravel()
    out = np.zeros(flat.shape)
    if flat.size:
        root = np.sqrt(flat)
        m_top = int(math.floor((root.max() + 1) / 2))
        for m in range(1, m_top + 1):
            live = 2 * m - 1 <= root
            if not np.any(live):
                break
            xs = flat[live]
            r = root[live]
            hi = np.minimum(xs, xs / (2 * m - 1))
            lo = np.maximum(r, xs / (2 * m))
            gain = cumulative_indicator_log(hi) - cumulative_indicator_log(lo)
            out[live] += np.where(hi > lo, gain, 0.0)
        out *= 2.0
    out = np.clip(out, 0.0, None)
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def phi_asymptotic(x):
    x = np.asarray(x, dtype=float)
    if x.size and np.any(~(x >= 1.0)):
        raise DomainError("phi_asymptotic needs x >= 1")
    out = 0.25 * np.log(x) + constant_A()
    return float(out) if out.ndim == 0 else out


def phi_remainder(x):
    """phi_1(x) = phi(x) - log(x)/4 - A."""
    return phi_exact(x) - phi_asymptotic(x)


def evaluate_phi(x: float) -> PhiEvaluation:
    _check_x(x)
    exact = phi_exact(x)
    asym = phi_asymptotic(x)
    return PhiEvaluation(x=float(x), exact=exact, asymptotic=asym, remainder=exact - asym)


class PhiTable:
    """phi on [1, x_max] in O(x_max) memory, O(1) per evaluation.

    On (k, k+1) the quantity x phi'(x) = sum_c (-1)^{c-1} g(x/c) is an integer
    b_k, and b jumps at k by sum_{cj=k} (-1)^{c+j}.  Hence
    phi(x) = phi(k) + b_k log(x/k) with phi(1) = 0.
    """

    def __init__(self, x_max):
        _check_x(x_max)
        K = int(math.ceil(x_max))
        jumps = np.zeros(K + 2)
        for c in range(1, math.isqrt(K + 1) + 1):
            j = np.arange(c, (K + 1) // c + 1)
            sign = np.where((c + j) % 2 == 0, 1.0, -1.0)
            # ordered pairs (c, j) and (j, c) coincide when j = c
            np.add.at(jumps, c * j, 2.0 * sign)
            jumps[c * c] -= 1.0
        self.slopes = np.cumsum(jumps)  # slopes[k] holds b on (k, k+1)
        inc = self.slopes[1:K] * np.log1p(1.0 / np.arange(1, K))
        self.knots = np.concatenate([[0.0], np.cumsum(inc)])  # knots[k-1] = phi(k)
        self.x_max = float(K)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.size and (np.any(~(x >= 1.0)) or np.any(x > self.x_max)):
            raise DomainError(f"PhiTable covers [1, {self.x_max:g}]")
        k = np.minimum(np.floor(x).astype(np.int64), int(self.x_max) - 1)
        k = np.maximum(k, 1)
        out = self.knots[k - 1] + self.slopes[k] * np.log(x / k)
        return float(out) if out.ndim == 0 else out
