"""Riemann zeta, the alternating (eta) factor and the functional-equation factor.

Everything here works in binary64.  ``zeta_array`` is the workhorse: it runs
Euler-Maclaurin summation on whole arrays of arguments and, when many points
share a real part, evaluates the partial sums cluster-by-cluster from a small
set of Taylor moments instead of one complex exponential per (point, term).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ChiPole, PoleAtOne, UnsupportedRegion

LOG2 = math.log(2.0)
LOG_2PI = math.log(2.0 * math.pi)

SIGMA_MIN = -1.0
T_MAX = 1.0e5

_BINARY64_FLOOR = 2.0 ** -50


@dataclass(frozen=True)
class EvalSettings:
    """Accuracy request for zeta-side evaluations.

    ``target_rel_error`` below 2**-50 is clamped to 2**-50.  ``max_terms`` caps
    the Euler-Maclaurin cutoff; asking for a point that would need more terms
    raises :class:`UnsupportedRegion`.
    """

    target_rel_error: float = 1e-12
    max_terms: int = 200_000

    def __post_init__(self):
        if not 0.0 < self.target_rel_error < 1.0:
            raise ValueError("target_rel_error must lie in (0, 1)")
        if self.max_terms < 1:
            raise ValueError("max_terms must be positive")
        if self.target_rel_error < _BINARY64_FLOOR:
            object.__setattr__(self, "target_rel_error", _BINARY64_FLOOR)


DEFAULT_SETTINGS = EvalSettings()


def _even_bernoulli(kmax):
    """B_2, B_4, ..., B_{2 kmax} as exact fractions (Akiyama-Tanigawa)."""
    n_max = 2 * kmax
    a = [Fraction(0)] * (n_max + 1)
    out = []
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m >= 2 and m % 2 == 0:
            out.append(a[0])
    return out


# B_{2k} / (2k)! for k = 1..15, i.e. up to B_30.
_EM_COEFFS = np.array(
    [float(b / math.factorial(2 * k)) for k, b in enumerate(_even_bernoulli(15), start=1)]
)

# Taylor order used by the clustered partial sums; enough for |t - centre| <= 1/2
# and log N up to ~12 at full binary64 accuracy.
_TAYLOR_ORDER = 30
_CLUSTER_WIDTH = 1.0
_BLOCK_ELEMENTS = 4_000_000


def as_point(s) -> complex:
    """Coerce to ``complex`` and reject NaN/inf."""
    z = complex(s)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex point {z!r}")
    return z


def _as_points(s):
    arr = np.asarray(s, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite complex point")
    return arr


def _check_window(arr):
    if arr.size == 0:
        return
    if np.any(arr.real < SIGMA_MIN) or np.any(np.abs(arr.imag) > T_MAX):
        raise UnsupportedRegion(
            f"zeta is supported for Re s >= {SIGMA_MIN} and |Im s| <= {T_MAX:g}"
        )


def em_cutoff(t_abs: float) -> int:
    return max(20, math.ceil(1.3 * t_abs))


def _direct_partial_sums(s, N):
    logn = np.log(np.arange(1, N, dtype=float))
    out = np.empty(s.shape, dtype=complex)
    step = max(1, _BLOCK_ELEMENTS // max(1, N))
    for i in range(0, s.size, step):
        out[i:i + step] = np.exp(-np.outer(s[i:i + step], logn)).sum(axis=1)
    return out


def _clustered_partial_sums(sigma, t, N):
    """sum_{n<N} n^{-sigma-it} for sorted ``t`` via per-cluster Taylor moments.

    Points within ``_CLUSTER_WIDTH`` of a cluster start share one row of
    exponentials; each point then costs a Horner pass of length
    ``_TAYLOR_ORDER`` in (t - centre).
    """
    logn = np.log(np.arange(1, N, dtype=float))
    centre_log = 0.5 * logn[-1]
    powers = np.empty((N - 1, _TAYLOR_ORDER))
    powers[:, 0] = 1.0
    shifted = logn - centre_log
    for k in range(1, _TAYLOR_ORDER):
        powers[:, k] = powers[:, k - 1] * shifted / k

    starts = [0]
    anchor = t[0]
    for i in range(1, t.size):
        if t[i] - anchor > _CLUSTER_WIDTH:
            starts.append(i)
            anchor = t[i]
    starts = np.asarray(starts)
    ends = np.append(starts[1:], t.size)
    centres = 0.5 * (t[starts] + t[ends - 1])

    moments = np.empty((centres.size, _TAYLOR_ORDER), dtype=complex)
    step = max(1, _BLOCK_ELEMENTS // max(1, N))
    for i in range(0, centres.size, step):
        rows = np.exp(-np.outer(sigma + 1j * centres[i:i + step], logn))
        moments[i:i + step] = rows.real @ powers + 1j * (rows.imag @ powers)

    owner = np.repeat(np.arange(centres.size), ends - starts)
    delta = t - centres[owner]
    x = -1j * delta
    acc = moments[owner, _TAYLOR_ORDER - 1].copy()
    for k in range(_TAYLOR_ORDER - 2, -1, -1):
        acc = acc * x + moments[owner, k]
    return np.exp(-1j * delta * centre_log) * acc


def _em_sum(s, N, partial, target):
    logN = math.log(N)
    n_pow = np.exp(-s * logN)
    total = partial + n_pow * N / (s - 1.0) + 0.5 * n_pow
    factor = s * n_pow / N
    for k, coeff in enumerate(_EM_COEFFS, start=1):
        term = coeff * factor
        total = total + term
        if np.all(np.abs(term) <= target * np.abs(total)):
            break
        factor = factor * (s + 2 * k - 1) * (s + 2 * k) / (N * N)
    return total


def zeta_array(s, settings: EvalSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """Vectorised zeta(s) for an array of complex points."""
    arr = _as_points(s)
    shape = arr.shape
    flat = arr.ravel()
    if np.any(flat == 1.0):
        raise PoleAtOne("zeta has a pole at s = 1")
    _check_window(flat)
    out = np.empty(flat.shape, dtype=complex)
    if flat.size == 0:
        return out.reshape(shape)

    target = settings.target_rel_error
    order = np.lexsort((flat.imag, flat.real))
    sorted_s = flat[order]
    sigmas = sorted_s.real
    bounds = np.flatnonzero(np.diff(sigmas)) + 1
    groups = np.split(np.arange(sorted_s.size), bounds)

    for idx in groups:
        grp = sorted_s[idx]
        sigma = grp[0].real
        t = grp.imag
        # blocks of increasing |t| so the cutoff tracks the local height
        by_abs = np.argsort(np.abs(t), kind="stable")
        block = 4096
        for j in range(0, by_abs.size, block):
            sel = np.sort(by_abs[j:j + block])
            tt = t[sel]
            N = em_cutoff(float(np.max(np.abs(tt))))
            if N > settings.max_terms:
                raise UnsupportedRegion(
                    f"cutoff {N} exceeds max_terms={settings.max_terms}"
                )
            ss = grp[sel]
            if tt.size >= 32:
                partial = _clustered_partial_sums(sigma, tt, N)
            else:
                partial = _direct_partial_sums(ss, N)
            out[order[idx[sel]]] = _em_sum(ss, N, partial, target)
    return out.reshape(shape)


def zeta(s, settings: EvalSettings = DEFAULT_SETTINGS) -> complex:
    """Riemann zeta at one point (``s != 1``, Re s >= -1, |Im s| <= 1e5)."""
    z = as_point(s)
    return complex(zeta_array(np.array([z]), settings)[0])


def eta_factor(s):
    """1 - 2^{1-s}, elementwise."""
    return 1.0 - np.exp((1.0 - np.asarray(s, dtype=complex)) * LOG2)


def eta_array(s, settings: EvalSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """(1 - 2^{1-s}) zeta(s) elementwise, with the limit log 2 at s = 1."""
    arr = _as_points(s)
    at_one = arr == 1.0
    safe = np.where(at_one, 2.0 + 0j, arr)
    out = eta_factor(safe) * zeta_array(safe, settings)
    out[at_one] = LOG2
    return out


def eta(s, settings: EvalSettings = DEFAULT_SETTINGS) -> complex:
    z = as_point(s)
    return complex(eta_array(np.array([z]), settings)[0])


def eta_weight_sq(sigma, t):
    """|1 - 2^{1-sigma-it}|^2 = 1 - 2^{2-sigma} cos(t log 2) + 2^{2-2 sigma}."""
    sigma = np.asarray(sigma, dtype=float)
    t = np.asarray(t, dtype=float)
    w = 1.0 - 2.0 ** (2.0 - sigma) * np.cos(t * LOG2) + 2.0 ** (2.0 - 2.0 * sigma)
    w = np.maximum(w, 0.0)
    return float(w) if w.ndim == 0 else w


# Lanczos approximation, g = 7 with 9 coefficients.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * LOG_2PI


def _log_sin(z: complex) -> complex:
    """A branch of log sin(z) that stays finite for large |Im z|."""
    if z.imag < 0:
        return _log_sin(z.conjugate()).conjugate()
    # sin z = (i/2) e^{-iz} (1 - e^{2iz}); |e^{2iz}| <= 1 here
    return -1j * z + np.log(0.5j * (1.0 - np.exp(2j * z)))


def log_gamma(z) -> complex:
    """Principal-ish log Gamma(z); only exp(log_gamma) is meaningful."""
    z = complex(z)
    if z.real < 0.5:
        return math.log(math.pi) - _log_sin(math.pi * z) - log_gamma(1.0 - z)
    z -= 1.0
    x = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        x += c / (z + i)
    tt = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(tt) - tt + np.log(x)


def gamma(z) -> complex:
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise ValueError("Gamma has a pole at non-positive integers")
    return complex(np.exp(log_gamma(z)))


def chi_factor(s) -> complex:
    """chi(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s), so zeta(s) = chi(s) zeta(1-s)."""
    z = as_point(s)
    if z.imag == 0 and z.real >= 1 and z.real == math.floor(z.real):
        raise ChiPole(f"Gamma(1-s) has a pole at s = {z.real:g}")
    log_chi = (
        z * LOG2
        + (z - 1.0) * math.log(math.pi)
        + _log_sin(0.5 * math.pi * z)
        + log_gamma(1.0 - z)
    )
    return complex(np.exp(log_chi))


def zeta_derivative_at_zero() -> float:
    return -0.5 * LOG_2PI


_A = 0.5 * math.log(0.5 * math.pi)


def constant_A() -> float:
    """Constant term of the double-pole residue: -zeta'(0) - log 2 = log(pi/2)/2.

    Stored as log(pi/2)/2 directly; the two forms differ by at most one ulp.
    """
    return _A
