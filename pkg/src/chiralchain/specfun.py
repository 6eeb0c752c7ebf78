"""Self-contained special functions and a Cauchy principal-value integrator.

Provides the Bessel functions J0, J1, J2 and Y0, Y1, Y2, the Struve
functions H0 and H1, and a principal-value integrator for simple poles on
semi-infinite or finite intervals.  These are the primitives behind the
planar and free-space dipole-dipole kernels; scipy.special is deliberately
not used here so the kernel formulas and their integral-identity checks
rest on independent code paths.

Evaluation strategy
-------------------
* J_n, |x| < 6:   ascending power series (Abramowitz & Stegun 9.1.10).
* J_n, |x| >= 6:  Gauss-Legendre quadrature of Bessel's integral
                  J_n(x) = (1/pi) * int_0^pi cos(n*t - x*sin t) dt
                  (A&S 9.1.21).  The integrand is entire, so a fixed
                  high-order rule is accurate to near machine precision
                  over the supported range |x| <= 50.
* Y_n, 0 < x < 6: ascending series with harmonic-number coefficients
                  (A&S 9.1.11); Y2 by the standard recurrence.
* Y_n, x >= 6:    integral representation (DLMF 10.9.9)
                  Y_n(x) = (1/pi) int_0^pi sin(x sin t - n t) dt
                         - (1/pi) int_0^inf [e^{nt} + (-1)^n e^{-nt}]
                                  e^{-x sinh t} dt.
* H_n, |x| <= 20: ascending power series (A&S 12.1.5).
* H_n, |x| > 20:  H_n(x) = Y_n(x) + asymptotic series (DLMF 11.6.1),
                  truncated at its smallest term.

The straight power series cannot hold an absolute error of 1e-8 for the
Struve functions much past |x| ~ 20 in double precision (the alternating
terms peak near 1e19 at x = 50, so cancellation destroys the sum), which
is why the large-argument branch switches to the Y_n-anchored expansion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, NumericsError

_EULER_GAMMA = 0.5772156649015329

# Series / quadrature crossover for J and Y.  Kept low enough that the
# largest series term stays ~O(10), which bounds the cancellation error
# near 1e-14 absolute.
_SERIES_LIMIT = 6.0

# Struve series crossover; beyond this the alternating series loses more
# than 8 digits to cancellation.
_STRUVE_SERIES_LIMIT = 20.0

# Below this the Y_n values overflow double precision range; the caller
# is told the function diverged rather than handed an overflowed number.
_Y_DIVERGENCE_CUTOFF = 1e-305

# Fixed Gauss-Legendre rule used for the integral representations.  With
# at most ~16 oscillation periods across [0, pi] at x = 50, 120 nodes are
# far in the spectrally convergent regime.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(120)
# mapped once onto [0, pi]
_GL_T = 0.5 * math.pi * (_GL_NODES + 1.0)
_GL_W = 0.5 * math.pi * _GL_WEIGHTS
_GL_SIN_T = np.sin(_GL_T)


def _check_order(order: int, allowed: tuple[int, ...], name: str) -> None:
    if not isinstance(order, (int, np.integer)) or order not in allowed:
        raise DomainError(f"{name} supports orders {allowed}, got {order!r}")


def _bessel_j_series(order: int, x: float) -> float:
    # t_m = (-1)^m (x/2)^(2m+n) / (m! (m+n)!)
    half = 0.5 * x
    q = half * half
    term = half**order / math.factorial(order)
    terms = [term]
    m = 0
    while abs(term) > 1e-18 * (1.0 + abs(terms[0])) and m < 60:
        m += 1
        term *= -q / (m * (m + order))
        terms.append(term)
    return math.fsum(terms)


def _bessel_j_integral(order: int, x: float) -> float:
    vals = np.cos(order * _GL_T - x * _GL_SIN_T)
    return float(np.dot(_GL_W, vals)) / math.pi


def bessel_j(order: int, x: float) -> float:
    """Bessel function of the first kind, J_order(x), order in {0, 1, 2}.

    Absolute error below 1e-12 for |x| <= 50.
    """
    _check_order(order, (0, 1, 2), "bessel_j")
    if not math.isfinite(x):
        raise DomainError(f"bessel_j requires finite x, got {x!r}")
    sign = 1.0
    if x < 0.0:
        # J_n(-x) = (-1)^n J_n(x)
        x = -x
        sign = -1.0 if order % 2 else 1.0
    if x < _SERIES_LIMIT:
        return sign * _bessel_j_series(order, x)
    return sign * _bessel_j_integral(order, x)


def _bessel_y_series(order: int, x: float) -> float:
    # A&S 9.1.11 specialised to n = 0, 1.
    half = 0.5 * x
    q = half * half
    log_term = math.log(half) + _EULER_GAMMA
    if order == 0:
        # (2/pi) [ (ln(x/2)+gamma) J0 + sum_{m>=1} (-1)^{m+1} H_m q^m / (m!)^2 ]
        term = 1.0
        harmonic = 0.0
        tail = []
        for m in range(1, 60):
            term *= q / (m * m)
            harmonic += 1.0 / m
            contrib = (-1.0) ** (m + 1) * harmonic * term
            tail.append(contrib)
            if abs(contrib) < 1e-18:
                break
        return (2.0 / math.pi) * (log_term * _bessel_j_series(0, x)
                                  + math.fsum(tail))
    # order == 1:
    # (2/pi)(ln(x/2)+gamma) J1 - 2/(pi x)
    #   - (x/(2 pi)) sum_m (-1)^m (H_m + H_{m+1}) q^m / (m! (m+1)!)
    term = 1.0  # q^m / (m! (m+1)!) at m = 0
    h_m = 0.0
    h_m1 = 1.0
    tail = [(h_m + h_m1) * term]
    for m in range(1, 60):
        term *= -q / (m * (m + 1))
        h_m += 1.0 / m
        h_m1 += 1.0 / (m + 1)
        contrib = (h_m + h_m1) * term
        tail.append(contrib)
        if abs(contrib) < 1e-18:
            break
    return ((2.0 / math.pi) * log_term * _bessel_j_series(1, x)
            - 2.0 / (math.pi * x)
            - (x / (2.0 * math.pi)) * math.fsum(tail))


def _bessel_y_integral(order: int, x: float) -> float:
    osc = np.sin(x * _GL_SIN_T - order * _GL_T)
    first = float(np.dot(_GL_W, osc)) / math.pi
    # exponential part: integrand e^{nt - x sinh t} (+ e^{-nt} piece) is
    # negligible once x sinh T ~ 48
    t_max = math.asinh(48.0 / x)
    t = 0.5 * t_max * (_GL_NODES + 1.0)
    w = 0.5 * t_max * _GL_WEIGHTS
    decay = np.exp(-x * np.sinh(t))
    hyp = np.exp(order * t) + (-1.0) ** order * np.exp(-order * t)
    second = float(np.dot(w, hyp * decay)) / math.pi
    return first - second


def bessel_y(order: int, x: float) -> float:
    """Bessel function of the second kind, Y_order(x), order in {0, 1, 2}.

    Requires x > 0; absolute error below 1e-10 for x <= 50.  For x below
    a tiny documented cutoff (1e-305) the value has left the double range
    and the divergence is reported as -inf.
    """
    _check_order(order, (0, 1, 2), "bessel_y")
    if not math.isfinite(x):
        raise DomainError(f"bessel_y requires finite x, got {x!r}")
    if x <= 0.0:
        raise DomainError(f"bessel_y requires x > 0, got {x!r}")
    if x < _Y_DIVERGENCE_CUTOFF:
        return -math.inf
    if order == 2:
        # Y2 = (2/x) Y1 - Y0; no cancellation trouble since Y2 is
        # dominated by the (2/x) Y1 term at small x and all terms share
        # magnitude at large x.
        return 2.0 / x * bessel_y(1, x) - bessel_y(0, x)
    if x < _SERIES_LIMIT:
        return _bessel_y_series(order, x)
    return _bessel_y_integral(order, x)


def _struve_series(order: int, x: float) -> float:
    half = 0.5 * x
    q = half * half
    # t_0 = (x/2)^(order+1) / (Gamma(3/2) Gamma(order + 3/2))
    term = half ** (order + 1) / (math.gamma(1.5) * math.gamma(order + 1.5))
    terms = [term]
    for k in range(1, 80):
        term *= -q / ((k + 0.5) * (k + order + 0.5))
        terms.append(term)
        if abs(term) < 1e-18 * (1.0 + abs(terms[0])):
            break
    return math.fsum(terms)


def _struve_large(order: int, x: float) -> float:
    # DLMF 11.6.1: H_n(x) - Y_n(x) ~ (1/pi) sum_k Gamma(k + 1/2)
    #   (x/2)^(n - 2k - 1) / Gamma(n + 1/2 - k), truncated at the
    # smallest term.
    total = 0.0
    prev = math.inf
    for k in range(0, 60):
        term = (math.gamma(k + 0.5) * (0.5 * x) ** (order - 2 * k - 1)
                / math.gamma(order + 0.5 - k))
        if abs(term) >= prev:
            break
        total += term
        prev = abs(term)
        if abs(term) < 1e-18:
            break
    return bessel_y(order, x) + total / math.pi


def struve_h(order: int, x: float) -> float:
    """Struve function H_order(x), order in {0, 1}.

    Absolute error below 1e-8 for |x| <= 50.  H0 is odd, H1 even.
    """
    _check_order(order, (0, 1), "struve_h")
    if not math.isfinite(x):
        raise DomainError(f"struve_h requires finite x, got {x!r}")
    sign = 1.0
    if x < 0.0:
        x = -x
        sign = -1.0 if order == 0 else 1.0
    if x == 0.0:
        return 0.0
    if x <= _STRUVE_SERIES_LIMIT:
        return sign * _struve_series(order, x)
    return sign * _struve_large(order, x)


# ---------------------------------------------------------------------------
# principal-value integration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PVIntegrand:
    """A real integrand with one simple pole inside its integration bounds.

    evaluator must be finite at every non-pole point of the interval; the
    upper bound may be math.inf, in which case the integrand is assumed to
    be eventually oscillatory with a quasi-period near 2*pi (Bessel-type
    tails), which is what the kernel identities need.
    """

    evaluator: Callable[[float], float]
    pole_location: float
    bounds: tuple[float, float]

    def __post_init__(self):
        lo, hi = self.bounds
        if not (math.isfinite(lo) and (math.isfinite(hi) or hi == math.inf)):
            raise DomainError(f"bad integration bounds {self.bounds!r}")
        if not lo < self.pole_location < hi:
            raise DomainError(
                f"pole {self.pole_location!r} must lie strictly inside "
                f"bounds {self.bounds!r}")


def _epsilon_limit(sums: list[float]) -> float:
    """Wynn's epsilon algorithm: accelerate a sequence of partial sums."""
    n = len(sums)
    if n == 1:
        return sums[0]
    eps_prev = [0.0] * n           # epsilon_{-1}
    eps_curr = list(sums)          # epsilon_0
    best = sums[-1]
    for k in range(1, n):
        nxt = []
        for j in range(len(eps_curr) - 1):
            diff = eps_curr[j + 1] - eps_curr[j]
            if abs(diff) < 1e-300:
                return eps_curr[j + 1]
            nxt.append(eps_prev[j + 1] + 1.0 / diff)
        eps_prev, eps_curr = eps_curr, nxt
        if k % 2 == 0 and eps_curr:
            best = eps_curr[-1]
    return best


def oscillatory_integral(f: Callable[[float], float], lower: float,
                         tol: float = 1e-9, segment: float = math.pi,
                         max_segments: int = 400) -> float:
    """Integrate an eventually-oscillatory f over [lower, inf).

    Sums quadrature results over consecutive segments of the given length
    (half the quasi-period, so consecutive contributions alternate in
    sign) and extrapolates the slowly converging alternating series with
    Wynn's epsilon algorithm.
    """
    partial = 0.0
    sums: list[float] = []
    estimates: list[float] = []
    for k in range(max_segments):
        a = lower + k * segment
        piece, _ = quad(f, a, a + segment, epsabs=tol * 1e-3, epsrel=1e-12,
                        limit=100)
        partial += piece
        sums.append(partial)
        if len(sums) >= 6 and len(sums) % 2 == 0:
            window = sums[-40:]
            estimates.append(_epsilon_limit(window))
            if (len(estimates) >= 2
                    and abs(estimates[-1] - estimates[-2]) < 0.5 * tol):
                return estimates[-1]
    best = estimates[-1] if estimates else sums[-1]
    resid = abs(estimates[-1] - estimates[-2]) if len(estimates) >= 2 else math.inf
    raise NumericsError(
        f"oscillatory tail failed to settle within {max_segments} segments",
        estimate=best, residual=resid)


def principal_value(integrand: PVIntegrand, tol: float = 1e-7) -> float:
    """Cauchy principal value of a simple-pole integrand.

    The pole is handled by symmetric excision: inside a window of
    half-width eps around the pole the integrand is evaluated in pairs
    f(pole + u) + f(pole - u), which cancels the singular part and leaves
    a bounded integrand; outside the window ordinary adaptive quadrature
    is used.  The window is halved until two successive estimates agree
    within tol/2.  Failure to settle raises NumericsError carrying the
    best estimate and the residual.
    """
    if tol <= 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    f = integrand.evaluator
    pole = integrand.pole_location
    lo, hi = integrand.bounds

    infinite = hi == math.inf
    room_right = math.inf if infinite else hi - pole
    width0 = 0.5 * min(pole - lo, room_right, 2.0)

    # The tail beyond a fixed turning point does not depend on the
    # excision window, so it is computed once.
    tail = 0.0
    turn = hi
    if infinite:
        turn = pole + width0 + max(30.0, 4.0 * abs(pole))
        tail = oscillatory_integral(f, turn, tol=0.25 * tol)

    def paired(u: float) -> float:
        return f(pole + u) + f(pole - u)

    def estimate(width: float) -> float:
        eps = tol / 16.0
        left, _ = quad(f, lo, pole - width, epsabs=eps, epsrel=1e-12,
                       limit=200)
        right, _ = quad(f, pole + width, turn, epsabs=eps, epsrel=1e-12,
                        limit=200)
        window, _ = quad(paired, 0.0, width, epsabs=eps, epsrel=1e-12,
                         limit=200)
        return left + right + window + tail

    width = width0
    prev = estimate(width)
    delta = math.inf
    for _ in range(24):
        width *= 0.5
        curr = estimate(width)
        delta = abs(curr - prev)
        if delta <= 0.5 * tol:
            return curr
        prev = curr
    raise NumericsError(
        "principal value did not settle under window halving",
        estimate=prev, residual=delta)
