"""Modified Bessel functions I_k, K_k of integer order for complex argument.

Evaluation strategy by region of |z|:

  I_k: power series with ratio truncation at relative 1e-15 up to a
       crossover radius, then the large-argument expansion carrying BOTH
       exponentials e^z and e^-z (the second matters once z leaves the
       positive real axis). The crossover is max(30, k^2 + 2k): the
       expansion in 1/z has coefficients growing like (4k^2)^j / (8^j j!),
       so a k-blind crossover at 30 would hand orders k >= 9 a divergent
       series; pushing the switch out to ~k^2 keeps the first ratio near
       1/2 and the truncation error near 1e-14.

  K_k: ascending series for |z| <= 2; the Laplace-type integral
       int_0^inf exp(-z cosh t) cosh(kt) dt on panels sized to resolve the
       oscillation of exp(-i Im z cosh t) for 2 < |z| <= 30 (the ascending
       series cancels catastrophically there, losing ~e^(2 Re z) digits);
       single-exponential asymptotic expansion for |z| > 30. Orders k >= 2
       come from the upward recurrence K_{k+1} = K_{k-1} + (2k/z) K_k,
       which is stable because K grows with order.

Derivatives use I_k' = (I_{k-1} + I_{k+1})/2 and K_k' = -(K_{k-1}+K_{k+1})/2.
Arguments beyond |z| = 700 raise OverflowGuard: past that the exponential
factors leave double range and the caller must work with log-scaled ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OverflowGuard

_OVERFLOW_RADIUS = 700.0
_SERIES_RTOL = 1e-15


def _check_argument(z):
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("argument must be finite")
    if abs(z) > _OVERFLOW_RADIUS:
        raise OverflowGuard(
            f"|z| = {abs(z):.1f} exceeds {_OVERFLOW_RADIUS:.0f}; exponential factor "
            "overflows double precision"
        )
    return z


def _i_crossover(k):
    return max(30.0, float(k * k + 2 * k))


def _i_series(k, z):
    # I_k(z) = sum_m (z/2)^(2m+k) / (m! (m+k)!); all terms positive for
    # real z > 0, so no cancellation where the series is actually used.
    if z == 0:
        return 1.0 + 0.0j if k == 0 else 0.0 + 0.0j
    q = 0.25 * z * z
    term = (0.5 * z) ** k / math.factorial(k)
    total = term
    m = 0
    while m < 2000:
        term = term * q / ((m + 1) * (m + 1 + k))
        total += term
        m += 1
        if abs(term) <= _SERIES_RTOL * abs(total):
            # one confirming extra term guards against a small-ratio fluke
            term = term * q / ((m + 1) * (m + 1 + k))
            total += term
            if abs(term) <= _SERIES_RTOL * abs(total):
                return total
            m += 1
    return total


def _asym_sum(k, z, signs):
    # sum_j s^j a_j(k) / z^j with a_j(k) = prod(4k^2 - (2i-1)^2)/(8^j j!),
    # truncated at 1e-16 relative or at the smallest term before divergence.
    fourk2 = 4.0 * k * k
    term = 1.0 + 0.0j
    total = term
    prev = abs(term)
    for j in range(1, 60):
        term = term * signs * (fourk2 - (2 * j - 1) ** 2) / (8.0 * j * z)
        if abs(term) >= prev:
            break
        total += term
        prev = abs(term)
        if abs(term) <= 1e-16 * abs(total):
            break
    return total


def _i_asymptotic(k, z):
    root = np.sqrt(2.0 * np.pi * z)
    grow = np.exp(z) * _asym_sum(k, z, -1.0) / root
    # the recessive exponential enters with phase exp(+-(k + 1/2) pi i);
    # the sign follows the half-plane of z
    phase = 1.0j if z.imag >= 0.0 else -1.0j
    decay = (-1.0) ** k * phase * np.exp(-z) * _asym_sum(k, z, 1.0) / root
    return grow + decay


def _i_value(k, z):
    if abs(z) <= _i_crossover(k):
        return _i_series(k, z)
    return _i_asymptotic(k, z)


def _k_series(k, z):
    # ascending series, DLMF 10.31.2 shape, for |z| <= 2
    half = 0.5 * z
    q = 0.25 * z * z
    finite = 0.0 + 0.0j
    if k > 0:
        term = 0.5 * half ** (-k) * math.factorial(k - 1)
        finite = term
        for m in range(1, k):
            term = term * (-q) / (m * (k - m))
            finite += term
    log_part = (-1.0) ** (k + 1) * np.log(half) * _i_series(k, z)
    # psi(m+1) + psi(m+k+1) built incrementally from psi(1) = -gamma
    psi_a = -np.euler_gamma
    psi_b = -np.euler_gamma + sum(1.0 / j for j in range(1, k + 1))
    term = 0.5 * half**k / math.factorial(k)
    total = (psi_a + psi_b) * term
    m = 0
    while m < 200:
        m += 1
        term = term * q / (m * (m + k))
        psi_a += 1.0 / m
        psi_b += 1.0 / (m + k)
        piece = (psi_a + psi_b) * term
        total += piece
        if abs(piece) <= _SERIES_RTOL * (abs(total) + 1e-300):
            break
    return finite + log_part + (-1.0) ** k * total


def _k_integral(k, z):
    # K_k(z) = int_0^inf exp(-z cosh t) cosh(kt) dt, Re z > 0; used for
    # k <= 1 only (higher orders come from recurrence). Truncate where the
    # integrand is ~e^-60 below its t=0 level, then integrate on panels
    # short enough that neither the decay nor the oscillation of
    # exp(-i Im z cosh t) outruns a 16-point Gauss rule.
    x = z.real
    t_max = math.acosh(1.0 + 60.0 / max(x, 1e-12))
    nodes, weights = np.polynomial.legendre.leggauss(16)
    total = 0.0 + 0.0j
    t0 = 0.0
    while t0 < t_max:
        # phase advance |Im z| * (cosh t1 - cosh t0) kept under ~pi
        budget = math.pi / max(abs(z.imag), 1e-12)
        sh = math.sinh(min(t0 + 0.5, t_max)) + 1e-3
        dt = min(0.5, budget / sh, t_max - t0)
        t1 = t0 + dt
        mid, halfw = 0.5 * (t0 + t1), 0.5 * (t1 - t0)
        t = mid + halfw * nodes
        vals = np.exp(-z * np.cosh(t)) * np.cosh(k * t)
        total += halfw * (weights @ vals)
        t0 = t1
    return total


def _k_asymptotic(k, z):
    return np.sqrt(np.pi / (2.0 * z)) * np.exp(-z) * _asym_sum(k, z, 1.0)


def _k_low_orders(z):
    if abs(z) <= 2.0:
        return _k_series(0, z), _k_series(1, z)
    if abs(z) <= 30.0:
        return _k_integral(0, z), _k_integral(1, z)
    return _k_asymptotic(0, z), _k_asymptotic(1, z)


def _k_values_through(k, z):
    # K_0 .. K_{k} by stable upward recurrence
    k0, k1 = _k_low_orders(z)
    vals = [k0, k1]
    for j in range(1, k):
        vals.append(vals[j - 1] + (2.0 * j / z) * vals[j])
    return vals


def bessel_i(k, z):
    """(I_k(z), I_k'(z)) for integer k >= 0, complex z with |z| <= 700."""
    if k < 0:
        raise ValueError("order must be nonnegative")
    z = _check_argument(z)
    value = _i_value(k, z)
    if k == 0:
        deriv = _i_value(1, z)
    else:
        deriv = 0.5 * (_i_value(k - 1, z) + _i_value(k + 1, z))
    return value, deriv


def bessel_k(k, z):
    """(K_k(z), K_k'(z)) for integer k >= 0, complex z, Re z > 0, |z| <= 700."""
    if k < 0:
        raise ValueError("order must be nonnegative")
    z = _check_argument(z)
    if z.real <= 0.0:
        raise ValueError("K_k requires Re z > 0")
    vals = _k_values_through(k + 1, z)
    value = vals[k]
    if k == 0:
        deriv = -vals[1]
    else:
        deriv = -0.5 * (vals[k - 1] + vals[k + 1])
    return value, deriv


def bessel_j(k, x):
    """(J_k(x), J_k'(x)) for real x >= 0, via J_k(x) = i^(-k) I_k(ix).

    Real parts are exact up to rounding; the series region covers every x
    this package asks for (Robin reference roots live at x <= 10).
    """
    if k < 0:
        raise ValueError("order must be nonnegative")
    x = float(x)
    if x < 0.0:
        raise ValueError("argument must be nonnegative")
    iv = _i_series(k, 1j * x) if x <= _i_crossover(k) else _i_value(k, 1j * x)
    value = ((-1j) ** k * iv).real
    if k == 0:
        im1 = _i_value(1, 1j * x)
        deriv = -((-1j) ** 1 * im1).real
    else:
        im_lo = _i_value(k - 1, 1j * x)
        im_hi = _i_value(k + 1, 1j * x)
        j_lo = ((-1j) ** (k - 1) * im_lo).real
        j_hi = ((-1j) ** (k + 1) * im_hi).real
        deriv = 0.5 * (j_lo - j_hi)
    return value, deriv


@dataclass(frozen=True)
class BesselEval:
    """One joint evaluation of I_k, K_k and their derivatives at z."""

    order: int
    argument: complex
    value_i: complex
    value_iprime: complex
    value_k: complex
    value_kprime: complex


def bessel_eval(k, z):
    """Joint (I, I', K, K') evaluation packaged as a BesselEval."""
    vi, vip = bessel_i(k, z)
    vk, vkp = bessel_k(k, z)
    return BesselEval(order=k, argument=complex(z), value_i=vi,
                      value_iprime=vip, value_k=vk, value_kprime=vkp)
