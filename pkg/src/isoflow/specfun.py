"""Special-function kernels: complex log-gamma, regularized Gauss series,
Bessel J by backward recurrence, and panel Gauss-Legendre quadrature.

The regularized series 2F1(a,b;c;z)/Gamma(c) stays finite when c is a
non-positive integer (the leading terms are annihilated by 1/Gamma), which is
exactly the case needed to evaluate bilateral families on an integer lattice.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import special as sp


class PoleError(ArithmeticError):
    """log-gamma requested at a non-positive integer."""


class PrecisionError(ArithmeticError):
    """A series failed to converge to working precision."""


def complex_log_gamma(z: complex | float) -> complex | float:
    """Principal branch of log Gamma.  Real in, real out (when positive);
    raises PoleError at the poles 0, -1, -2, ..."""
    zc = complex(z)
    if zc.imag == 0.0 and zc.real <= 0.0 and zc.real == round(zc.real):
        raise PoleError(f"log-gamma pole at {z}")
    out = complex(sp.loggamma(zc))
    if isinstance(z, (int, float)) and z > 0:
        return out.real
    return out


def _is_nonpositive_int(x) -> bool:
    if isinstance(x, complex):
        if x.imag != 0.0:
            return False
        x = x.real
    return x <= 0 and float(x) == round(float(x))


def regularized_2f1(a, b, c, z, *, max_terms: int = 10_000):
    """2F1(a, b; c; z) / Gamma(c), by direct summation of the regularized
    series sum_k (a)_k (b)_k z^k / (k! Gamma(c+k)).

    Terminating cases (a or b a non-positive integer) are summed as finite
    polynomials for any z.  Otherwise a Pfaff transform
    (1-z)^(-a) * 2F1reg(a, c-b; c; z/(z-1)) is applied once when it shrinks
    |z|, and non-convergence within ``max_terms`` raises PrecisionError.
    When c = -m is a non-positive integer the first 1 + m terms vanish
    identically and summation starts at k0 = 1 - c.
    """
    complex_out = any(isinstance(v, complex) for v in (a, b, c, z))
    terminating = _is_nonpositive_int(a) or _is_nonpositive_int(b)

    if not terminating and abs(z) >= 0.75:
        zp = z / (z - 1.0)
        if abs(zp) < abs(z):
            pref = complex(1.0 - z) ** (-a)
            if not complex_out:
                pref = pref.real
            val = pref * regularized_2f1(a, c - b, c, zp, max_terms=max_terms)
            return val if complex_out else _drop_tiny_imag(val)
        if abs(z) >= 1.0:
            raise PrecisionError(f"series argument |z| = {abs(z):.3g} >= 1")

    if _is_nonpositive_int(c):
        k0 = int(round(1 - (c.real if isinstance(c, complex) else c)))
        term = (z ** k0) / math.factorial(k0)
        for i in range(k0):
            term = term * (a + i) * (b + i)
    else:
        k0 = 0
        term = complex(np.exp(-sp.loggamma(complex(c))))
        if not complex_out:
            term = term.real

    total = term
    quiet = 0
    k = k0
    while True:
        if terminating and _is_nonpositive_int(a) and k >= -round(complex(a).real):
            break
        if terminating and _is_nonpositive_int(b) and k >= -round(complex(b).real):
            break
        if k - k0 >= max_terms:
            raise PrecisionError("regularized 2F1 did not converge")
        term = term * (a + k) * (b + k) * z / ((k + 1) * (c + k))
        total = total + term
        k += 1
        if not terminating:
            if abs(term) <= 1e-17 * (1.0 + abs(total)):
                quiet += 1
                if quiet >= 3:
                    break
            else:
                quiet = 0
    return total if complex_out else _drop_tiny_imag(total)


def _drop_tiny_imag(v):
    if isinstance(v, complex):
        return v.real
    return v


_BESSEL_Z_MAX = 50.0


def bessel_j(n: int, z: float) -> float:
    """Bessel function of the first kind, integer order, by Miller's
    backward recurrence with the even-order sum normalization.

    Restricted to |z| <= 50 where the fixed start offset keeps full accuracy.
    """
    if abs(z) > _BESSEL_Z_MAX:
        raise ValueError(f"|z| <= {_BESSEL_Z_MAX:g} required, got {z}")
    n = int(n)
    if z == 0.0:
        return 1.0 if n == 0 else 0.0
    sign = 1.0
    if z < 0.0:
        z = -z
        if n % 2:
            sign = -sign
    if n < 0:
        n = -n
        if n % 2:
            sign = -sign

    n_start = max(n + 20, int(math.ceil(1.3 * z)) + 20)
    j_hi = 0.0
    j_k = 1e-30
    target = j_k if n == n_start else 0.0
    even_sum = j_k if (n_start % 2 == 0) else 0.0
    for k in range(n_start, 0, -1):
        j_lo = (2.0 * k / z) * j_k - j_hi
        j_hi, j_k = j_k, j_lo
        kk = k - 1
        if kk == n:
            target = j_k
        if kk > 0 and kk % 2 == 0:
            even_sum += j_k
        if abs(j_k) > 1e250:
            j_k *= 1e-250
            j_hi *= 1e-250
            target *= 1e-250
            even_sum *= 1e-250
    norm = j_k + 2.0 * even_sum  # j_k is now the order-0 value
    val = sign * target / norm
    if val == 0.0:
        warnings.warn(f"bessel_j({n}, {z:g}) underflowed to zero", RuntimeWarning)
    return val


def gauss_legendre_panels(f, a: float, b: float, n_panels: int = 64,
                          n_nodes: int = 32) -> float:
    """Integrate a callable over [a, b] with composite Gauss-Legendre
    panels.  ``f`` may be vectorized over an ndarray of abscissae or
    scalar-only; the vectorized path is tried once and the verdict reused
    for the remaining panels."""
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    edges = np.linspace(a, b, n_panels + 1)
    total = 0.0
    vectorized = True
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        x = mid + half * nodes
        if vectorized:
            try:
                fx = np.asarray(f(x), dtype=float)
                if fx.shape != x.shape:
                    raise ValueError
            except (TypeError, ValueError):
                vectorized = False
        if not vectorized:
            fx = np.array([f(xi) for xi in x])
        total += half * float(np.sum(weights * fx))
    return total
