"""Irreducible *-representations of g(a,b) as banded operators.

Each representation acts on an orthonormal basis e_n of a finite window.
``H`` and ``N`` act diagonally, ``E`` raises (e_n -> E_coeff(n) e_{n+1}) and
``F`` lowers.  The involution E* = epsilon*F makes L = c H + s(aH+bN) +
r(E+E*) symmetric tridiagonal and M = u(E-E*) skew.

Displayed actions realized here:

    su(2), dim 2j+1:       H e_n = 2(n-j) e_n,   E e_n = sqrt((n+1)(2j-n)) e_{n+1}
    discrete series (k>0): H e_n = 2(k+n) e_n,   E e_n = sqrt((n+1)(2k+n)) e_{n+1},
                           F e_n = -sqrt(n(2k+n-1)) e_{n-1}
    principal series:      H e_n = 2(eps+n) e_n,
                           E e_n = sqrt((n+eps+1/2)^2 + rho^2) e_{n+1},
                           F e_n = -sqrt((n+eps-1/2)^2 + rho^2) e_{n-1}
    oscillator (k>=0,h>0): H e_n = 2(k+n) e_n,   E e_n = sqrt(h(n+1)) e_{n+1},
                           F e_n = sqrt(h n) e_{n-1},   N = -h
    e(2) (k>0):            H e_n = 2n e_n,       E e_n = k e_{n+1},  F e_n = k e_{n-1}
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraSpec
from .operators import SkewTridiagonalOperator, TridiagonalOperator


class ParameterError(ValueError):
    """Invalid representation parameters."""


class ConfigurationError(ValueError):
    """Incompatible (representation, algebra) pairing."""


# --------------------------------------------------------------------------
# representation specs


@dataclass(frozen=True)
class SU2:
    """Finite representation of dimension 2j+1; j a nonnegative half-integer."""

    j: float

    def __post_init__(self):
        if self.j < 0 or round(2 * self.j) != 2 * self.j:
            raise ParameterError(f"j must be a nonnegative half-integer, got {self.j}")

    @property
    def window(self) -> tuple[int, int]:
        return 0, int(round(2 * self.j))


@dataclass(frozen=True)
class DiscreteSeriesPlus:
    """Positive discrete series on l2(N), truncated at n_max (inclusive)."""

    k: float
    n_max: int

    def __post_init__(self):
        if self.k <= 0:
            raise ParameterError(f"k must be positive, got {self.k}")
        if self.n_max < 0:
            raise ParameterError("window is empty")

    @property
    def window(self) -> tuple[int, int]:
        return 0, self.n_max


@dataclass(frozen=True)
class PrincipalSeries:
    """Principal unitary series on l2(Z) with spectral parameter
    lambda = -1/2 + i*rho, truncated to [n_min, n_max]."""

    rho: float
    eps_rep: float
    n_min: int
    n_max: int

    def __post_init__(self):
        if self.rho <= 0:
            raise ParameterError(f"rho must be positive, got {self.rho}")
        if not 0.0 <= self.eps_rep < 1.0:
            raise ParameterError(f"eps_rep must lie in [0,1), got {self.eps_rep}")
        if self.rho == 0.0 and self.eps_rep == 0.5:
            raise ParameterError("excluded point (lambda, eps) = (-1/2, 1/2)")
        if self.n_max < self.n_min:
            raise ParameterError("window is empty")

    @property
    def window(self) -> tuple[int, int]:
        return self.n_min, self.n_max


@dataclass(frozen=True)
class Oscillator:
    """Lowest-weight oscillator-algebra representation on l2(N); N acts by -h."""

    k: float
    h: float
    n_max: int

    def __post_init__(self):
        if self.k < 0:
            raise ParameterError(f"k must be nonnegative, got {self.k}")
        if self.h <= 0:
            raise ParameterError(f"h must be positive, got {self.h}")
        if self.n_max < 0:
            raise ParameterError("window is empty")

    @property
    def window(self) -> tuple[int, int]:
        return 0, self.n_max


@dataclass(frozen=True)
class E2:
    """e(2) representation on l2(Z) with shift weight k, truncated to [n_min, n_max]."""

    k: float
    n_min: int
    n_max: int

    def __post_init__(self):
        if self.k <= 0:
            raise ParameterError(f"k must be positive, got {self.k}")
        if self.n_max < self.n_min:
            raise ParameterError("window is empty")

    @property
    def window(self) -> tuple[int, int]:
        return self.n_min, self.n_max


RepresentationSpec = SU2 | DiscreteSeriesPlus | PrincipalSeries | Oscillator | E2

_COMPAT = {
    SU2: (1.0, 0.0, +1),
    DiscreteSeriesPlus: (1.0, 0.0, -1),
    PrincipalSeries: (1.0, 0.0, -1),
    Oscillator: (0.0, 1.0, +1),
    E2: (0.0, 0.0, +1),
}


def check_compatible(rep: RepresentationSpec, alg: AlgebraSpec) -> None:
    a, b, eps = _COMPAT[type(rep)]
    if (alg.a, alg.b, alg.epsilon) != (a, b, eps):
        raise ConfigurationError(
            f"{type(rep).__name__} requires (a, b, epsilon) = {(a, b, eps)}, "
            f"got ({alg.a}, {alg.b}, {alg.epsilon})"
        )


# --------------------------------------------------------------------------
# generator matrix elements


@dataclass(frozen=True)
class Generators:
    """Matrix elements of (H, E, F, N) on the window.

    ``h_diag[i]`` is the H eigenvalue at basis index base_index+i,
    ``e_coeff[i]`` the coefficient of E: e_n -> e_coeff * e_{n+1} at
    n = base_index+i, ``f_coeff[i]`` the coefficient of F: e_{n+1} -> f * e_n
    (stored aligned with e_coeff so F e_{n+1} = f_coeff[i] e_n), and
    ``n_scalar`` the scalar by which the central element acts.
    """

    base_index: int
    h_diag: np.ndarray
    e_coeff: np.ndarray
    f_coeff: np.ndarray
    n_scalar: float
    lo_exact: bool
    hi_exact: bool


def build_generators(rep: RepresentationSpec) -> Generators:
    lo, hi = rep.window
    n = np.arange(lo, hi + 1, dtype=float)
    up = n[:-1]  # indices carrying the E coefficient to the next basis vector
    if isinstance(rep, SU2):
        twoj = 2.0 * rep.j
        return Generators(lo, 2.0 * (n - rep.j), np.sqrt((up + 1) * (twoj - up)),
                          np.sqrt((up + 1) * (twoj - up)), 0.0, True, True)
    if isinstance(rep, DiscreteSeriesPlus):
        e = np.sqrt((up + 1) * (2 * rep.k + up))
        return Generators(lo, 2.0 * (rep.k + n), e, -e, 0.0, True, False)
    if isinstance(rep, PrincipalSeries):
        e = np.sqrt((up + rep.eps_rep + 0.5) ** 2 + rep.rho ** 2)
        return Generators(lo, 2.0 * (rep.eps_rep + n), e, -e, 0.0, False, False)
    if isinstance(rep, Oscillator):
        e = np.sqrt(rep.h * (up + 1))
        return Generators(lo, 2.0 * (rep.k + n), e, e, -rep.h, True, False)
    if isinstance(rep, E2):
        e = np.full(len(up), rep.k)
        return Generators(lo, 2.0 * n, e, e, 0.0, False, False)
    raise ParameterError(f"unknown representation spec {rep!r}")


# --------------------------------------------------------------------------
# Lax operators


def build_L(rep: RepresentationSpec, alg: AlgebraSpec, r: float, s: float) -> TridiagonalOperator:
    """Symmetric tridiagonal matrix of L = cH + s(aH + bN) + r(E + E*)."""
    check_compatible(rep, alg)
    if not (np.isfinite(r) and np.isfinite(s)):
        raise ValueError("r and s must be finite")
    g = build_generators(rep)
    diag = (alg.c_param + s * alg.a) * g.h_diag + s * alg.b * g.n_scalar
    off = r * g.e_coeff  # E* = epsilon*F contributes the same coefficient, symmetrically
    return TridiagonalOperator(g.base_index, diag, off, g.lo_exact, g.hi_exact)


def build_M(rep: RepresentationSpec, alg: AlgebraSpec, u: float) -> SkewTridiagonalOperator:
    """Skew matrix of M = u(E - E*)."""
    check_compatible(rep, alg)
    if not np.isfinite(u):
        raise ValueError("u must be finite")
    g = build_generators(rep)
    return SkewTridiagonalOperator(g.base_index, u * g.e_coeff, g.lo_exact, g.hi_exact,
                                   size_hint=len(g.h_diag))


def lax_residual(rep: RepresentationSpec, alg: AlgebraSpec, r: float, s: float, u: float) -> float:
    """Interior-row max-norm of dL/dt - [M, L] with the flow substituted.

    dL/dt is assembled from the coupled system sdot = 2 epsilon r u,
    rdot = -2(a s + c) u via dL/ds = aH + bN and dL/dr = E + E*; the
    commutator is formed densely.  Analytically zero on every interior row.
    """
    check_compatible(rep, alg)
    g = build_generators(rep)
    s_dot = 2.0 * alg.epsilon * r * u
    r_dot = -2.0 * (alg.a * s + alg.c_param) * u
    ldot_diag = s_dot * (alg.a * g.h_diag + alg.b * g.n_scalar)
    ldot_off = r_dot * g.e_coeff
    ldot = TridiagonalOperator(g.base_index, ldot_diag, ldot_off,
                               g.lo_exact, g.hi_exact).to_dense()
    ld = build_L(rep, alg, r, s).to_dense()
    md = build_M(rep, alg, u).to_dense()
    comm = md @ ld - ld @ md
    op = build_L(rep, alg, r, s)
    rows = op.interior_rows()
    if len(rows) == 0:
        raise ConfigurationError("window too small: no interior rows survive truncation")
    diff = ldot - comm
    return float(np.abs(diff[list(rows), :]).max())
