"""Spectral checks for the rank-1 operators: symmetric tridiagonal
eigensolves, row-identity residuals of the closed-form eigenfunctions, drift
of the spectrum along a flow, and the flat-case Fourier identity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .algebra import AlgebraSpec
from .families import (FamilyTag, SpectralMap, eval_rec, meixner_function,
                       parameter_map)
from .flows import Trajectory
from .operators import TridiagonalOperator
from .representations import (ConfigurationError, RepresentationSpec, build_L,
                              build_generators)
from .specfun import bessel_j


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues, orthonormal eigenvector columns, and the
    squared first components (the discrete spectral weights)."""
    eigenvalues: np.ndarray
    vectors: np.ndarray
    weights: np.ndarray


def eigs_sym_tridiag(op: TridiagonalOperator) -> SpectralDecomposition:
    lam, vec = eigh_tridiagonal(np.asarray(op.diag), np.asarray(op.off))
    return SpectralDecomposition(lam, vec, vec[0, :] ** 2)


# --------------------------------------------------------------------------
# closed-form eigenfunctions per family


def _rep_labels(rep: RepresentationSpec) -> dict:
    out = {}
    for name in ("j", "k", "h", "rho"):
        if hasattr(rep, name):
            out[name] = getattr(rep, name)
    if hasattr(rep, "eps_rep"):
        out["eps"] = rep.eps_rep
    return out


def eigenfunction(family: FamilyTag, params, smap: SpectralMap,
                  alg: AlgebraSpec, r: float, n_label: int, lam: float) -> float:
    """Component psi_n of the closed-form eigenvector of the operator at
    eigenvalue ``lam``, in the operator's orthonormal basis."""
    fam = FamilyTag(family)
    x = smap.to_family_variable(lam)
    if fam is FamilyTag.BESSEL:
        return bessel_j(int(round(x)) - n_label, params.z)
    if fam is FamilyTag.MEIXNER_FUNCTION:
        return meixner_function(n_label, x, params)
    sign = 1.0
    if fam is FamilyTag.CHARLIER:
        sign = -math.copysign(1.0, r / alg.c_param)
    return sign ** n_label * eval_rec(fam, params, n_label, x)


def recurrence_residual(family: FamilyTag, params, rep: RepresentationSpec,
                        alg: AlgebraSpec, r: float, s: float, n: int,
                        spectral_point: float) -> float:
    """Absolute residual of row ``n`` (0-based within the realized window)
    of L psi = Lambda psi with the family's closed-form eigenfunction.

    The value is the plain |row sum|, analytically zero.  Note that the
    closed-form eigenfunctions are not unit vectors: their components grow
    like the inverse square root of the spectral weight near lattice tails,
    so on wide windows with a strongly tilted weight (e.g. a large
    finite-lattice window far from the symmetric point) the attainable
    floor is rounding noise *times that component size*.  Callers probing
    such regimes should budget tolerance accordingly or pick a state whose
    weight is balanced over the window.

    Rows touching an inexact (truncated) edge are rejected because the row
    identity genuinely fails there.
    """
    fam = FamilyTag(family)
    L = build_L(rep, alg, r, s)
    size = L.size
    if not (0 <= n < size):
        raise ConfigurationError(f"row {n} outside window of size {size}")
    _, smap = parameter_map(fam, alg, r, s, **_rep_labels(rep))
    base = build_generators(rep).base_index

    def psi(row: int) -> float:
        return eigenfunction(fam, params, smap, alg, r, base + row, spectral_point)

    lam = float(spectral_point)
    acc = (L.diag[n] - lam) * psi(n)
    if n >= 1:
        acc += L.off[n - 1] * psi(n - 1)
    elif not L.lo_exact:
        raise ConfigurationError("row touches the truncated lower edge")
    if n <= size - 2:
        acc += L.off[n] * psi(n + 1)
    elif not L.hi_exact:
        raise ConfigurationError("row touches the truncated upper edge")
    return abs(acc)


# --------------------------------------------------------------------------
# drift along a flow


def isospectrality_drift(traj: Trajectory, rep: RepresentationSpec,
                         alg: AlgebraSpec, mode: str = "all",
                         count: int | None = None) -> float:
    """Max absolute eigenvalue drift along the trajectory.

    mode = "all" compares the full spectrum of the realized window,
    "lowest" only the ``count`` smallest eigenvalues (use for windows whose
    upper edge is truncated), "central" the ``count`` eigenvalues closest to
    the spectral center (use for doubly truncated windows).
    """
    ref = None
    worst = 0.0
    for i in range(len(traj)):
        L = build_L(rep, alg, float(traj.r[i]), float(traj.s[i]))
        lam = eigh_tridiagonal(np.asarray(L.diag), np.asarray(L.off),
                               eigvals_only=True)
        lam = np.sort(lam)
        if mode == "lowest":
            lam = lam[:count]
        elif mode == "central":
            mid = len(lam) // 2
            half = count // 2
            lam = lam[mid - half:mid - half + count]
        elif mode != "all":
            raise ValueError(f"unknown mode {mode!r}")
        if ref is None:
            ref = lam
        else:
            worst = max(worst, float(np.abs(lam - ref).max()))
    return worst


# --------------------------------------------------------------------------
# flat case


def degenerate_e2_check(k: float, r: float, n_orders: int = 5,
                        grid: int = 64) -> float:
    """The flat operator with zero diagonal acts on Fourier modes e^{inx} by
    k r (e^{i(n+1)x} + e^{i(n-1)x}) = 2 k r cos(x) e^{inx}; returns the max
    residual of that identity over a uniform grid and a band of orders."""
    xs = np.linspace(0.0, 2.0 * math.pi, grid, endpoint=False)
    worst = 0.0
    for n in range(-n_orders, n_orders + 1):
        lhs = k * r * (np.exp(1j * (n + 1) * xs) + np.exp(1j * (n - 1) * xs))
        rhs = 2.0 * k * r * np.cos(xs) * np.exp(1j * n * xs)
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst
