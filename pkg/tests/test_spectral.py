"""Spectral decomposition, closed-form eigenfunction row residuals, and
isospectrality along flows."""
import numpy as np
import pytest

from isoflow import (ConfigurationError, DiscreteSeriesPlus, E2, FamilyTag,
                     FlowState, Oscillator, PrincipalSeries, SU2, Toda,
                     TridiagonalOperator, build_L, degenerate_e2_check,
                     eigenfunction, eigs_sym_tridiag, eval_rec, e2, integrate,
                     isospectrality_drift, oscillator, parameter_map,
                     recurrence_residual, su2, su11)
from isoflow.specfun import bessel_j

F = FamilyTag


def test_two_by_two_decomposition():
    op = TridiagonalOperator(0, np.array([-4.0, 4.0]), np.array([3.0]))
    dec = eigs_sym_tridiag(op)
    assert dec.eigenvalues == pytest.approx([-5.0, 5.0], abs=1e-12)
    # orthonormal columns; spectral weights are the squared first components
    ident = dec.vectors.T @ dec.vectors
    assert np.abs(ident - np.eye(2)).max() <= 1e-14
    assert dec.weights.sum() == pytest.approx(1.0, abs=1e-14)
    assert dec.weights == pytest.approx([0.9, 0.1], abs=1e-12)


def test_spin_one_spectrum_matches_map():
    rep, alg = SU2(1.0), su2()
    r, s = 3.0, 4.0
    L = build_L(rep, alg, r, s)
    dec = eigs_sym_tridiag(L)
    _, smap = parameter_map(F.KRAWTCHOUK, alg, r, s, j=1.0)
    want = np.sort([smap.eigenvalue(x) for x in range(3)])
    assert np.abs(dec.eigenvalues - want).max() <= 1e-10
    assert dec.eigenvalues == pytest.approx([-10.0, 0.0, 10.0], abs=1e-10)


def test_spectral_map_roundtrip():
    _, smap = parameter_map(F.KRAWTCHOUK, su2(), 3.0, 4.0, j=2.0)
    for x in (0.0, 1.0, 3.5):
        assert smap.to_family_variable(smap.eigenvalue(x)) == \
            pytest.approx(x, abs=1e-12)


CASES = [
    # family, rep, alg, r, s, labels, spectral lattice points, rows
    (F.KRAWTCHOUK, SU2(6.0), su2(), 1.0, 0.2, {"j": 6.0},
     [float(x) for x in range(10)], range(13)),
    (F.MEIXNER, DiscreteSeriesPlus(1.0, 60), su11(), 1.0, 1.025, {"k": 1.0},
     [float(x) for x in range(12)], range(25)),
    (F.BESSEL, E2(2.0, -40, 40), e2(1.0), 1.3, 0.4, {"k": 2.0},
     [float(x) for x in range(-6, 7)], range(30, 51)),
]


@pytest.mark.parametrize("family,rep,alg,r,s,labels,points,rows", CASES)
def test_recurrence_residual_rows(family, rep, alg, r, s, labels, points, rows):
    params, smap = parameter_map(family, alg, r, s, **labels)
    L = build_L(rep, alg, r, s)
    tol = 1e-11 * (1.0 + L.inf_norm())
    worst = 0.0
    for x in points:
        lam = smap.eigenvalue(x)
        for n in rows:
            worst = max(worst, recurrence_residual(
                family, params, rep, alg, r, s, n, lam))
    assert worst <= tol


def test_truncated_window_lowest_eigenvalues():
    # the infinite operator's point spectrum survives truncation at the
    # bottom of the window: lowest eigenvalues match 2C(x+k), C=sqrt(s^2-r^2)
    rep, alg = DiscreteSeriesPlus(1.0, 60), su11()
    r, s = 1.0, 1.25
    dec = eigs_sym_tridiag(build_L(rep, alg, r, s))
    want = 1.5 * (np.arange(5) + 1.0)
    assert np.abs(dec.eigenvalues[:5] - want).max() <= 1e-6


def test_eigenfunction_routing():
    # Bessel: order m - n at argument k r / c
    alg = e2(1.0)
    params, smap = parameter_map(F.BESSEL, alg, 1.3, 0.4, k=2.0)
    got = eigenfunction(F.BESSEL, params, smap, alg, 1.3, 3, smap.eigenvalue(5.0))
    assert got == pytest.approx(bessel_j(2, 2.0 * 1.3), rel=1e-12)
    # Charlier with r/c > 0 alternates sign against the bare polynomial
    alg = oscillator(1.0)
    params, smap = parameter_map(F.CHARLIER, alg, 6.0, 0.5, k=0.5, h=1.0)
    lam = smap.eigenvalue(4.0)
    x = smap.to_family_variable(lam)
    got = eigenfunction(F.CHARLIER, params, smap, alg, 6.0, 3, lam)
    assert got == pytest.approx(-eval_rec(F.CHARLIER, params, 3, x), rel=1e-12)


def test_residual_rejects_bad_rows():
    alg = su11()
    params, _ = parameter_map(F.MEIXNER, alg, 1.0, 1.025, k=1.0)
    rep = DiscreteSeriesPlus(1.0, 40)
    with pytest.raises(ConfigurationError):
        recurrence_residual(F.MEIXNER, params, rep, alg, 1.0, 1.025, 40, 3.0)
    with pytest.raises(ConfigurationError):
        recurrence_residual(F.MEIXNER, params, rep, alg, 1.0, 1.025, 41, 3.0)
    # doubly truncated window rejects the bottom row as well
    rep2 = PrincipalSeries(0.7, 0.3, -25, 25)
    params2, _ = parameter_map(F.MEIXNER_FUNCTION, su11(), 1.0, 1.2, rho=0.7,
                               eps=0.3)
    with pytest.raises(ConfigurationError):
        recurrence_residual(F.MEIXNER_FUNCTION, params2, rep2, su11(),
                            1.0, 1.2, 0, 1.0)


def test_isospectrality_along_flow():
    alg = su2()
    traj = integrate(alg, FlowState(r=1.0, s=0.2, t=0.0), Toda(),
                     dt=1e-3, t_end=0.5, record_every=50)
    assert isospectrality_drift(traj, SU2(2.5), alg) <= 1e-9

    alg = su11()
    traj = integrate(alg, FlowState(r=1.0, s=1.25, t=0.0), Toda(),
                     dt=1e-3, t_end=0.5, record_every=50)
    rep = DiscreteSeriesPlus(1.0, 60)
    assert isospectrality_drift(traj, rep, alg, mode="lowest", count=5) <= 1e-6
    with pytest.raises(ValueError):
        isospectrality_drift(traj, rep, alg, mode="middle")


def test_flat_operator_fourier_identity():
    assert degenerate_e2_check(2.0, 1.3) <= 1e-13
