"""Built-in verification suite: every structural identity the library
claims, exercised at fixed, well-conditioned states.

Groups (run individually with ``isoflow verify --only <group>``):

    lax             operator-level consistency of the pair in five windows
    invariant       conservation of I along integrated flows
    closed_form     the compact-class orbit (tanh, sech) and RK4 order
    diagonalization row residuals of all closed-form eigenfunctions
    isospectrality  spectrum drift along rank-1 and chain flows
    modification    constancy and slope of the weight-modification rate
    meixner_functions  bilateral recurrence and lattice orthogonality
    chain           spectrum/weights/trace identities of the chain operator
    mvk             multivariate table: orthogonality, recurrence, N = 1
    time_derivative eigenvector-polynomial and weighted-table evolution laws
    reduction       collapse of the symmetric chain to the binomial lattice

Informational rows (tolerance = inf) record quantities that are reported
but deliberately not gated, e.g. residuals of sign-negated variants that
are kept only so their failure stays visible.
"""
from __future__ import annotations

import math

import numpy as np

from .algebra import e2, oscillator, su2, su11
from .chain import (ChainState, build_chain_L, chain_isospectrality_drift,
                    chain_spectrum, christoffel_weights, eigen_polys,
                    integrate_chain, pn_time_derivative_check,
                    trace_invariants)
from .operators import TridiagonalOperator
from .config import DEFAULT_SEED
from .families import (FamilyTag, MeixnerFunctionParams, meixner_function,
                       meixner_function_recurrence_residual, parameter_map,
                       weight)
from .flows import (FlowState, SignedScaled, Toda, integrate, invariant,
                    modification_report)
from .mvk import (krawtchouk_reduction_check, mvk_orthogonality_check,
                  mvk_recurrence_check, mvk_table, mvk_time_derivative_check,
                  unit_index)
from .report import CheckResult
from .representations import (E2, DiscreteSeriesPlus, Oscillator,
                              PrincipalSeries, SU2, build_L, lax_residual)
from .spectral import (degenerate_e2_check, eigs_sym_tridiag,
                       isospectrality_drift, recurrence_residual)

INF = float("inf")


def _res(name, value, tol, note="", passed=None) -> CheckResult:
    if passed is None:
        passed = bool(value <= tol)
    return CheckResult(name, float(value), float(tol), bool(passed), note)


def _info(name, value, note) -> CheckResult:
    return CheckResult(name, float(value), INF, True, note)


# --------------------------------------------------------------------------


def _grp_lax(rng) -> list[CheckResult]:
    cases = [
        ("su2", SU2(2.5), su2(), 0.8, 0.6, 0.3),
        ("discrete", DiscreteSeriesPlus(1.0, 40), su11(), 0.8, 1.2, 0.3),
        ("principal", PrincipalSeries(0.7, 0.3, -25, 25), su11(), 0.8, 1.2, 0.3),
        ("oscillator", Oscillator(0.5, 1.0, 40), oscillator(1.0), 0.8, 0.6, 0.3),
        ("e2", E2(2.0, -25, 25), e2(1.0), 0.8, 0.6, 0.3),
    ]
    # wall time is deliberately not a report row: reports must be
    # byte-reproducible under a fixed seed, and callers who care about the
    # time budget measure it around this call
    out = []
    for tag, rep, alg, r, s, u in cases:
        out.append(_res(f"lax_residual_{tag}", lax_residual(rep, alg, r, s, u), 1e-12))
    return out


def _grp_invariant(rng) -> list[CheckResult]:
    cases = [
        ("su2", su2(), FlowState(0.0, 1.0, 0.0), Toda()),
        ("su11", su11(), FlowState(0.0, 1.0, 1.25), SignedScaled(+1, 1.0)),
        ("oscillator", oscillator(1.0), FlowState(0.0, 2.0, 3.0), Toda()),
        ("e2", e2(1.0), FlowState(0.0, 1.0, 0.5), Toda()),
    ]
    out = []
    for tag, alg, st0, pol in cases:
        traj = integrate(alg, st0, pol, 1e-3, 2.0, record_every=20)
        i0 = traj.invariant[0]
        drift = float(np.abs(traj.invariant - i0).max()) / max(1.0, abs(i0))
        out.append(_res(f"invariant_drift_{tag}", drift, 1e-10))
    return out


def _grp_closed_form(rng) -> list[CheckResult]:
    alg = su2()
    st0 = FlowState(0.0, 1.0, 0.0)
    traj = integrate(alg, st0, Toda(), 1e-3, 1.0)
    err_s = np.abs(traj.s - np.tanh(2.0 * traj.t)).max()
    err_r = np.abs(traj.r - 1.0 / np.cosh(2.0 * traj.t)).max()
    out = [_res("closed_form_orbit_error", max(err_s, err_r), 1e-9)]

    # step-halving contraction of the integrator at t = 1
    ys = []
    for dt in (2e-3, 1e-3, 5e-4):
        tr = integrate(alg, st0, Toda(), dt, 1.0)
        ys.append(np.array([tr.r[-1], tr.s[-1]]))
    num = float(np.abs(ys[0] - ys[1]).max())
    den = float(np.abs(ys[1] - ys[2]).max())
    ratio = num / den if den > 0 else INF
    out.append(_res("rk4_step_halving_ratio", ratio, 12.0,
                    note="pass iff value >= tolerance",
                    passed=ratio >= 12.0))
    return out


def _grp_diagonalization(rng) -> list[CheckResult]:
    out = []

    def run_family(tag, fam, rep, alg, r, s, points, rows, labels):
        params, smap = parameter_map(fam, alg, r, s, **labels)
        L = build_L(rep, alg, r, s)
        tol = 1e-11 * (1.0 + L.inf_norm())
        worst = 0.0
        for x in points:
            lam = smap.eigenvalue(x)
            for n in rows:
                worst = max(worst, recurrence_residual(
                    fam, params, rep, alg, r, s, n, lam))
        out.append(_res(f"diag_residual_{tag}", worst, tol))
        return params, smap, L

    # compact class: finite lattice, exact spectrum.  s = 0 keeps the
    # lattice weight balanced over the 21-point window; a tilted weight
    # inflates the closed-form eigenvector's tail components and with them
    # the attainable absolute-residual floor.
    rep = SU2(10.0)
    alg = su2()
    r, s = 1.0, 0.0
    _, smap, L = run_family("krawtchouk", FamilyTag.KRAWTCHOUK, rep, alg, r, s,
                            range(20), range(21), {"j": 10.0})
    dec = eigs_sym_tridiag(L)
    expected = np.sort([smap.eigenvalue(x) for x in range(21)])
    out.append(_res("su2_spectrum_match",
                    float(np.abs(dec.eigenvalues - expected).max()), 1e-10))

    run_family("meixner", FamilyTag.MEIXNER, DiscreteSeriesPlus(1.0, 60),
               su11(), 1.0, 1.025, range(20), range(31), {"k": 1.0})
    run_family("laguerre", FamilyTag.LAGUERRE, DiscreteSeriesPlus(0.8, 50),
               su11(), 1.3, 1.3, np.linspace(0.3, 12.0, 20), range(26),
               {"k": 0.8})
    run_family("meixner_pollaczek", FamilyTag.MEIXNER_POLLACZEK,
               DiscreteSeriesPlus(1.2, 50), su11(), 2.0, 1.0,
               np.linspace(-4.0, 4.0, 20), range(26), {"k": 1.2})
    run_family("charlier", FamilyTag.CHARLIER, Oscillator(0.5, 1.0, 60),
               oscillator(1.0), 6.0, 0.5, range(20), range(31),
               {"k": 0.5, "h": 1.0})
    run_family("hermite", FamilyTag.HERMITE, Oscillator(0.5, 2.0, 60),
               oscillator(0.0), 1.1, 0.7, np.linspace(-5.0, 5.0, 20),
               range(31), {"k": 0.5, "h": 2.0})
    run_family("bessel", FamilyTag.BESSEL, E2(2.0, -40, 40), e2(1.0),
               1.3, 0.4, range(-9, 11), range(30, 51), {"k": 2.0})

    out.append(_res("flat_fourier_identity", degenerate_e2_check(2.0, 1.3), 1e-13))
    return out


def _grp_isospectrality(rng) -> list[CheckResult]:
    out = []
    alg = su2()
    rep = SU2(2.5)
    traj = integrate(alg, FlowState(0.0, 1.0, 0.0), Toda(), 1e-3, 1.0,
                     record_every=50)
    out.append(_res("isospectral_drift_su2",
                    isospectrality_drift(traj, rep, alg), 1e-8))
    for d in (2, 3, 5):
        st = ChainState(0.0,
                        tuple(rng.uniform(-0.5, 0.5, d)),
                        tuple(rng.uniform(0.5, 1.5, d)))
        ctraj = integrate_chain(st, 1.0, 1e-3, 1.0, record_every=100)
        out.append(_res(f"isospectral_drift_chain_d{d}",
                        chain_isospectrality_drift(ctraj), 1e-8))
    return out


def _grp_modification(rng) -> list[CheckResult]:
    out = []
    runs = [
        ("krawtchouk", su2(), FlowState(0.0, 1.0, 0.0), Toda(), 1e-3, 1.0),
        ("meixner", su11(), FlowState(0.0, 1.0, 1.25), SignedScaled(-1, 1.0), 1e-4, 0.2),
        ("laguerre", su11(), FlowState(0.0, 1.3, 1.3), SignedScaled(-1, 1.0), 1e-4, 0.2),
        ("meixner_pollaczek", su11(), FlowState(0.0, 2.0, 1.0), SignedScaled(-1, 1.0), 1e-4, 0.2),
        ("charlier", oscillator(1.0), FlowState(0.0, 2.0, 3.0), Toda(), 1e-3, 1.0),
        ("hermite", oscillator(0.0), FlowState(0.0, 1.1, 0.7), Toda(), 1e-3, 1.0),
    ]
    for fam, alg, st0, pol, dt, t_end in runs:
        traj = integrate(alg, st0, pol, dt, t_end)
        rep = modification_report(alg, traj, fam)
        out.append(_res(f"modification_constancy_{fam}",
                        rep.max_constancy_deviation, 1e-6))
        out.append(_res(f"modification_closed_form_{fam}",
                        rep.closed_form_max_error, 1e-6))
        if fam == "krawtchouk":
            out.append(_res("modification_rate_krawtchouk",
                            abs(rep.K_empirical - rep.K_expected), 1e-5,
                            note=f"rate {rep.K_empirical:.9g} vs 4C"))
        elif rep.K_expected is None:
            out.append(_info(f"modification_rate_{fam}", rep.K_empirical,
                             "empirical slope is twice the circulated "
                             "derivation; constancy gated, slope flagged"))
        else:
            out.append(_res(f"modification_rate_{fam}",
                            abs(rep.K_empirical - rep.K_expected), 1e-4,
                            note=f"rate {rep.K_empirical:.9g} vs "
                                 f"{rep.K_expected:.9g}"))
    return out


def _grp_meixner_functions(rng) -> list[CheckResult]:
    params = MeixnerFunctionParams(0.7, 0.3, 0.2)
    worst = 0.0
    for trial in range(50):
        n = int(rng.integers(-8, 9))
        if trial % 2 == 0:
            x = float(rng.integers(-8, 9))
        else:
            x = float(rng.uniform(-6.0, 6.0))
        worst = max(worst, meixner_function_recurrence_residual(n, x, params))
    out = [_res("meixner_function_recurrence", worst, 1e-6)]

    orders = range(-2, 3)
    xs = range(-40, 41)
    vals = {n: np.array([meixner_function(n, float(x), params) for x in xs])
            for n in orders}
    w = np.array([weight(FamilyTag.MEIXNER_FUNCTION, params, float(x)) for x in xs])
    gram = {(n, m): float(np.sum(w * vals[n] * vals[m]))
            for n in orders for m in orders}
    worst = 0.0
    for n in orders:
        for m in orders:
            if n == m:
                continue
            worst = max(worst, abs(gram[(n, m)])
                        / math.sqrt(gram[(n, n)] * gram[(m, m)]))
    out.append(_res("meixner_function_orthogonality", worst, 1e-4))
    return out


def _grp_chain(rng) -> list[CheckResult]:
    d = 4
    st = ChainState(0.0, tuple(rng.uniform(-0.5, 0.5, d)),
                    tuple(rng.uniform(0.5, 1.5, d)))
    out = []
    lam = chain_spectrum(st)
    out.append(_res("chain_trace_zero", abs(float(lam.sum())), 1e-12))

    cw = christoffel_weights(st)
    eye = np.eye(d + 1)
    out.append(_res("chain_orthogonality",
                    float(np.abs(cw.Q.T @ cw.Q - eye).max()), 1e-12))
    out.append(_res("chain_dual_orthogonality",
                    float(np.abs(cw.Q @ cw.Q.T - eye).max()), 1e-12))

    dL, oL = build_chain_L(st)
    dec = eigs_sym_tridiag(TridiagonalOperator(0, dL, oL))
    out.append(_res("chain_weights_dual_route",
                    float(np.abs(np.sort(cw.weights) - np.sort(dec.weights)).max()),
                    1e-12))

    tr = trace_invariants(st)
    for k, closed, dense in ((2, tr.tr2, tr.tr2_dense), (3, tr.tr3, tr.tr3_dense),
                             (4, tr.tr4, tr.tr4_dense)):
        out.append(_res(f"chain_trace{k}_closed_vs_dense",
                        abs(closed - dense) / (1.0 + abs(dense)), 1e-10))

    gap = abs(tr.tr2_unit_variant - tr.tr2_dense)
    out.append(_res("chain_trace2_unit_variant_detected", gap, 0.1,
                    note="variant lacking the factor 2 on sum r_i^2 differs "
                         "from the dense trace, as it must",
                    passed=gap > 0.1))

    ctraj = integrate_chain(st, 1.0, 1e-3, 1.0, record_every=100)
    worst = {2: 0.0, 3: 0.0, 4: 0.0}
    ref = None
    for i in range(len(ctraj)):
        tri = trace_invariants(ctraj.state(i))
        cur = {2: tri.tr2_dense, 3: tri.tr3_dense, 4: tri.tr4_dense}
        if ref is None:
            ref = cur
        else:
            for k in worst:
                worst[k] = max(worst[k],
                               abs(cur[k] - ref[k]) / (1.0 + abs(ref[k])))
    for k in (2, 3, 4):
        out.append(_res(f"chain_trace{k}_flow_drift", worst[k], 1e-9))
    return out


def _grp_mvk(rng) -> list[CheckResult]:
    out = []
    for d, N in ((2, 2), (2, 3), (3, 2)):
        st = ChainState(0.0, tuple(rng.uniform(-0.5, 0.5, d)),
                        tuple(rng.uniform(0.5, 1.5, d)))
        table = mvk_table(st, N)
        p0_err = max(abs(table.P((N,) + (0,) * d, rho) - 1.0)
                     for rho in table.indices)
        out.append(_res(f"mvk_base_entry_d{d}N{N}", p0_err, 1e-15))
        primal, dual = mvk_orthogonality_check(table)
        out.append(_res(f"mvk_orthogonality_d{d}N{N}", primal, 1e-9))
        out.append(_res(f"mvk_dual_orthogonality_d{d}N{N}", dual, 1e-9))
        out.append(_res(f"mvk_recurrence_d{d}N{N}",
                        mvk_recurrence_check(table, st), 1e-9))

        table1 = mvk_table(st, 1)
        lam = table1.eigenvalues
        worst = 0.0
        for i in range(d + 1):
            p_i = [eigen_polys(st, float(lam[jj]))[0][i] for jj in range(d + 1)]
            for jj in range(d + 1):
                worst = max(worst, abs(table1.P(unit_index(d + 1, i),
                                                unit_index(d + 1, jj)) - p_i[jj]))
        out.append(_res(f"mvk_degree_one_match_d{d}", worst, 1e-12))
    return out


def _grp_time_derivative(rng) -> list[CheckResult]:
    out = []
    st = ChainState(0.0, (0.3, -0.2, 0.4), (1.0, 0.8, 1.2))
    rep_eig = pn_time_derivative_check(st, 1.0, lam=None, h=1e-4)
    out.append(_res("pn_derivative_eigenvalue", rep_eig.max_residual, 1e-6))
    out.append(_res("pn_derivative_order", rep_eig.order_estimate, 1.9,
                    note="pass iff value >= tolerance",
                    passed=rep_eig.order_estimate >= 1.9))
    out.append(_info("pn_derivative_sign_flipped", rep_eig.sign_flipped_residual,
                     "variant with negated right-hand signs; fails by design"))
    rep_any = pn_time_derivative_check(st, 1.0, lam=0.37, h=1e-4)
    out.append(_res("pn_derivative_polynomial_identity", rep_any.max_residual, 1e-6))

    st2 = ChainState(0.0, (0.3, -0.2), (1.0, 0.8))
    mrep = mvk_time_derivative_check(st2, 1.0, 2, h=1e-4)
    out.append(_res("mvk_derivative_eigenvector", mrep.max_residual, 1e-6))
    out.append(_res("mvk_derivative_order", mrep.order_estimate, 1.9,
                    note="pass iff value >= tolerance",
                    passed=mrep.order_estimate >= 1.9))
    out.append(_info("mvk_derivative_display_variant",
                     mrep.display_variant_residual,
                     "variant with constant N u_1 lacking the table-entry "
                     "prefactor; reported, not gated"))
    return out


def _grp_reduction(rng) -> list[CheckResult]:
    out = []
    for s, r, d, N in ((0.6, 0.8, 2, 2), (0.3, 1.1, 3, 2)):
        res_pn, res_sum = krawtchouk_reduction_check(s, r, d, N)
        out.append(_res(f"reduction_pn_match_d{d}", res_pn, 1e-10))
        out.append(_res(f"reduction_sum_identity_d{d}N{N}", res_sum, 1e-9))
    return out


GROUPS = {
    "lax": _grp_lax,
    "invariant": _grp_invariant,
    "closed_form": _grp_closed_form,
    "diagonalization": _grp_diagonalization,
    "isospectrality": _grp_isospectrality,
    "modification": _grp_modification,
    "meixner_functions": _grp_meixner_functions,
    "chain": _grp_chain,
    "mvk": _grp_mvk,
    "time_derivative": _grp_time_derivative,
    "reduction": _grp_reduction,
}


def run_verify(only: str | None = None, seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Run the suite (or a single named group) with per-group seeded
    randomness, so a group produces identical numbers alone or in the full
    run."""
    names = list(GROUPS)
    if only is not None:
        if only not in GROUPS:
            raise KeyError(f"unknown group {only!r}; choose from {names}")
        names = [only]
    order = list(GROUPS)
    results: list[CheckResult] = []
    for name in names:
        rng = np.random.default_rng([seed, order.index(name)])
        results.extend(GROUPS[name](rng))
    return results
