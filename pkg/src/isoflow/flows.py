"""Coupled flow for the rank-1 Lax pair and the weight-modification law.

The system is

    sdot = 2 epsilon r u,        rdot = -2 (a s + c) u,

with u(t) supplied by a policy (Toda: u = r; or u = sigma * gamma(t) * r).
The function I(r,s) = epsilon r^2 + (a s + 2c) s is conserved.  Along a flow
the orthogonality weight of the diagonalizing family picks up a factor
m(t)^x with m(t) = exp(K * int_0^t u/r); per family m(t) also has a closed
form A0 * F(r(t), s(t)), which ``modification_report`` checks by measuring
g(t) = r (ln m)' / u and its constancy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import AlgebraSpec


class IntegrationBlowupError(RuntimeError):
    """Non-finite state encountered; carries the last good sample."""

    def __init__(self, message: str, last_state: "FlowState"):
        super().__init__(message)
        self.last_state = last_state


class DegenerateRatioError(ZeroDivisionError):
    """r or u vanished on the grid where a ratio was required."""


@dataclass(frozen=True)
class FlowState:
    t: float
    r: float
    s: float


# --------------------------------------------------------------------------
# u-policies


@dataclass(frozen=True)
class Toda:
    """u = r."""

    def __call__(self, t: float, r: float) -> float:
        return r


@dataclass(frozen=True)
class SignedScaled:
    """u = sigma * gamma(t) * r with gamma > 0 constant or a sampled table
    (linear interpolation between samples)."""

    sigma: int
    gamma: float | tuple[tuple[float, ...], tuple[float, ...]] = 1.0

    def __post_init__(self):
        if self.sigma not in (+1, -1):
            raise ValueError(f"sigma must be +1 or -1, got {self.sigma}")
        if isinstance(self.gamma, (int, float)):
            if self.gamma <= 0:
                raise ValueError("gamma must be positive")
        else:
            ts, vals = self.gamma
            if len(ts) != len(vals) or len(ts) < 2:
                raise ValueError("gamma table needs matching t/value samples")
            if any(v <= 0 for v in vals):
                raise ValueError("gamma must be positive")

    def gamma_at(self, t: float) -> float:
        if isinstance(self.gamma, (int, float)):
            return float(self.gamma)
        ts, vals = self.gamma
        return float(np.interp(t, ts, vals))

    def __call__(self, t: float, r: float) -> float:
        return self.sigma * self.gamma_at(t) * r


UPolicy = Toda | SignedScaled


def policy_sigma(policy: UPolicy) -> int:
    return +1 if isinstance(policy, Toda) else policy.sigma


# --------------------------------------------------------------------------
# the flow


def flow_rhs(alg: AlgebraSpec, state: FlowState, u: float) -> tuple[float, float]:
    """(sdot, rdot) = (2 epsilon r u, -2 (a s + c) u)."""
    return 2.0 * alg.epsilon * state.r * u, -2.0 * (alg.a * state.s + alg.c_param) * u


def invariant(alg: AlgebraSpec, state: FlowState) -> float:
    """I = epsilon r^2 + (a s + 2c) s, conserved along the flow."""
    return alg.epsilon * state.r ** 2 + (alg.a * state.s + 2.0 * alg.c_param) * state.s


@dataclass(frozen=True)
class Trajectory:
    """Uniform-grid samples of the flow: (t_i, r_i, s_i, u_i, I_i)."""

    t: np.ndarray
    r: np.ndarray
    s: np.ndarray
    u: np.ndarray
    invariant: np.ndarray

    def __len__(self) -> int:
        return len(self.t)

    def state(self, i: int) -> FlowState:
        return FlowState(float(self.t[i]), float(self.r[i]), float(self.s[i]))


def integrate(alg: AlgebraSpec, state0: FlowState, policy: UPolicy,
              dt: float, t_end: float, record_every: int = 1) -> Trajectory:
    """Classical fixed-step RK4 for (r, s); u is re-sampled at every stage.

    Records every ``record_every``-th step (always including the first and
    last sample).  Raises IntegrationBlowupError on non-finite state.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end < state0.t:
        raise ValueError("t_end must not precede the initial time")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")

    n_steps = int(round((t_end - state0.t) / dt))

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        r, s = y
        u = policy(t, r)
        sd, rd = flow_rhs(alg, FlowState(t, r, s), u)
        return np.array([rd, sd])

    ts, rs, ss = [state0.t], [state0.r], [state0.s]
    y = np.array([state0.r, state0.s], dtype=float)
    t = state0.t
    for i in range(n_steps):
        # overflow on the way to a detected blow-up is expected; the
        # non-finite check below turns it into IntegrationBlowupError
        with np.errstate(over="ignore", invalid="ignore"):
            k1 = rhs(t, y)
            k2 = rhs(t + dt / 2, y + dt / 2 * k1)
            k3 = rhs(t + dt / 2, y + dt / 2 * k2)
            k4 = rhs(t + dt, y + dt * k3)
            y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = state0.t + (i + 1) * dt
        if not np.all(np.isfinite(y)):
            raise IntegrationBlowupError(
                f"flow blew up near t = {t:.6g}",
                FlowState(float(ts[-1]), float(rs[-1]), float(ss[-1])))
        if (i + 1) % record_every == 0 or i == n_steps - 1:
            ts.append(t)
            rs.append(float(y[0]))
            ss.append(float(y[1]))

    t_arr = np.array(ts)
    r_arr = np.array(rs)
    s_arr = np.array(ss)
    u_arr = np.array([policy(ti, ri) for ti, ri in zip(t_arr, r_arr)])
    i_arr = np.array([invariant(alg, FlowState(ti, ri, si))
                      for ti, ri, si in zip(t_arr, r_arr, s_arr)])
    return Trajectory(t_arr, r_arr, s_arr, u_arr, i_arr)


# --------------------------------------------------------------------------
# diagnostics


@dataclass(frozen=True)
class SignConditionReport:
    passed: bool
    sigma_required: int
    sigma_given: int
    initial_ok: bool
    min_r: float
    min_s: float


def check_sign_conditions(alg: AlgebraSpec, state0: FlowState, policy: UPolicy,
                          dt: float = 1e-3, t_end: float = 1.0) -> SignConditionReport:
    """Positivity diagnostic: requires r(0) > 0, s(0) > 0 and the policy sign
    sgn(u) = epsilon * sgn(r); then integrates and reports min r, min s."""
    sigma_req = alg.required_sign()
    sigma_given = policy_sigma(policy)
    initial_ok = state0.r > 0 and state0.s > 0
    hypotheses = initial_ok and sigma_given == sigma_req
    try:
        traj = integrate(alg, state0, policy, dt, state0.t + max(t_end - state0.t, dt))
        min_r = float(traj.r.min())
        min_s = float(traj.s.min())
    except IntegrationBlowupError:
        min_r = min_s = float("-inf")
    passed = hypotheses and min_r > 0 and min_s > 0
    return SignConditionReport(passed, sigma_req, sigma_given, initial_ok, min_r, min_s)


_CLOSED_FORMS: dict[str, Callable[[float, float, float], float]] = {
    # family -> F(r, s, C) with m(t) = A0 * F
    "krawtchouk": lambda r, s, C: (C + s) / (C - s),
    "meixner": lambda r, s, C: math.exp(-2.0 * math.acosh(s / r)),
    "laguerre": lambda r, s, C: math.exp(-1.0 / r),
    "meixner_pollaczek": lambda r, s, C: math.exp(2.0 * math.acos(s / r)),
    "charlier": lambda r, s, C: r * r,
    "hermite": lambda r, s, C: math.exp(s / r),
}

# K = g(t) predicted from the flow equations; None where the derivation in
# circulation carries a sign inconsistency and only constancy is asserted.
_K_EXPECTED: dict[str, Callable[[AlgebraSpec, Trajectory, float], float | None]] = {
    "krawtchouk": lambda alg, tr, C: 4.0 * C,
    "meixner": lambda alg, tr, C: -4.0 * C,
    "laguerre": lambda alg, tr, C: None,
    "meixner_pollaczek": lambda alg, tr, C: 4.0 * C,
    "charlier": lambda alg, tr, C: -4.0 * alg.c_param,
    "hermite": lambda alg, tr, C: 2.0 * float(tr.r[0]),
}


@dataclass(frozen=True)
class ModificationReport:
    family: str
    K_empirical: float
    max_constancy_deviation: float
    closed_form_max_error: float
    K_expected: float | None


def modification_report(alg: AlgebraSpec, traj: Trajectory, family: str) -> ModificationReport:
    """Check the closed-form weight-modification factor along a trajectory.

    Computes m_i = F(r_i, s_i) from the family's closed form, then
    g_i = r_i * (ln m)'_i / u_i by centered differences, the empirical
    constant K = mean(g), the worst deviation of g from K, and the worst
    relative error of m(t)/m(0) against exp(K * int_0^t u/r d tau)
    (trapezoid quadrature on the same grid).
    """
    if family not in _CLOSED_FORMS:
        raise KeyError(f"no closed-form modification for family {family!r}")
    if len(traj) < 3:
        raise ValueError("trajectory too short for centered differences")
    if np.any(np.abs(traj.r) < 1e-300) or np.any(np.abs(traj.u) < 1e-300):
        raise DegenerateRatioError("r or u vanishes on the grid")

    i0 = invariant(alg, traj.state(0))
    C = math.sqrt(abs(i0)) if abs(i0) > 0 else 0.0
    f = _CLOSED_FORMS[family]
    ln_m = np.array([math.log(f(r, s, C)) for r, s in zip(traj.r, traj.s)])
    dt = np.diff(traj.t)
    if not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
        raise ValueError("modification check needs a uniform grid")
    h = float(dt[0])

    dln = (ln_m[2:] - ln_m[:-2]) / (2.0 * h)
    g = traj.r[1:-1] * dln / traj.u[1:-1]
    k_emp = float(g.mean())
    max_dev = float(np.abs(g - k_emp).max())

    # trapezoid primitive of u/r, then compare normalized closed form
    ratio = traj.u / traj.r
    primitive = np.concatenate(([0.0], np.cumsum((ratio[1:] + ratio[:-1]) / 2.0 * np.diff(traj.t))))
    m_cf = np.exp(ln_m - ln_m[0])
    m_int = np.exp(k_emp * primitive)
    cf_err = float(np.abs(m_cf / m_int - 1.0).max())

    k_exp = _K_EXPECTED[family](alg, traj, C)
    return ModificationReport(family, k_emp, max_dev, cf_err, k_exp)


def write_trajectory_csv(path, traj: Trajectory) -> None:
    """CSV with header t,r,s,u,I at 17 significant digits."""
    with open(path, "w", newline="") as fh:
        fh.write("t,r,s,u,I\n")
        for i in range(len(traj)):
            fh.write(",".join("%.17g" % v for v in
                              (traj.t[i], traj.r[i], traj.s[i], traj.u[i], traj.invariant[i])))
            fh.write("\n")
