"""Structure constants of the four-dimensional Lie algebra family g(a,b).

The brackets are [E,F] = aH + bN, [H,E] = 2E, [H,F] = -2F with N central,
and the involution is H* = H, N* = N, E* = epsilon * F.  The Lax operators
built everywhere else are

    L = c*H + s*(a*H + b*N) + r*(E + E*),      M = u*(E - E*).

Specializations: (a,b) = (1,0) with epsilon = +1 is su(2), with epsilon = -1
su(1,1); (0,1) is the oscillator algebra; (0,0) is e(2).
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class AlgebraSpec:
    a: float
    b: float
    c_param: float
    epsilon: int

    def __post_init__(self):
        if self.epsilon not in (+1, -1):
            raise ValueError(f"epsilon must be +1 or -1, got {self.epsilon!r}")

    @property
    def clas(self) -> str:
        """Isomorphism-class label determined by (a, b, epsilon)."""
        if self.a != 0.0:
            return "su2" if self.epsilon == +1 else "su11"
        if self.b != 0.0:
            return "oscillator"
        return "e2"

    def required_sign(self) -> int:
        """Sign coupling sgn(u) = required_sign * sgn(r) under which the
        positivity statements for r(t), s(t) hold (epsilon in every class)."""
        return self.epsilon


def su2(c: float = 0.0) -> AlgebraSpec:
    return AlgebraSpec(a=1.0, b=0.0, c_param=c, epsilon=+1)


def su11(c: float = 0.0) -> AlgebraSpec:
    return AlgebraSpec(a=1.0, b=0.0, c_param=c, epsilon=-1)


def oscillator(c: float = 1.0) -> AlgebraSpec:
    return AlgebraSpec(a=0.0, b=1.0, c_param=c, epsilon=+1)


def e2(c: float = 1.0) -> AlgebraSpec:
    return AlgebraSpec(a=0.0, b=0.0, c_param=c, epsilon=+1)
