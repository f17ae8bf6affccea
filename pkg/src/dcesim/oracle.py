"""Closed-form predictions used to validate simulations.

These are pure functions of the physical parameters; none of them calls
simulation code, so they remain independent cross-checks.  Each function
documents whether it takes the bare modulation rate beta0 = eps/4 (valid
at zero resonance shift) or the shifted rate beta_r = (1 + r/w0) eps/4.
Evaluating a form outside its validity domain raises ``ValidityError``
rather than extrapolating silently.
"""

from __future__ import annotations

import math
from typing import Tuple


class ValidityError(ValueError):
    """A closed form was evaluated outside its stated validity domain."""


def empty_cavity_mean_n(beta0: float, t: float) -> float:
    """<n(t)> = sinh^2(2 beta0 t) for the empty cavity at r = 0."""
    return math.sinh(2.0 * beta0 * t) ** 2


def empty_cavity_variances(beta0: float, t: float) -> Tuple[float, float]:
    """Squeezed-vacuum variances (e^{4 beta0 t}/2, e^{-4 beta0 t}/2) at r = 0."""
    return math.exp(4.0 * beta0 * t) / 2.0, math.exp(-4.0 * beta0 * t) / 2.0


def empty_cavity_mandel_q(mean_n: float) -> float:
    """Q = 1 + 2<n> for the squeezed vacuum (thermal light has Q = <n>)."""
    if mean_n <= 0.0:
        raise ValidityError("Q of the squeezed vacuum needs <n> > 0")
    return 1.0 + 2.0 * mean_n


def oscillator_gamma(g: float, beta0: float) -> float:
    """gamma = sqrt(g^2 - beta0^2); real only for g > beta0."""
    if abs(g) <= abs(beta0):
        raise ValidityError(
            f"gamma is imaginary for |g| = {abs(g):.3g} <= |beta0| = {abs(beta0):.3g}; "
            "the cited closed form does not cover this regime"
        )
    return math.sqrt(g**2 - beta0**2)


def ho_variances(g: float, beta0: float, t: float) -> Tuple[float, float]:
    """Quadrature variances with a harmonic-oscillator detector at r = 0.

    <(dx_+-)^2> = e^{+-2 beta0 t} (1/2 +- (beta0/2 gamma) sin(2 gamma t)
                  + (beta0^2/gamma^2) sin^2(gamma t)).
    Takes the bare beta0; requires g > beta0.
    """
    gamma = oscillator_gamma(g, beta0)
    osc = (beta0 / (2.0 * gamma)) * math.sin(2.0 * gamma * t)
    quad = (beta0**2 / gamma**2) * math.sin(gamma * t) ** 2
    plus = math.exp(2.0 * beta0 * t) * (0.5 + osc + quad)
    minus = math.exp(-2.0 * beta0 * t) * (0.5 - osc + quad)
    return plus, minus


def ho_uncertainty_product(g: float, beta0: float, t: float) -> float:
    """<(dp)^2><(dx)^2> = 1/4 + (g beta0 / gamma^2)^2 sin^4(gamma t)."""
    gamma = oscillator_gamma(g, beta0)
    return 0.25 + (g * beta0 / gamma**2) ** 2 * math.sin(gamma * t) ** 4


def ho_shifted_resonance_mean_n(beta0: float, t: float) -> float:
    """<n(t)> = sinh^2(beta0 t)/2 at the shifted resonances r = +-g.

    Half the r = 0 growth exponent: the pair flux feeds two normal modes.
    """
    return math.sinh(beta0 * t) ** 2 / 2.0


def three_level_oscillation_frequency(g1: float, g2: float, beta_r: float) -> float:
    """Two-state coupling |V| = beta_r (1 + g2^2/(2 g1^2))^{-1/2} at 2r = +-lambda_2.

    This is the squeeze-operator matrix element between |1,0> and the
    degenerate m = 2 dressed state, beta_r*sqrt(2)*g1/lambda_2; the
    population of |1,0> returns with period pi/|V| (the cos^2 cycle).
    Takes the shifted beta_r.
    """
    if g1 == 0.0:
        raise ValidityError("oscillation frequency undefined for g1 = 0")
    return beta_r / math.sqrt(1.0 + (g2**2) / (2.0 * g1**2))


def dispersive_shift(g1: float, delta1: float) -> float:
    """Cavity dispersive shift delta = g1^2 / Delta_1."""
    if delta1 == 0.0:
        raise ValidityError("dispersive shift undefined at Delta_1 = 0")
    return g1**2 / delta1


def dispersive_regime_holds(g1: float, delta1: float, n: int,
                            margin: float = 10.0) -> bool:
    """True when (Delta_1/2)^2 >= margin * g1^2 n, i.e. the dispersive
    expansion of z_n is trustworthy up to n excitations."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return (delta1 / 2.0) ** 2 >= margin * g1**2 * n
