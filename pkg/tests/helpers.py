"""Independent oracles and state constructors shared by the tests.

Everything here is deliberately simple and dense: closed-form Fock
amplitudes and a brute-force master-equation integrator that never touches
the production evolution path.
"""

import numpy as np
import scipy.sparse as sp
from math import lgamma, tanh, cosh

from dcesim import HilbertSpace, StateVector


def squeezed_vacuum(space: HilbertSpace, xi: float) -> StateVector:
    """Exact squeezed vacuum with squeeze parameter xi.

    Sign convention matches evolution under H = i*beta*(a^dag^2 - a^2)
    (which squeezes x_-): even amplitudes are positive,
    c_2k = tanh(xi)^k sqrt((2k)!)/(2^k k!) / sqrt(cosh(xi)).
    Mean photon number sinh(xi)^2.
    """
    if space.n_levels != 1:
        raise ValueError("squeezed vacuum helper is single-factor")
    ks = np.arange(0, space.n_max // 2 + 1)
    logc = (ks * np.log(tanh(xi)) + 0.5 * _lg(2 * ks + 1)
            - ks * np.log(2.0) - _lg(ks + 1) - 0.5 * np.log(cosh(xi)))
    amps = np.zeros(space.dim, dtype=np.complex128)
    amps[2 * ks] = np.exp(logc)
    amps /= np.linalg.norm(amps)
    return StateVector(amps, space)


def coherent_state(space: HilbertSpace, alpha: complex) -> StateVector:
    ns = np.arange(space.n_max + 1)
    log_mag = ns * np.log(abs(alpha) + 1e-300) - 0.5 * _lg(ns + 1)
    phase = np.angle(alpha) * ns
    amps = np.zeros(space.dim, dtype=np.complex128)
    amps[: space.n_max + 1] = np.exp(log_mag) * np.exp(1j * phase)
    amps /= np.linalg.norm(amps)
    return StateVector(amps, space)


def thermal_statistics_state(space: HilbertSpace, nbar: float) -> StateVector:
    """Pure state whose photon distribution is thermal (geometric)."""
    ns = np.arange(space.n_max + 1)
    p = (nbar / (1.0 + nbar)) ** ns / (1.0 + nbar)
    amps = np.zeros(space.dim, dtype=np.complex128)
    amps[: space.n_max + 1] = np.sqrt(p)
    amps /= np.linalg.norm(amps)
    return StateVector(amps, space)


def _lg(x):
    return np.vectorize(lgamma)(x)


def master_equation_evolve(h_matrix, jump_matrices, rho0, t_end, dt,
                           record_every):
    """Dense RK4 integration of drho/dt = -i[H,rho] + sum(L rho L+ - {L+L,rho}/2).

    Returns (times, [rho(t)]).  Test oracle only; independent of the
    trajectory machinery it validates.
    """
    h = np.asarray(h_matrix.todense() if sp.issparse(h_matrix) else h_matrix,
                   dtype=complex)
    ls = [np.asarray(m.todense() if sp.issparse(m) else m, dtype=complex)
          for m in jump_matrices]
    big_r = sum(l.conj().T @ l for l in ls) if ls else np.zeros_like(h)

    def rhs(rho):
        out = -1j * (h @ rho - rho @ h)
        for l in ls:
            out += l @ rho @ l.conj().T
        return out - 0.5 * (big_r @ rho + rho @ big_r)

    rho = np.asarray(rho0, dtype=complex).copy()
    nsteps = int(round(t_end / dt))
    times, rhos = [0.0], [rho.copy()]
    for step in range(nsteps):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * dt * k1)
        k3 = rhs(rho + 0.5 * dt * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        if (step + 1) % record_every == 0 or step + 1 == nsteps:
            times.append((step + 1) * dt)
            rhos.append(rho.copy())
    return np.asarray(times), rhos
