"""Fixed-step RK4 stepping kernels.

The static-generator loop is JIT compiled; matrices enter as raw CSR
arrays so the hot loop is a single fused pass.  Status codes: 0 ok,
1 per-step norm drift above tolerance (renormalizing path), 2 squared
norm under the extinction floor (non-renormalizing path).
"""

from __future__ import annotations

import numba
import numpy as np

STATUS_OK = 0
STATUS_DRIFT = 1
STATUS_UNDERFLOW = 2


@numba.njit(cache=True)
def _matvec(data, indices, indptr, x, out):
    for i in range(x.shape[0]):
        acc = 0.0 + 0.0j
        for p in range(indptr[i], indptr[i + 1]):
            acc += data[p] * x[indices[p]]
        out[i] = acc


@numba.njit(cache=True)
def rk4_static_steps(data, indices, indptr, psi, dt, nsteps,
                     renormalize, drift_tol, norm2_floor):
    """Advance dpsi/dt = G psi in place by ``nsteps`` RK4 steps.

    Returns (status, steps_done, info): info is the offending drift for
    STATUS_DRIFT or the squared norm for STATUS_UNDERFLOW.
    """
    n = psi.shape[0]
    k1 = np.empty(n, np.complex128)
    k2 = np.empty(n, np.complex128)
    k3 = np.empty(n, np.complex128)
    k4 = np.empty(n, np.complex128)
    tmp = np.empty(n, np.complex128)
    sixth = dt / 6.0
    half = dt / 2.0
    for step in range(nsteps):
        _matvec(data, indices, indptr, psi, k1)
        for i in range(n):
            tmp[i] = psi[i] + half * k1[i]
        _matvec(data, indices, indptr, tmp, k2)
        for i in range(n):
            tmp[i] = psi[i] + half * k2[i]
        _matvec(data, indices, indptr, tmp, k3)
        for i in range(n):
            tmp[i] = psi[i] + dt * k3[i]
        _matvec(data, indices, indptr, tmp, k4)
        nrm2 = 0.0
        for i in range(n):
            psi[i] = psi[i] + sixth * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i])
            nrm2 += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
        if renormalize:
            drift = abs(np.sqrt(nrm2) - 1.0)
            if drift > drift_tol:
                return STATUS_DRIFT, step + 1, drift
            inv = 1.0 / np.sqrt(nrm2)
            for i in range(n):
                psi[i] *= inv
        elif nrm2 < norm2_floor:
            return STATUS_UNDERFLOW, step + 1, nrm2
    return STATUS_OK, nsteps, 0.0


@numba.njit(cache=True)
def _apply_exp_generator(sdata, sind, sptr, pdata, pind, pptr, poff,
                         amps, freqs, t, x, out):
    """out = G(t) x for G(t) = S + sum_k amps[k] e^{i freqs[k] t} P_k."""
    n = x.shape[0]
    for i in range(n):
        acc = 0.0 + 0.0j
        for p in range(sptr[i], sptr[i + 1]):
            acc += sdata[p] * x[sind[p]]
        out[i] = acc
    for k in range(amps.shape[0]):
        c = amps[k] * np.exp(1j * freqs[k] * t)
        off = poff[k]
        for i in range(n):
            acc = 0.0 + 0.0j
            for p in range(pptr[k, i], pptr[k, i + 1]):
                acc += pdata[off + p] * x[pind[off + p]]
            out[i] += c * acc


@numba.njit(cache=True)
def rk4_exp_steps(sdata, sind, sptr, pdata, pind, pptr, poff, amps, freqs,
                  psi, t0, dt, nsteps, renormalize, drift_tol, norm2_floor):
    """RK4 stepping for a generator with exponential-envelope parts.

    Same contract as :func:`rk4_static_steps`; the part matrices are
    concatenated CSR arrays with per-part offsets ``poff`` into
    data/indices and a stacked ``pptr`` of shape (K, n+1).
    """
    n = psi.shape[0]
    k1 = np.empty(n, np.complex128)
    k2 = np.empty(n, np.complex128)
    k3 = np.empty(n, np.complex128)
    k4 = np.empty(n, np.complex128)
    tmp = np.empty(n, np.complex128)
    sixth = dt / 6.0
    half = dt / 2.0
    for step in range(nsteps):
        t = t0 + step * dt
        _apply_exp_generator(sdata, sind, sptr, pdata, pind, pptr, poff,
                             amps, freqs, t, psi, k1)
        for i in range(n):
            tmp[i] = psi[i] + half * k1[i]
        _apply_exp_generator(sdata, sind, sptr, pdata, pind, pptr, poff,
                             amps, freqs, t + half, tmp, k2)
        for i in range(n):
            tmp[i] = psi[i] + half * k2[i]
        _apply_exp_generator(sdata, sind, sptr, pdata, pind, pptr, poff,
                             amps, freqs, t + half, tmp, k3)
        for i in range(n):
            tmp[i] = psi[i] + dt * k3[i]
        _apply_exp_generator(sdata, sind, sptr, pdata, pind, pptr, poff,
                             amps, freqs, t + dt, tmp, k4)
        nrm2 = 0.0
        for i in range(n):
            psi[i] = psi[i] + sixth * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i])
            nrm2 += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
        if renormalize:
            drift = abs(np.sqrt(nrm2) - 1.0)
            if drift > drift_tol:
                return STATUS_DRIFT, step + 1, drift
            inv = 1.0 / np.sqrt(nrm2)
            for i in range(n):
                psi[i] *= inv
        elif nrm2 < norm2_floor:
            return STATUS_UNDERFLOW, step + 1, nrm2
    return STATUS_OK, nsteps, 0.0


def pack_exp_parts(parts):
    """Concatenate part CSR matrices for :func:`rk4_exp_steps`.

    ``parts`` is a sequence of (csr_matrix, amplitude, frequency); returns
    (pdata, pind, pptr, poff, amps, freqs).
    """
    if not parts:
        n = 0
        return (np.empty(0, np.complex128), np.empty(0, np.int32),
                np.empty((0, 1), np.int32), np.empty(0, np.int64),
                np.empty(0, np.complex128), np.empty(0, np.float64))
    mats = [m.tocsr() for m, _, _ in parts]
    for m in mats:
        m.sort_indices()
    pdata = np.concatenate([m.data.astype(np.complex128) for m in mats])
    pind = np.concatenate([m.indices for m in mats]).astype(np.int64)
    pptr = np.stack([m.indptr.astype(np.int64) for m in mats])
    poff = np.concatenate([[0], np.cumsum([m.nnz for m in mats])])[:-1].astype(np.int64)
    amps = np.array([a for _, a, _ in parts], np.complex128)
    freqs = np.array([f for _, _, f in parts], np.float64)
    return pdata, pind, pptr, poff, amps, freqs


def rk4_time_dependent_steps(generator, t0, dt, nsteps, psi,
                             renormalize, drift_tol, norm2_floor):
    """Same contract as :func:`rk4_static_steps` for a time-dependent
    generator callable ``generator(t, psi) -> dpsi/dt``.

    Envelopes are re-evaluated at the substep times t, t + dt/2, t + dt.
    """
    t = t0
    for step in range(nsteps):
        k1 = generator(t, psi)
        k2 = generator(t + dt / 2.0, psi + (dt / 2.0) * k1)
        k3 = generator(t + dt / 2.0, psi + (dt / 2.0) * k2)
        k4 = generator(t + dt, psi + dt * k3)
        psi += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        nrm2 = float(np.real(np.vdot(psi, psi)))
        if renormalize:
            drift = abs(np.sqrt(nrm2) - 1.0)
            if drift > drift_tol:
                return STATUS_DRIFT, step + 1, drift
            psi /= np.sqrt(nrm2)
        elif nrm2 < norm2_floor:
            return STATUS_UNDERFLOW, step + 1, nrm2
        t = t0 + (step + 1) * dt
    return STATUS_OK, nsteps, 0.0
