"""Hot numeric kernels for Jost-function propagation.

The spatial spectral problem for each Jost column is a 2x2 linear ODE

    c'(x) = [ iJ(lam) (sigma3 - s I) + Qa(x) + mu Qb(x) ] c(x)

with s = +1 (first column) or -1 (second column) and mu = 1/lam in the
large gauge, mu = lam in the small one.  Cells are advanced with the
exponential-midpoint rule (midpoint coefficients, exact 2x2 matrix
exponential), which treats the oscillatory iJ part exactly, so accuracy
is uniform in lam instead of degrading like |J(lam)|^5 as a polynomial
Runge-Kutta step would.

Each kernel has a numba-jitted implementation and a pure-numpy twin;
``MTM_DISABLE_NUMBA=1`` selects the latter (see mtm.backend).
"""

import numpy as np

from .backend import NUMBA_ENABLED, njit


@njit(cache=True, inline="always")
def _expm2_apply(b11, b12, b21, b22, c1, c2):
    """Apply exp([[b11,b12],[b21,b22]]) to the vector (c1, c2)."""
    mu = 0.5 * (b11 + b22)
    d11 = 0.5 * (b11 - b22)
    delta = d11 * d11 + b12 * b21
    r = np.sqrt(delta)
    if abs(r) > 1e-8:
        ch = np.cosh(r)
        shr = np.sinh(r) / r
    else:
        ch = 1.0 + delta / 2.0 + delta * delta / 24.0
        shr = 1.0 + delta / 6.0 + delta * delta / 120.0
    e = np.exp(mu)
    m11 = e * (ch + shr * d11)
    m12 = e * shr * b12
    m21 = e * shr * b21
    m22 = e * (ch - shr * d11)
    return m11 * c1 + m12 * c2, m21 * c1 + m22 * c2


@njit(cache=True)
def jost_column_sweep(qa_mid, qb_mid, lam, mu, s, h, from_left, traj):
    """Propagate one Jost column across all cells; fill traj (n, 2).

    qa_mid/qb_mid: (n-1, 2, 2) midpoint coefficient samples.
    Starts from identity data (e_1 for s=+1, e_2 for s=-1) at the chosen
    edge.  J(lam) = (lam - 1/lam)/4.
    """
    ncell = qa_mid.shape[0]
    n = ncell + 1
    jv = 0.25 * (lam - 1.0 / lam)
    # iJ(sigma3 - s I): diag(0, -2iJ) for s=+1, diag(2iJ, 0) for s=-1
    d1 = 1j * jv * (1.0 - s)
    d2 = 1j * jv * (-1.0 - s)
    if s > 0:
        c1, c2 = 1.0 + 0.0j, 0.0j
    else:
        c1, c2 = 0.0j, 1.0 + 0.0j
    if from_left:
        traj[0, 0] = c1
        traj[0, 1] = c2
        for k in range(ncell):
            b11 = (d1 + qa_mid[k, 0, 0] + mu * qb_mid[k, 0, 0]) * h
            b12 = (qa_mid[k, 0, 1] + mu * qb_mid[k, 0, 1]) * h
            b21 = (qa_mid[k, 1, 0] + mu * qb_mid[k, 1, 0]) * h
            b22 = (d2 + qa_mid[k, 1, 1] + mu * qb_mid[k, 1, 1]) * h
            c1, c2 = _expm2_apply(b11, b12, b21, b22, c1, c2)
            traj[k + 1, 0] = c1
            traj[k + 1, 1] = c2
    else:
        traj[n - 1, 0] = c1
        traj[n - 1, 1] = c2
        for k in range(ncell - 1, -1, -1):
            b11 = -(d1 + qa_mid[k, 0, 0] + mu * qb_mid[k, 0, 0]) * h
            b12 = -(qa_mid[k, 0, 1] + mu * qb_mid[k, 0, 1]) * h
            b21 = -(qa_mid[k, 1, 0] + mu * qb_mid[k, 1, 0]) * h
            b22 = -(d2 + qa_mid[k, 1, 1] + mu * qb_mid[k, 1, 1]) * h
            c1, c2 = _expm2_apply(b11, b12, b21, b22, c1, c2)
            traj[k, 0] = c1
            traj[k, 1] = c2
    return 0


@njit(cache=True)
def jost_column_at(qa_mid, qb_mid, lam, mu, s, h, from_left, idx):
    """Same sweep but only the value at node idx is needed."""
    ncell = qa_mid.shape[0]
    jv = 0.25 * (lam - 1.0 / lam)
    d1 = 1j * jv * (1.0 - s)
    d2 = 1j * jv * (-1.0 - s)
    if s > 0:
        c1, c2 = 1.0 + 0.0j, 0.0j
    else:
        c1, c2 = 0.0j, 1.0 + 0.0j
    if from_left:
        for k in range(min(idx, ncell)):
            b11 = (d1 + qa_mid[k, 0, 0] + mu * qb_mid[k, 0, 0]) * h
            b12 = (qa_mid[k, 0, 1] + mu * qb_mid[k, 0, 1]) * h
            b21 = (qa_mid[k, 1, 0] + mu * qb_mid[k, 1, 0]) * h
            b22 = (d2 + qa_mid[k, 1, 1] + mu * qb_mid[k, 1, 1]) * h
            c1, c2 = _expm2_apply(b11, b12, b21, b22, c1, c2)
    else:
        for k in range(ncell - 1, idx - 1, -1):
            b11 = -(d1 + qa_mid[k, 0, 0] + mu * qb_mid[k, 0, 0]) * h
            b12 = -(qa_mid[k, 0, 1] + mu * qb_mid[k, 0, 1]) * h
            b21 = -(qa_mid[k, 1, 0] + mu * qb_mid[k, 1, 0]) * h
            b22 = -(d2 + qa_mid[k, 1, 1] + mu * qb_mid[k, 1, 1]) * h
            c1, c2 = _expm2_apply(b11, b12, b21, b22, c1, c2)
    return c1, c2


def _expm2_apply_numpy(b11, b12, b21, b22, c1, c2):
    mu = 0.5 * (b11 + b22)
    d11 = 0.5 * (b11 - b22)
    delta = d11 * d11 + b12 * b21
    r = np.sqrt(delta + 0j)
    small = np.abs(r) <= 1e-8
    r_safe = np.where(small, 1.0, r)
    ch = np.where(small, 1.0 + delta / 2 + delta * delta / 24, np.cosh(r_safe))
    shr = np.where(small, 1.0 + delta / 6 + delta * delta / 120,
                   np.sinh(r_safe) / r_safe)
    e = np.exp(mu)
    return (e * ((ch + shr * d11) * c1 + shr * b12 * c2),
            e * (shr * b21 * c1 + (ch - shr * d11) * c2))


def jost_column_sweep_numpy(qa_mid, qb_mid, lam, mu, s, h, from_left, traj):
    ncell = qa_mid.shape[0]
    jv = 0.25 * (lam - 1.0 / lam)
    d1 = 1j * jv * (1.0 - s)
    d2 = 1j * jv * (-1.0 - s)
    c1, c2 = (1.0 + 0j, 0j) if s > 0 else (0j, 1.0 + 0j)
    rng = range(ncell) if from_left else range(ncell - 1, -1, -1)
    sign = 1.0 if from_left else -1.0
    if from_left:
        traj[0] = (c1, c2)
    else:
        traj[-1] = (c1, c2)
    for k in rng:
        b11 = sign * (d1 + qa_mid[k, 0, 0] + mu * qb_mid[k, 0, 0]) * h
        b12 = sign * (qa_mid[k, 0, 1] + mu * qb_mid[k, 0, 1]) * h
        b21 = sign * (qa_mid[k, 1, 0] + mu * qb_mid[k, 1, 0]) * h
        b22 = sign * (d2 + qa_mid[k, 1, 1] + mu * qb_mid[k, 1, 1]) * h
        c1, c2 = _expm2_apply_numpy(b11, b12, b21, b22, c1, c2)
        traj[k + 1 if from_left else k] = (c1, c2)
    return 0


def jost_column_at_numpy(qa_mid, qb_mid, lam, mu, s, h, from_left, idx):
    ncell = qa_mid.shape[0]
    jv = 0.25 * (lam - 1.0 / lam)
    d1 = 1j * jv * (1.0 - s)
    d2 = 1j * jv * (-1.0 - s)
    c1, c2 = (1.0 + 0j, 0j) if s > 0 else (0j, 1.0 + 0j)
    rng = range(min(idx, ncell)) if from_left else range(ncell - 1, idx - 1, -1)
    sign = 1.0 if from_left else -1.0
    for k in rng:
        b11 = sign * (d1 + qa_mid[k, 0, 0] + mu * qb_mid[k, 0, 0]) * h
        b12 = sign * (qa_mid[k, 0, 1] + mu * qb_mid[k, 0, 1]) * h
        b21 = sign * (qa_mid[k, 1, 0] + mu * qb_mid[k, 1, 0]) * h
        b22 = sign * (d2 + qa_mid[k, 1, 1] + mu * qb_mid[k, 1, 1]) * h
        c1, c2 = _expm2_apply_numpy(b11, b12, b21, b22, c1, c2)
    return c1, c2


if NUMBA_ENABLED:
    column_sweep = jost_column_sweep
    column_at = jost_column_at
else:  # pragma: no cover - exercised via MTM_DISABLE_NUMBA runs
    column_sweep = jost_column_sweep_numpy
    column_at = jost_column_at_numpy
