"""Direct scattering map: fields to scattering data.

Jost columns are integrated across the field grid in one of the two
gauges (the small one is regular at lam = 0, the large one at infinity).
Scattering coefficients come from Wronskians of opposite-side columns
evaluated mid-domain, eigenvalues from an argument-principle search over
the upper half plane, and norming constants from the column linear
dependence at an eigenvalue.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import FieldState, ScatteringData, SpectralGrid

GAUGE_SMALL = "small"
GAUGE_LARGE = "large"
SIDE_MINUS = "minus"
SIDE_PLUS = "plus"

GENERICITY_FLOOR = 1e-6


class NearResonanceError(RuntimeError):
    """|alpha| fell below the genericity floor on the real line."""


class EigenvalueSearchError(RuntimeError):
    """Winding count and refined roots disagree, or refinement failed."""


def _derivative4(f, h):
    """Fourth-order first derivative of samples with one-sided edges."""
    df = np.empty_like(f)
    df[2:-2] = (-f[4:] + 8 * f[3:-1] - 8 * f[1:-3] + f[:-4]) / (12 * h)
    df[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h)
    df[1] = (f[2] - f[0]) / (2 * h)
    df[-2] = (f[-1] - f[-3]) / (2 * h)
    df[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * h)
    return df


class _Coefficients:
    """Per-state cache of the midpoint coefficient matrices of both gauges."""

    def __init__(self, state: FieldState):
        u, v = state.u, state.v
        h = state.grid.dx
        ux = _derivative4(u, h)
        vx = _derivative4(v, h)
        au2 = np.abs(u) ** 2
        av2 = np.abs(v) ** 2
        n = state.grid.n

        q1 = np.zeros((n, 2, 2), dtype=np.complex128)   # small gauge, lam^0
        q1[:, 0, 0] = -0.25j * (au2 + av2)
        q1[:, 0, 1] = 0.5j * np.conj(u)
        q1[:, 1, 0] = ux - 0.5j * av2 * u - 0.5j * v
        q1[:, 1, 1] = 0.25j * (au2 + av2)
        q2 = np.zeros((n, 2, 2), dtype=np.complex128)   # small gauge, lam^1
        q2[:, 0, 0] = 0.5j * (u * np.conj(v))
        q2[:, 0, 1] = -0.5j * np.conj(v)
        q2[:, 1, 0] = 0.5j * (u + u * u * np.conj(v))
        q2[:, 1, 1] = -0.5j * (u * np.conj(v))

        qt1 = np.zeros((n, 2, 2), dtype=np.complex128)  # large gauge, lam^0
        qt1[:, 0, 0] = 0.25j * (au2 + av2)
        qt1[:, 0, 1] = -0.5j * np.conj(v)
        qt1[:, 1, 0] = vx + 0.5j * au2 * v + 0.5j * u
        qt1[:, 1, 1] = -0.25j * (au2 + av2)
        qt2 = np.zeros((n, 2, 2), dtype=np.complex128)  # large gauge, lam^-1
        qt2[:, 0, 0] = -0.5j * (np.conj(u) * v)
        qt2[:, 0, 1] = 0.5j * np.conj(u)
        qt2[:, 1, 0] = -0.5j * (v + np.conj(u) * v * v)
        qt2[:, 1, 1] = 0.5j * (np.conj(u) * v)

        self.h = h
        self.small = (0.5 * (q1[:-1] + q1[1:]), 0.5 * (q2[:-1] + q2[1:]))
        self.large = (0.5 * (qt1[:-1] + qt1[1:]), 0.5 * (qt2[:-1] + qt2[1:]))
        # Wronskian evaluation point: the node nearest x = 0, clamped to
        # the interior (both one-sided solutions are far from their
        # truncation edges there)
        grid = state.grid
        target = min(max(0.0, grid.x0 + 0.25 * (grid.x1 - grid.x0)),
                     grid.x1 - 0.25 * (grid.x1 - grid.x0))
        if grid.x0 < 0.0 < grid.x1:
            target = 0.0
        self.mid_idx = int(round((target - grid.x0) / h))
        self.x_mid = grid.x0 + self.mid_idx * h

    def pick(self, gauge):
        if gauge == GAUGE_SMALL:
            return self.small
        if gauge == GAUGE_LARGE:
            return self.large
        raise ValueError(f"unknown gauge {gauge!r}")


_COEFF_CACHE: dict[int, tuple] = {}


def _coeffs(state: FieldState) -> _Coefficients:
    key = id(state)
    hit = _COEFF_CACHE.get(key)
    if hit is not None and hit[0] is state:
        return hit[1]
    co = _Coefficients(state)
    _COEFF_CACHE.clear()
    _COEFF_CACHE[key] = (state, co)
    return co


def _mu(gauge, lam):
    return lam if gauge == GAUGE_SMALL else 1.0 / lam


@dataclass(frozen=True)
class JostSolution:
    """2x2 Jost matrix samples over the x-grid at one spectral point."""

    lam: complex
    side: str
    gauge: str
    m: np.ndarray

    def det_drift(self):
        d = self.m[:, 0, 0] * self.m[:, 1, 1] - self.m[:, 0, 1] * self.m[:, 1, 0]
        return float(np.max(np.abs(d - d[0])))


@dataclass(frozen=True)
class ScatterDiagnostics:
    unitarity_residual: np.ndarray
    alpha0: complex
    alpha_inf: complex


def jost(state: FieldState, lam, side, gauge) -> JostSolution:
    """Jost 2x2 solution normalized to the identity at the side's edge."""
    lam = complex(lam)
    if lam == 0:
        raise ValueError("lam = 0 is a spectral singularity; use small gauge near 0")
    if not np.isfinite(lam.real) or not np.isfinite(lam.imag):
        raise ValueError("non-finite spectral parameter")
    co = _coeffs(state)
    qa, qb = co.pick(gauge)
    from_left = side == SIDE_MINUS
    if side not in (SIDE_MINUS, SIDE_PLUS):
        raise ValueError(f"unknown side {side!r}")
    n = state.grid.n
    m = np.empty((n, 2, 2), dtype=np.complex128)
    t1 = np.empty((n, 2), dtype=np.complex128)
    t2 = np.empty((n, 2), dtype=np.complex128)
    kernels.column_sweep(qa, qb, lam, _mu(gauge, lam), 1.0, co.h, from_left, t1)
    kernels.column_sweep(qa, qb, lam, _mu(gauge, lam), -1.0, co.h, from_left, t2)
    m[:, :, 0] = t1
    m[:, :, 1] = t2
    return JostSolution(lam=lam, side=side, gauge=gauge, m=m)


def _column_at_mid(co, gauge, lam, s, from_left):
    qa, qb = co.pick(gauge)
    return kernels.column_at(qa, qb, complex(lam), _mu(gauge, complex(lam)),
                             s, co.h, from_left, co.mid_idx)


def scattering_coeffs(state: FieldState, lam, gauge=None):
    """(alpha, beta) of the transformed scattering matrix at real lam.

    Small-gauge route (through the connection relations) below |lam| = 1,
    large-gauge route above; both give the same coefficients.  gauge
    forces one route (used by the gauge-consistency checks).
    """
    lam = float(lam)
    if lam == 0.0:
        raise ValueError("lam = 0 is not in the continuous spectrum domain")
    co = _coeffs(state)
    phi = 0.25 * (lam - 1.0 / lam) * co.x_mid
    if gauge is None:
        gauge = GAUGE_SMALL if abs(lam) < 1.0 else GAUGE_LARGE
    if gauge == GAUGE_SMALL:
        n1p = _column_at_mid(co, GAUGE_SMALL, lam, +1.0, False)
        n2m = _column_at_mid(co, GAUGE_SMALL, lam, -1.0, True)
        n1m = _column_at_mid(co, GAUGE_SMALL, lam, +1.0, True)
        alpha = n1p[0] * n2m[1] - n1p[1] * n2m[0]
        beta_breve = (n1m[0] * n1p[1] - n1m[1] * n1p[0]) * np.exp(2j * phi)
        # the gauge connection identifies beta with -conj(breve beta)
        beta = -np.conj(beta_breve)
    else:
        n1p = _column_at_mid(co, GAUGE_LARGE, lam, +1.0, False)
        n2m = _column_at_mid(co, GAUGE_LARGE, lam, -1.0, True)
        n2p = _column_at_mid(co, GAUGE_LARGE, lam, -1.0, False)
        alpha = n1p[0] * n2m[1] - n1p[1] * n2m[0]
        beta = (n2p[0] * n2m[1] - n2p[1] * n2m[0]) * np.exp(-2j * phi)
    return complex(alpha), complex(beta)


def reflection(state: FieldState, grid: SpectralGrid,
               genericity_floor=GENERICITY_FLOOR,
               eigenvalues=()):
    """Continuous scattering data r(lam) on the grid, with diagnostics."""
    r = np.empty(grid.n, dtype=np.complex128)
    alpha = np.empty(grid.n, dtype=np.complex128)
    for i, lam in enumerate(grid.lam):
        a, b = scattering_coeffs(state, float(lam))
        r[i] = b / a
        alpha[i] = a
        if abs(alpha[i]) < genericity_floor:
            raise NearResonanceError(
                f"|alpha({lam:.6g})| = {abs(alpha[i]):.3e} below the "
                f"genericity floor {genericity_floor:g}")
    unit = np.abs(np.abs(alpha) ** 2 * (1.0 + grid.lam * np.abs(r) ** 2) - 1.0)
    i0 = int(np.argmin(np.abs(grid.lam)))
    i_inf = int(np.argmax(np.abs(grid.lam)))
    diag = ScatterDiagnostics(unitarity_residual=unit,
                              alpha0=complex(alpha[i0]),
                              alpha_inf=complex(alpha[i_inf]))
    data = ScatteringData(grid=grid, r=r, eigenvalues=list(eigenvalues),
                          alpha=alpha)
    return data, diag


def alpha_at(state: FieldState, lam) -> complex:
    """Analytic continuation of alpha via the Jost Wronskian, Im lam >= 0."""
    lam = complex(lam)
    co = _coeffs(state)
    gauge = GAUGE_SMALL if abs(lam) < 1.0 else GAUGE_LARGE
    c_p = _column_at_mid(co, gauge, lam, +1.0, False)
    c_m = _column_at_mid(co, gauge, lam, -1.0, True)
    return complex(c_p[0] * c_m[1] - c_p[1] * c_m[0])


def _alpha_prime(state, lam, h_scale=1e-6):
    h = h_scale * (1.0 + abs(lam))
    return (alpha_at(state, lam + h) - alpha_at(state, lam - h)) / (2.0 * h)


def _winding(state, re0, re1, im0, im1, n_edge):
    """Winding number of alpha around the rectangle boundary."""
    top = np.linspace(re0, re1, n_edge)
    right = np.linspace(im0, im1, n_edge)
    pts = np.concatenate([
        top + 1j * im0,
        re1 + 1j * right[1:],
        top[::-1][1:] + 1j * im1,
        re0 + 1j * right[::-1][1:],
    ])
    vals = np.array([alpha_at(state, p) for p in pts])
    if np.any(np.abs(vals) < 1e-12):
        raise EigenvalueSearchError("alpha vanishes on a search-box edge")
    ph = np.unwrap(np.angle(vals))
    w = (ph[-1] - ph[0]) / (2.0 * math.pi)
    return int(round(w)), abs(w - round(w))


def find_eigenvalues(state: FieldState, search_box, tol=1e-8,
                     min_im=0.02, max_depth=24, newton_steps=60):
    """All zeros of alpha inside search_box = (re0, re1, im0, im1).

    Recursive rectangle subdivision by winding number, then Newton.
    The box must stay above a strip around the real line.
    """
    re0, re1, im0, im1 = (float(v) for v in search_box)
    im0 = max(im0, min_im)
    if im1 <= im0:
        raise ValueError("search box must lie in the upper half plane")

    roots = []

    def recurse(a, b, c, d, depth):
        w, frac = _winding(state, a, b, c, d, 64)
        if frac > 0.2:
            w2, frac2 = _winding(state, a, b, c, d, 256)
            if frac2 > 0.2:
                raise EigenvalueSearchError(
                    f"winding integral unstable on box ({a},{b})x({c},{d})")
            w = w2
        if w == 0:
            return
        if w == 1 and max(b - a, d - c) < 0.05:
            z = _newton(state, complex(0.5 * (a + b), 0.5 * (c + d)))
            if not (a - 0.01 <= z.real <= b + 0.01 and c - 0.01 <= z.imag <= d + 0.01):
                raise EigenvalueSearchError(f"Newton escaped the box: {z}")
            roots.append(z)
            return
        if depth >= max_depth:
            raise EigenvalueSearchError("max subdivision depth reached")
        rm = 0.5 * (a + b)
        im = 0.5 * (c + d)
        for (aa, bb, cc, dd) in ((a, rm, c, im), (rm, b, c, im),
                                 (a, rm, im, d), (rm, b, im, d)):
            recurse(aa, bb, cc, dd, depth + 1)

    def _newton(st, z0):
        z = z0
        for _ in range(newton_steps):
            f = alpha_at(st, z)
            if abs(f) < tol:
                return z
            df = _alpha_prime(st, z)
            if df == 0:
                break
            znew = z - f / df
            if abs(znew - z) < 1e-14:
                z = znew
                break
            z = znew
        if abs(alpha_at(st, z)) >= tol:
            raise EigenvalueSearchError(f"Newton failed to reach |alpha|<{tol}")
        return z

    total, frac = _winding(state, re0, re1, im0, im1, 128)
    if frac > 0.2:
        total, frac = _winding(state, re0, re1, im0, im1, 512)
        if frac > 0.2:
            raise EigenvalueSearchError("winding integral unstable on outer box")
    if total == 0:
        return []
    recurse(re0, re1, im0, im1, 0)
    # dedupe near-coincident refinements
    uniq = []
    for z in roots:
        if all(abs(z - w) > 1e-6 for w in uniq):
            uniq.append(z)
    if len(uniq) != total:
        raise EigenvalueSearchError(
            f"argument principle counts {total} zeros, refined {len(uniq)}")
    return sorted(uniq, key=lambda z: (abs(z), z.real))


def norming_constants(state: FieldState, eigenvalues,
                      window_frac=0.25, ratio_tol=5e-2):
    """Norming constants c_j = 2/(b_j a'(zeta_j)) at verified simple zeros.

    b_j is the least-squares column-dependence ratio
    n1_plus(x) = (b_j/zeta_j) n2_minus(x) e^{-ix(lam_j - 1/lam_j)/2}
    averaged over a mid-domain window; a large spread across the window
    flags an inaccurate eigenvalue.
    """
    eigenvalues = [complex(z) for z in eigenvalues]
    if not eigenvalues:
        raise ValueError("no eigenvalues supplied")
    co = _coeffs(state)
    x = state.grid.x
    n = state.grid.n
    out = []
    for lam_j in eigenvalues:
        if lam_j.imag <= 0:
            raise ValueError(f"eigenvalue {lam_j} not in the upper half plane")
        zeta_j = cmath.sqrt(lam_j)
        qa, qb = co.pick(GAUGE_SMALL)
        t_p = np.empty((n, 2), dtype=np.complex128)
        t_m = np.empty((n, 2), dtype=np.complex128)
        kernels.column_sweep(qa, qb, lam_j, lam_j, +1.0, co.h, False, t_p)
        kernels.column_sweep(qa, qb, lam_j, lam_j, -1.0, co.h, True, t_m)
        # window around the field's support center
        dens = np.abs(state.u) ** 2 + np.abs(state.v) ** 2
        kc = int(np.argmax(dens))
        half = max(2, int(window_frac * 0.5 * n))
        lo, hi = max(0, kc - half), min(n, kc + half)
        ph = np.exp(-0.5j * (lam_j - 1.0 / lam_j) * x[lo:hi])
        d = (t_m[lo:hi] * ph[:, None]) / zeta_j
        nom = t_p[lo:hi]
        w = np.abs(d) ** 2
        b_j = complex(np.sum(np.conj(d) * nom) / np.sum(w))
        resid = np.abs(nom - b_j * d)
        scale = np.sqrt(np.mean(w))
        spread = float(np.max(resid) / max(abs(b_j) * scale, 1e-300))
        if spread > ratio_tol:
            raise EigenvalueSearchError(
                f"column-ratio spread {spread:.2e} at {lam_j}: eigenvalue "
                f"inaccurate or window contaminated")
        ap = _alpha_prime(state, lam_j)
        a_prime_zeta = 2.0 * zeta_j * ap
        if abs(a_prime_zeta) < 1e-10:
            raise EigenvalueSearchError(f"a'({zeta_j}) below floor: non-simple zero")
        out.append(2.0 / (b_j * a_prime_zeta))
    return out


def evolve_scattering(data: ScatteringData, dt: float) -> ScatteringData:
    """Advance scattering data in time by the linear phase flow.

    The jump/residue exponent is theta(lam; x, t), so r picks up
    exp(i(lam+1/lam)dt/2) and each c_j the same factor at lam_j.  The
    sign convention is pinned by the one-soliton PDE oracle.
    """
    lam = data.grid.lam
    r = data.r * np.exp(0.5j * (lam + 1.0 / lam) * dt)
    evs = [(lj, cj * np.exp(0.5j * (lj + 1.0 / lj) * dt))
           for lj, cj in data.eigenvalues]
    alpha = data.alpha
    return ScatteringData(grid=data.grid, r=r, eigenvalues=evs, alpha=alpha)


def scatter(state: FieldState, grid: SpectralGrid, search_box=None,
            tol=1e-8, genericity_floor=GENERICITY_FLOOR):
    """Full direct-scattering map: reflection + eigenvalues + norming."""
    evs = []
    if search_box is not None:
        zeros = find_eigenvalues(state, search_box, tol=tol)
        if zeros:
            cs = norming_constants(state, zeros)
            evs = list(zip(zeros, cs))
    data, diag = reflection(state, grid, genericity_floor=genericity_floor,
                            eigenvalues=evs)
    return data, diag
