"""Shared value types, grids, complex special functions and file schemas.

Everything here is an immutable value object: construct, validate, share.
Field samples live on uniform x-grids (Grid1D); spectral data lives on a
symmetric grid on the real line with the origin excluded (SpectralGrid).
"""

from __future__ import annotations

import cmath
import json
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

FIELD_CSV_HEADER = "x,re_u,im_u,re_v,im_v"

# Lanczos approximation, g = 7, 9 coefficients.  Relative error is below
# 1e-13 on the right half plane; the reflection formula covers Re z < 1/2.
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


class GammaPoleError(ValueError):
    """Raised when gamma() is evaluated at a non-positive integer."""


def gamma(z):
    """Complex Gamma function.

    Fixed-coefficient Lanczos rational approximation for Re z >= 1/2,
    reflection formula otherwise.  Relative error <= 1e-12 on |z| <= 20.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise GammaPoleError(f"gamma pole at non-positive integer z={z.real:g}")
    if z.real < 0.5:
        # Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return math.pi / (cmath.sin(math.pi * z) * gamma(1.0 - z))
    z = z - 1.0
    x = _LANCZOS_COEFFS[0]
    for k, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        x += c / (z + k)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1-D grid with nodes x0 + k*dx for 0 <= k < n."""

    x0: float
    dx: float
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"Grid1D needs n >= 2, got n={self.n}")
        if not (self.dx > 0.0) or not math.isfinite(self.dx):
            raise ValueError(f"Grid1D needs dx > 0, got dx={self.dx}")

    @property
    def x(self):
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def x1(self):
        return self.x0 + self.dx * (self.n - 1)

    def index_of(self, x, tol=1e-9):
        """Index of the node closest to x; error if off-grid beyond tol*dx."""
        k = round((x - self.x0) / self.dx)
        if k < 0 or k >= self.n or abs(self.x0 + k * self.dx - x) > tol * self.dx:
            raise ValueError(f"x={x} is not a node of the grid")
        return int(k)


@dataclass(frozen=True)
class FieldState:
    """Sampled complex fields (u, v) on a uniform x-grid at time t."""

    grid: Grid1D
    u: np.ndarray
    v: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        u = np.ascontiguousarray(self.u, dtype=np.complex128)
        v = np.ascontiguousarray(self.v, dtype=np.complex128)
        if u.shape != (self.grid.n,) or v.shape != (self.grid.n,):
            raise ValueError("field arrays must have length grid.n")
        if not (np.all(np.isfinite(u.view(np.float64)))
                and np.all(np.isfinite(v.view(np.float64)))):
            raise ValueError("non-finite field sample")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def boundary_tail(self):
        """Largest |u|,|v| sample at the two domain edges."""
        return float(max(abs(self.u[0]), abs(self.u[-1]),
                         abs(self.v[0]), abs(self.v[-1])))

    def tails_below(self, tol=1e-10):
        return self.boundary_tail() <= tol


def charge(state: FieldState) -> float:
    """Trapezoid approximation of the conserved charge int(|u|^2+|v|^2)dx."""
    dens = np.abs(state.u) ** 2 + np.abs(state.v) ** 2
    return float(np.trapezoid(dens, dx=state.grid.dx))


def charge_tail(state: FieldState, x: float) -> float:
    """Trapezoid of |u|^2+|v|^2 over [x, x1] (used by M_11-style phases)."""
    k = state.grid.index_of(x)
    dens = np.abs(state.u[k:]) ** 2 + np.abs(state.v[k:]) ** 2
    return float(np.trapezoid(dens, dx=state.grid.dx))


@dataclass(frozen=True)
class SpectralGrid:
    """Strictly increasing real nodes, symmetric about 0, with 0 excluded."""

    lam: np.ndarray

    def __post_init__(self):
        lam = np.ascontiguousarray(self.lam, dtype=np.float64)
        if lam.ndim != 1 or lam.size < 2:
            raise ValueError("spectral grid needs at least two nodes")
        if np.any(np.diff(lam) <= 0):
            raise ValueError("spectral grid must be strictly increasing")
        if np.any(lam == 0.0):
            raise ValueError("0 must not be a spectral node")
        if not np.allclose(lam, -lam[::-1], rtol=0, atol=1e-12 * max(1.0, lam[-1])):
            raise ValueError("spectral grid must be symmetric about 0")
        object.__setattr__(self, "lam", lam)

    @property
    def n(self):
        return self.lam.size

    @property
    def lam_min(self):
        return float(self.lam[self.lam > 0][0])

    @property
    def lam_max(self):
        return float(self.lam[-1])


def make_spectral_grid(lam_min, lam_max, n_half, spacing="linear"):
    """Symmetric grid on [-lam_max,-lam_min] u [lam_min,lam_max].

    n_half nodes per half line; "log" spacing concentrates nodes near the
    excluded origin, which is where the reflection coefficient varies fastest
    for broad field profiles.
    """
    if spacing == "linear":
        pos = np.linspace(lam_min, lam_max, n_half)
    elif spacing == "log":
        pos = np.geomspace(lam_min, lam_max, n_half)
    elif spacing == "loglin":
        # log-spaced up to 1, linear beyond: resolves both ends of the phase
        n_log = n_half // 3
        knee = min(1.0, lam_max / 4)
        pos = np.concatenate([
            np.geomspace(lam_min, knee, n_log, endpoint=False),
            np.linspace(knee, lam_max, n_half - n_log),
        ])
    else:
        raise ValueError(f"unknown spacing {spacing!r}")
    return SpectralGrid(np.concatenate([-pos[::-1], pos]))


@dataclass(frozen=True)
class ScatteringData:
    """Reflection coefficient samples plus the discrete spectrum.

    eigenvalues is a list of (lambda_j, c_j) with Im lambda_j > 0 and
    pairwise-distinct moduli; c_j is the norming constant of Problem-type
    residue data.  alpha samples are an optional diagnostic.
    """

    grid: SpectralGrid
    r: np.ndarray
    eigenvalues: list = field(default_factory=list)
    alpha: np.ndarray | None = None

    def __post_init__(self):
        r = np.ascontiguousarray(self.r, dtype=np.complex128)
        if r.shape != (self.grid.n,):
            raise ValueError("r must be sampled on the spectral grid")
        lam = self.grid.lam
        pos = 1.0 + lam * np.abs(r) ** 2
        if np.any(pos <= 0.0):
            raise ValueError("1 + lam*|r|^2 must stay positive on the grid")
        evs = [(complex(lj), complex(cj)) for lj, cj in self.eigenvalues]
        for lj, cj in evs:
            if lj.imag <= 0.0:
                raise ValueError(f"eigenvalue {lj} not in the upper half plane")
            if cj == 0.0:
                raise ValueError("zero norming constant")
        moduli = sorted(abs(lj) for lj, _ in evs)
        for a, b in zip(moduli, moduli[1:]):
            if abs(a - b) <= 1e-12 * max(1.0, b):
                raise ValueError("eigenvalue moduli must be pairwise distinct")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "eigenvalues", evs)
        if self.alpha is not None:
            object.__setattr__(
                self, "alpha", np.ascontiguousarray(self.alpha, dtype=np.complex128))

    def r_at(self, lam):
        """Linear interpolation of the sampled reflection coefficient."""
        lam = np.asarray(lam, dtype=np.float64)
        rr = np.interp(lam, self.grid.lam, self.r.real)
        ri = np.interp(lam, self.grid.lam, self.r.imag)
        return rr + 1j * ri


# ----------------------------------------------------------------------
# File schemas
# ----------------------------------------------------------------------

def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".mtm-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_field_csv(state: FieldState, path):
    x = state.grid.x
    lines = [FIELD_CSV_HEADER]
    for k in range(state.grid.n):
        lines.append("%.17g,%.17g,%.17g,%.17g,%.17g" % (
            x[k], state.u[k].real, state.u[k].imag,
            state.v[k].real, state.v[k].imag))
    _atomic_write(path, "\n".join(lines) + "\n")


def read_field_csv(path, t=0.0) -> FieldState:
    with open(path) as fh:
        header = fh.readline().strip()
        if header != FIELD_CSV_HEADER:
            raise ValueError(f"bad field CSV header: {header!r}")
        rows = []
        for ln, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 5:
                raise ValueError(f"malformed row at line {ln}")
            try:
                rows.append([float(p) for p in parts])
            except ValueError as exc:
                raise ValueError(f"malformed row at line {ln}: {exc}") from None
    data = np.asarray(rows, dtype=np.float64)
    if data.shape[0] < 2:
        raise ValueError("field CSV needs at least two rows")
    if not np.all(np.isfinite(data)):
        raise ValueError("NaN sample in field CSV")
    x = data[:, 0]
    dx = x[1] - x[0]
    if dx <= 0 or np.max(np.abs(np.diff(x) - dx)) > 1e-9 * dx:
        raise ValueError("non-uniform x grid in field CSV")
    grid = Grid1D(x0=float(x[0]), dx=float(dx), n=int(x.size))
    return FieldState(grid=grid,
                      u=data[:, 1] + 1j * data[:, 2],
                      v=data[:, 3] + 1j * data[:, 4],
                      t=t)


def write_scattering_json(data: ScatteringData, path):
    doc = {
        "lambda": [float(v) for v in data.grid.lam],
        "r_re": [float(v) for v in data.r.real],
        "r_im": [float(v) for v in data.r.imag],
        "eigenvalues": [
            {"re": lj.real, "im": lj.imag, "c_re": cj.real, "c_im": cj.imag}
            for lj, cj in data.eigenvalues
        ],
    }
    _atomic_write(path, json.dumps(doc, indent=1))


def read_scattering_json(path) -> ScatteringData:
    with open(path) as fh:
        doc = json.load(fh)
    lam = np.asarray(doc["lambda"], dtype=np.float64)
    r = np.asarray(doc["r_re"], dtype=np.float64) + 1j * np.asarray(
        doc["r_im"], dtype=np.float64)
    evs = [(complex(e["re"], e["im"]), complex(e["c_re"], e["c_im"]))
           for e in doc.get("eigenvalues", [])]
    return ScatteringData(grid=SpectralGrid(lam), r=r, eigenvalues=evs)
