"""Calibration: interior radiation formula vs exact linearized evolution."""
import numpy as np
from mtm.core import Grid1D, FieldState, make_spectral_grid
from mtm import scatter as sc
from mtm import asymptotics as asy

a = 1e-3
g = Grid1D(-30.0, 0.005, 12001)
x = g.x
u0 = a*np.exp(-x**2/2.0)*np.exp(0.3j*x)
v0 = 0.7*a*np.exp(-(x-1.0)**2/3.0)*np.exp(-0.2j*x)
st = FieldState(g, u0, v0, 0.0)
sgrid = make_spectral_grid(0.01, 20.0, 400, spacing="loglin")
data, diag = sc.reflection(st, sgrid)
print(f"max|r| = {np.abs(data.r).max():.2e}")

def linear_evolve_at(u0, v0, x0, dx, t, xq):
    """Exact linearized-MTM evolution via FFT, sampled at points xq."""
    n = 1 << 22
    L = n * dx
    uu = np.zeros(n, complex); vv = np.zeros(n, complex)
    uu[:u0.size] = u0; vv[:v0.size] = v0
    k = 2*np.pi*np.fft.fftfreq(n, d=dx)
    uh = np.fft.fft(uu); vh = np.fft.fft(vv)
    om = np.sqrt(1.0 + k*k)
    c = np.cos(om*t); s = np.sin(om*t)/om
    uh2 = (c - 1j*k*s)*uh + 1j*s*vh
    vh2 = 1j*s*uh + (c + 1j*k*s)*vh
    u2 = np.fft.ifft(uh2); v2 = np.fft.ifft(vh2)
    # grid position: index j corresponds to x = x0 + j*dx (periodic, L huge)
    idx = np.round((np.asarray(xq) - x0)/dx).astype(int) % n
    return u2[idx], v2[idx]

for v in (0.2, 0.5, 0.75):
    for t in (5000.0, 20000.0):
        xq = v*t
        ul, vl = linear_evolve_at(u0, v0, g.x0, g.dx, t, [xq])
        ua, va = asy.asymptotic_solution(xq, t, data)
        ru = ul[0]/ua if ua != 0 else np.nan
        rv = vl[0]/va if va != 0 else np.nan
        print(f"v={v} t={t:.0f}: |u_lin|={abs(ul[0]):.3e} u_lin/u_as={ru:.4f}  "
              f"v_lin/v_as={rv:.4f}")
