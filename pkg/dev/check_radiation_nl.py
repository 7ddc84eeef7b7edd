"""Nonlinear calibration: interior formula vs full PDE at moderate amplitude."""
import time
import numpy as np
from mtm.core import Grid1D, FieldState, make_spectral_grid
from mtm import scatter as sc
from mtm import asymptotics as asy
from mtm.evolve import EvolveConfig, evolve_to

a = 0.3
dx = 0.01
g = Grid1D(-180.0, dx, int(round(480.0/dx))+1)   # [-180, 300]
x = g.x
u0 = a*np.exp(-x**2/2.0)*np.exp(0.3j*x)
v0 = 0.7*a*np.exp(-(x-1.0)**2/3.0)*np.exp(-0.2j*x)
st = FieldState(g, u0, v0, 0.0)
sgrid = make_spectral_grid(0.01, 24.0, 420, spacing="loglin")
data, diag = sc.reflection(st, sgrid)
print(f"max|r| = {np.abs(data.r).max():.3f}, unitarity {diag.unitarity_residual.max():.1e}")
# no eigenvalues? check quickly
zs = sc.find_eigenvalues(st, (-3.0, 3.0, 0.05, 3.0), tol=1e-8)
print("eigenvalues:", zs)

cfg = EvolveConfig(dt=dx)
cur = st
v = 0.3
for t in (50.0, 100.0, 200.0, 300.0):
    t0 = time.time()
    cur = evolve_to(cur, t, cfg)
    xq = v*t
    k = g.index_of(round(xq/dx)*dx)
    up = cur.u[k]; vp = cur.v[k]
    ua, va = asy.asymptotic_solution(g.x[k], t, cur and data)
    z0 = asy.stationary_point(v); tau = t*z0/(1+z0**2)
    print(f"t={t:5.0f} ({time.time()-t0:4.0f}s) tau={tau:6.1f} |u_pde|={abs(up):.4e} "
          f"u_pde/u_as={up/ua:.4f} v_pde/v_as={vp/va:.4f} "
          f"scaled gap={tau**0.75*abs(up-ua):.4f}")
