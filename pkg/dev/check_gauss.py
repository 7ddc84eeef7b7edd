"""Dev check: Gaussian data scattering diagnostics and limit relations."""
import numpy as np
from mtm.core import Grid1D, FieldState, make_spectral_grid, charge
from mtm import scatter as sc

a = 0.05
g = Grid1D(-30.0, 0.005, 12001)
x = g.x
u = a*np.exp(-x**2/2.0)*np.exp(0.3j*x)
v = 0.5*a*np.exp(-(x-1.0)**2/3.0)
st = FieldState(g, u, v, 0.0)
Q = charge(st)
grid = make_spectral_grid(0.02, 20.0, 200, spacing="loglin")
data, diag = sc.reflection(st, grid)
print(f"max unitarity = {diag.unitarity_residual.max():.3e}")
print(f"alpha0 = {diag.alpha0:.8f}")
print(f"e^(iQ/4) = {np.exp(0.25j*Q):.8f}   e^(iQ/2) = {np.exp(0.5j*Q):.8f}")
print(f"alpha_inf = {diag.alpha_inf:.8f}  e^(-iQ/4) = {np.exp(-0.25j*Q):.8f}")
print(f"|alpha0*alpha_inf - 1| = {abs(diag.alpha0*diag.alpha_inf - 1):.3e}")

# conj symmetry: alpha vs conj(breve alpha) where breve alpha = det[n1m, n2p]
from mtm.scatter import _coeffs, _column_at_mid, GAUGE_LARGE, GAUGE_SMALL
co = _coeffs(st)
errs = []
for lam in [1.5, 2.5, -1.7, 0.6, -0.4]:
    gauge = GAUGE_SMALL if abs(lam) < 1 else GAUGE_LARGE
    n1m = _column_at_mid(co, gauge, lam, +1.0, True)
    n2p = _column_at_mid(co, gauge, lam, -1.0, False)
    alpha_breve = n1m[0]*n2p[1] - n1m[1]*n2p[0]
    alpha, _ = sc.scattering_coeffs(st, lam)
    errs.append(abs(alpha - np.conj(alpha_breve)))
print("conj symmetry errors:", [f"{e:.2e}" for e in errs])

# gauge consistency of r on |lam|>1 via both routes
errs = []
for lam in [1.2, 1.8, 2.5, -1.4, -2.2]:
    al, bl = sc.scattering_coeffs(st, lam, gauge="large")
    asm, bsm = sc.scattering_coeffs(st, lam, gauge="small")
    errs.append(abs(bl/al - bsm/asm))
print("gauge consistency |r_large - r_small|:", [f"{e:.2e}" for e in errs])

# r-ratio trend near 0
pos = grid.lam[grid.lam>0][:8]
rvals = data.r[grid.lam>0][:8]
print("lam:", np.round(pos,4))
print("|r/lam|:", np.round(np.abs(rvals/pos), 6))
