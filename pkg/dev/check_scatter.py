"""Dev check: direct scattering on the one-soliton vs analytic oracle."""
import time
import numpy as np
from mtm.core import Grid1D, FieldState, make_spectral_grid
from mtm.solitons import SolitonParams, one_soliton
from mtm import scatter as sc

lam1 = 0.8*np.exp(1j*np.pi/3)
p = SolitonParams(lambda1=complex(lam1), c=1.0+0j)
g = Grid1D(-30.0, 0.005, 12001)
u, v = one_soliton(p, g.x, 0.0)
st = FieldState(g, u, v, 0.0)
print("tail:", st.boundary_tail())

def alpha_exact(lam):
    w = np.angle(lam1)
    return np.exp(-1j*w)*(lam-lam1)/(lam-np.conj(lam1))

# alpha on real axis vs Blaschke
grid = make_spectral_grid(0.05, 6.0, 128)
t0 = time.time()
data, diag = sc.reflection(st, grid)
print(f"reflection sweep: {time.time()-t0:.2f}s")
errs = np.abs(data.alpha - alpha_exact(grid.lam))
print(f"max|alpha - exact| = {errs.max():.3e}")
print(f"max|r| = {np.abs(data.r).max():.3e}")
print(f"max unitarity residual = {diag.unitarity_residual.max():.3e}")
print(f"alpha0={diag.alpha0:.6f} exact={alpha_exact(grid.lam[np.argmin(np.abs(grid.lam))]):.6f}")
print(f"|alpha0*alpha_inf - 1| = {abs(diag.alpha0*diag.alpha_inf-1):.3e}",
      "(product of extreme-node values; exact only in the limits)")

# complex continuation
for z in [0.4+0.5j, lam1*1.05, 1.2+0.8j]:
    print(f"alpha({z:.3f}) = {sc.alpha_at(st, z):.6f} exact {alpha_exact(z):.6f}")

# eigenvalue search
t0 = time.time()
zs = sc.find_eigenvalues(st, (-2.0, 2.0, 0.05, 2.0), tol=1e-10)
print(f"eigensearch: {time.time()-t0:.2f}s roots={zs} true={lam1:.6f} err={abs(zs[0]-lam1):.2e}")
cs = sc.norming_constants(st, zs)
print(f"c recovered = {cs[0]:.6f} (true 1+0j) err={abs(cs[0]-1):.2e}")
