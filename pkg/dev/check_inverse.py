"""Dev check: Cauchy projections, BC solve consistency, roundtrip."""
import time
import numpy as np
from mtm.core import Grid1D, FieldState, make_spectral_grid, SpectralGrid, ScatteringData
from mtm import scatter as sc
from mtm import inverse as iv
from mtm.solitons import reflectionless_reconstruct

# 1. Plemelj identity + analytic-function projection
grid = make_spectral_grid(1e-3, 60.0, 900, spacing="loglin")
f = 1.0/(grid.lam - 1j)
cp = iv.cauchy_projection(grid, f, +1)
cm = iv.cauchy_projection(grid, f, -1)
print("max|(C+ - C-)f - f| =", np.abs(cp - cm - f).max())
mask = (np.abs(grid.lam) > 0.3) & (np.abs(grid.lam) < 10)
print("max|C+f - f| (mid) =", np.abs(cp - f)[mask].max())
print("max|C-f| (mid) =", np.abs(cm)[mask].max())

# 2. zero data -> nu = (1,0)
sd0 = ScatteringData(grid=make_spectral_grid(0.05, 8.0, 64), r=np.zeros(128, complex))
sol = iv.solve_beals_coifman(sd0, 0.3, 0.0)
print("zero data: |nu11-1|max", np.abs(sol.nu11-1).max(), "|nu12|max", np.abs(sol.nu12).max())
u, v = iv.reconstruct_uv(sol, sd0)
print("zero data u,v:", u, v)

# 3. soliton-only data: match reflectionless_reconstruct
lam1 = 0.8*np.exp(1j*np.pi/3)
sd1 = ScatteringData(grid=sd0.grid, r=np.zeros(128, complex), eigenvalues=[(lam1, 1.0+0j)])
for x, t in [(0.0, 0.0), (1.5, 2.0), (-3.0, 5.0)]:
    sol = iv.solve_beals_coifman(sd1, x, t)
    u, v = iv.reconstruct_uv(sol, sd1)
    ur, vr = reflectionless_reconstruct([(lam1, 1.0+0j)], x, t)
    print(f"x={x} t={t}: |u-ur|={abs(u-ur):.2e} |v-vr|={abs(v-vr):.2e}")

# 4. roundtrip small Gaussian
a = 0.05
g = Grid1D(-30.0, 0.005, 12001)
x = g.x
u0 = a*np.exp(-x**2/2.0)*np.exp(0.3j*x)
v0 = 0.5*a*np.exp(-(x-1.0)**2/3.0)
st = FieldState(g, u0, v0, 0.0)
sgrid = make_spectral_grid(0.02, 16.0, 256, spacing="loglin")
t0 = time.time()
data, diag = sc.reflection(st, sgrid)
print(f"scatter: {time.time()-t0:.1f}s  max|r|={np.abs(data.r).max():.4f}")
t0 = time.time()
xs = np.linspace(-8, 8, 33)
ur, vr = iv.reconstruct_field(data, xs, 0.0)
print(f"reconstruct 33 pts: {time.time()-t0:.1f}s")
ue = np.interp(xs, x, u0.real) + 1j*np.interp(xs, x, u0.imag)
ve = np.interp(xs, x, v0.real) + 1j*np.interp(xs, x, v0.imag)
l2 = np.sqrt(np.sum(np.abs(ur-ue)**2 + np.abs(vr-ve)**2)/np.sum(np.abs(ue)**2+np.abs(ve)**2))
print(f"roundtrip rel L2 = {l2:.4e}")
print("sample:", ur[16], ue[16])
