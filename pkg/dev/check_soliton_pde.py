"""Dev check: does the closed-form soliton satisfy the MTM equations, and
does the Strang integrator track it?"""
import numpy as np
from mtm.solitons import SolitonParams, one_soliton
from mtm.core import Grid1D, FieldState, charge
from mtm.evolve import EvolveConfig, evolve_to

def pde_residual(p, x, t, h=1e-4):
    # residual of i(u_t+u_x)+v+|v|^2 u and i(v_t-v_x)+u+|u|^2 v via central differences
    u0, v0 = one_soliton(p, x, t)
    ux = (one_soliton(p, x + h, t)[0] - one_soliton(p, x - h, t)[0]) / (2*h)
    ut = (one_soliton(p, x, t + h)[0] - one_soliton(p, x, t - h)[0]) / (2*h)
    vx = (one_soliton(p, x + h, t)[1] - one_soliton(p, x - h, t)[1]) / (2*h)
    vt = (one_soliton(p, x, t + h)[1] - one_soliton(p, x, t - h)[1]) / (2*h)
    r1 = 1j*(ut + ux) + v0 + np.abs(v0)**2 * u0
    r2 = 1j*(vt - vx) + u0 + np.abs(u0)**2 * v0
    return np.max(np.abs(r1)), np.max(np.abs(r2))

x = np.linspace(-10, 10, 41)
for lam, c in [(0.8*np.exp(1j*np.pi/3), 1.0+0j),
               (0.9*np.exp(1j*1.2), 0.5-0.3j),
               (1.3*np.exp(1j*2.2), -2.0+1j),   # Re lambda < 0
               (0.6*np.exp(1j*0.4), 3.0+0j)]:
    p = SolitonParams(lambda1=complex(lam), c=complex(c))
    r1, r2 = pde_residual(p, x, 0.7)
    print(f"lam={lam:.4f} c={c}  residual1={r1:.3e} residual2={r2:.3e}  (expect ~1e-8 = FD error)")

# charge of one soliton vs 2*omega
p = SolitonParams(lambda1=0.8*np.exp(1j*np.pi/3), c=1.0+0j)
g = Grid1D(-60.0, 0.01, 12001)
u, v = one_soliton(p, g.x, 0.0)
st = FieldState(g, u, v, 0.0)
print(f"charge={charge(st):.10f}  2*omega={2*p.omega:.10f}  4w={4*p.omega:.6f} 8w={8*p.omega:.6f}")

# integrator vs closed form, coarse quick check (dx=0.01, t=1)
g = Grid1D(-30.0, 0.01, 6001)
u, v = one_soliton(p, g.x, 0.0)
st = FieldState(g, u, v, 0.0)
st1 = evolve_to(st, 1.0, EvolveConfig(dt=0.01))
ue, ve = one_soliton(p, g.x, 1.0)
err = max(np.max(np.abs(st1.u - ue)), np.max(np.abs(st1.v - ve)))
print(f"evolve t=1 dx=0.01: Linf err={err:.3e}")
st2 = evolve_to(st, 1.0, EvolveConfig(dt=0.01))
