# Right-hand side f at a few nodes for a Gaussian bump (H_bg = 1, A = 2, sigma = 4)
# under a plane wave along +x with k = rho_1, by symbolic differentiation of alpha(x, y).
import mpmath as mp
import sympy as sp

mp.mp.dps = 40
E, nu, ri, rs, g, w = sp.Integer(7) * 10**9, sp.Rational(33, 100), 917, 1025, sp.Rational(98, 10), 3
x, y = sp.symbols("x y", real=True)
H = 1 + 2 * sp.exp(-(x**2 + y**2) / 32)
kap = E / (12 * (1 - nu**2))
alpha = kap * H**3
a0 = kap
beta = ri * H * w**2 - rs * g
b0 = ri * w**2 - rs * g
gam = -rs * w**2
ac = alpha - a0
bc = beta - b0

roots = mp.polyroots([mp.mpf(a0), 0, 0, 0, -mp.mpf(b0), mp.mpf(gam)], maxsteps=200, extraprec=200)
k = [r.real for r in roots if abs(r.imag) < 1e-30 and r.real > 0][0]
ks = sp.Float(str(k), 40)
phi = sp.exp(sp.I * ks * x)
u = ks * phi
d = sp.diff
lap = lambda f: d(f, x, 2) + d(f, y, 2)
op = (2 * (d(ac, x) * d(lap(u), x) + d(ac, y) * d(lap(u), y)) + lap(ac) * lap(u)
      + (1 - nu) * (2 * d(ac, x, y) * d(u, x, y) - d(ac, x, 2) * d(u, y, 2) - d(ac, y, 2) * d(u, x, 2)))
f = -op - (ac * b0 / a0 - bc) * u + ac / a0 * gam * phi
print(f"k = {mp.nstr(k, 20)}")
for px, py in [(1.5, -1.0), (3.0, 2.5), (-6.0, 0.5)]:
    v = complex(sp.N(f.subs({x: sp.Float(px, 40), y: sp.Float(py, 40)}), 25))
    print(f"{{{px}, {py}, {{{v.real!r}, {v.imag!r}}}}},")
