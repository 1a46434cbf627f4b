# Square-lattice Epstein zeta values: sum' |i|^s = 4 zeta(-s/2) beta(-s/2) (analytic
# continuation), so the punctured-trapezoid constant for r^s is -4 zeta(-s/2) beta(-s/2)
# and for r^n log r its s-derivative at s = n.
import mpmath as mp

mp.mp.dps = 40
beta = lambda s: mp.dirichlet(s, [0, 1, 0, -1])
Z = lambda s: -4 * mp.zeta(-s / 2) * beta(-s / 2)
out = {
    # closed form at s = 0; numerical differentiation of the Dirichlet series loses digits there
    "log": -mp.log(2 * mp.pi) / 2 - mp.log(mp.gamma(0.25) ** 2 / (2 * mp.pi * mp.sqrt(2))),
    "r2log": mp.diff(Z, 2),
    "r4log": mp.diff(Z, 4),
    "r3": Z(3),
}
for k, v in out.items():
    print(f"{{\"{k}\", {mp.nstr(v, 20)}}},")
