#!/usr/bin/env python3
# Roots of alpha0 z^5 - beta0 z + gamma for the standard ice constants (mpmath polyroots).
import mpmath as mp

mp.mp.dps = 40
E, nu, ri, rs, g = 7e9, 0.33, 917, 1025, 9.8
for H, w in ((5, 1), (5, 2 * mp.pi), (1, 1)):
    a0 = E * H**3 / (12 * (1 - nu**2))
    b0 = ri * H * w**2 - rs * g
    gm = -rs * w**2
    roots = mp.polyroots([a0, 0, 0, 0, -b0, gm], maxsteps=200, extraprec=200)
    print("H=%s omega=%s" % (H, mp.nstr(w, 8)))
    for r in sorted(roots, key=lambda z: mp.arg(z)):
        print("   ", mp.nstr(mp.re(r), 20), mp.nstr(mp.im(r), 20))
