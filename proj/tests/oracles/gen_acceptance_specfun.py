#!/usr/bin/env python3
# Regenerates tests/data/acceptance_specfun.inc: 200 seeded points in the closed
# upper half-plane (log-uniform radius in [0.05, 150]) plus points straddling |z| = 95.
import random

import mpmath as mp

mp.mp.dps = 160
rng = random.Random(20240611)

sample = []
for _ in range(200):
    r = mp.mpf(0.05) * mp.power(3000, rng.random())
    t = mp.pi * rng.random()
    sample.append(mp.mpc(mp.nstr(r * mp.cos(t), 17), mp.nstr(r * mp.sin(t), 17)))
seam = []
for t in (0.0, 0.4, 1.1, 1.6, 2.2, 2.9, 3.14):
    for f in ("0.9999999999", "1.0000000001"):
        z = mp.mpf(95) * mp.mpf(f) * mp.exp(1j * mp.mpf(t))
        seam.append(mp.mpc(mp.nstr(z.real, 17), mp.nstr(abs(z.imag), 17)))


def K(n, z):
    return mp.struveh(n, z) - mp.bessely(n, z)


def H1(n, z):
    return mp.besselj(n, z) + 1j * mp.bessely(n, z)


def principal(z):
    # limit from above on the negative real axis
    return mp.mpc(z.real, mp.mpf("1e-60")) if z.imag == 0 and z.real < 0 else z


def row(z):
    w = principal(z)
    vals = [K(0, w), K(1, w), H1(0, w), H1(1, w),
            K(0, w) + 2 / mp.pi * mp.log(w), K(1, w) - 2 / (mp.pi * w),
            1j / 4 * H1(0, w) + mp.log(w) / (2 * mp.pi), 1j / 4 * H1(1, w) - 1 / (2 * mp.pi * w)]
    return "    {" + c(z) + ", {" + ", ".join(c(v) for v in vals) + "}},\n"


def c(v):
    v = mp.mpc(v)
    return "{%s, %s}" % (mp.nstr(v.real, 20, min_fixed=-30, max_fixed=30),
                         mp.nstr(v.imag, 20, min_fixed=-30, max_fixed=30))


out = ["// generated by tests/oracles/gen_acceptance_specfun.py\n",
       "// z, K0, K1, H0, H1, K0 + (2/pi) log z, K1 - 2/(pi z), (i/4) H0 + log z / (2 pi), (i/4) H1 - 1/(2 pi z)\n",
       "struct AcceptanceSpec { cdouble z, v[8]; };\n",
       "inline const AcceptanceSpec kAcceptanceSample[] = {\n"]
out += [row(z) for z in sample]
out.append("};\n\ninline const AcceptanceSpec kAcceptanceSeam[] = {\n")
out += [row(z) for z in seam]
out.append("};\n")
open(__file__.replace("oracles/gen_acceptance_specfun.py", "data/acceptance_specfun.inc"), "w").write("".join(out))
