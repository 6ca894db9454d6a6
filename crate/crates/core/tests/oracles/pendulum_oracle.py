"""Reference rotation numbers of the spherical pendulum.

Independent of the crate's quadrature: the cubic's roots come from
mpmath.polyroots and the azimuth integral is evaluated in the original
variable z with tanh-sinh quadrature at 40 digits. The printed values are
pasted into tests/pendulum.rs.
"""
import mpmath as mp

mp.mp.dps = 40

POINTS = [
    (0.3, 0.2), (-0.3, 0.2), (0.5, 0.3), (1.0, 0.5), (0.2, -0.5),
    (0.1, -0.8), (0.8, 1.5), (-1.2, 2.0), (0.05, 1.2), (1.5, 3.0),
]


def rotation(j, e):
    j, e = mp.mpf(j), mp.mpf(e)
    roots = sorted(mp.re(r) for r in mp.polyroots([2, -2 * e, -2, 2 * e - j * j], maxsteps=200, extraprec=200))
    f = lambda z: 2 * (e - z) * (1 - z * z) - j * j
    z1, z2 = (mp.findroot(f, r) for r in roots[:2])
    assert -1 < z1 < z2 < 1

    def g(z):
        fz = f(z)
        # Nodes that round onto a turning point carry negligible weight.
        return j / ((1 - z * z) * mp.sqrt(fz)) if fz > 0 else mp.mpf(0)

    twist = 2 * mp.quad(g, [z1, (z1 + z2) / 2, z2])
    w = twist / (2 * mp.pi)
    return w - mp.floor(w)


for j, e in POINTS:
    print(f"    (({j}, {e}), {mp.nstr(rotation(j, e), 17)}),")
