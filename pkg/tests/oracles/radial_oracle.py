"""Independent high-precision values frozen into the test-suite.

Uses only mpmath: the plateau step is rebuilt from its polynomial, derivatives
come from mpmath's numerical differentiation, and gauge-sphere constants are
integrated directly.  Run ``python tests/oracles/radial_oracle.py`` to
regenerate the numbers.
"""

import mpmath as mp

mp.mp.dps = 30


def step(s):
    if s <= 0:
        return mp.mpf(0)
    if s >= 1:
        return mp.mpf(1)
    return s ** 5 * (126 - 420 * s + 540 * s ** 2 - 315 * s ** 3 + 70 * s ** 4)


def plateau(r0, r1, r2, r3):
    def phi(r):
        return step((r - r0) / (r1 - r0)) * step((r3 - r) / (r3 - r2))
    return phi


def sphere_constant(k, n=1):
    """int over the unit gauge sphere of (|z|/d)^k, n = 1."""
    return 2 * mp.pi * mp.quad(lambda a: mp.cos(a) ** (n - 1 + mp.mpf(k) / 2), [-mp.pi / 2, mp.pi / 2])


def radial(h, knots):
    return mp.quad(h, knots)


def bump_values():
    r0, r1, r2, r3 = mp.mpf("0.3"), mp.mpf("0.8"), mp.mpf("1.4"), mp.mpf("2.0")
    phi = plateau(r0, r1, r2, r3)
    d1 = lambda r: mp.diff(phi, r)
    d2 = lambda r: mp.diff(phi, r, 2)
    knots = [r0, r1, r2, r3]
    Q = 4
    lap = lambda r: d2(r) + (Q - 1) * d1(r) / r
    s2, s4 = sphere_constant(2), sphere_constant(4)
    return {
        # int (|z|/d)^2 f^2 / d^2
        "hardy_lhs_p2": s2 * radial(lambda r: phi(r) ** 2 * r, knots),
        # int |grad_H f|^2
        "grad_energy_p2": s2 * radial(lambda r: d1(r) ** 2 * r ** 3, knots),
        # int (|z|/d)^2 |grad_H f|^2
        "weighted_grad_p2": s4 * radial(lambda r: d1(r) ** 2 * r ** 3, knots),
        # int |Delta_H f|^2 d^2
        "lap_energy_d2": s4 * radial(lambda r: lap(r) ** 2 * r ** 5, knots),
        # int f^2 (the L2 norm squared)
        "l2": sphere_constant(0) * radial(lambda r: phi(r) ** 2 * r ** 3, knots),
    }


if __name__ == "__main__":
    print("gauge ball volume pi^2/2 =", mp.nstr(sphere_constant(0) / 4, 20))
    for k, v in bump_values().items():
        print(k, mp.nstr(v, 20))
