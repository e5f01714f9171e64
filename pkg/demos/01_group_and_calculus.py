"""Tour of the group law, the gauge and the horizontal frame at n = 1."""

import numpy as np

from heisenberg_hardy import (ScalarField, check_gauge_identities, compose, dilate, gauge,
                              horizontal_gradient, inverse, sub_laplacian)

# the group law is not commutative
a, b = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
print("a o b =", compose(a, b), " b o a =", compose(b, a))
print("a o a^-1 =", compose(a, inverse(a)))

# the gauge is homogeneous of degree one under dilations
xi = np.array([0.6, -0.4, 0.5])
for lam in (0.5, 2.0, 10.0):
    print(f"lambda={lam:5.1f}  d(dilate)/d = {gauge(dilate(lam, xi)) / gauge(xi):.12f}")

# |z|^2 has horizontal gradient 2(x, y) and sub-Laplacian 4n
z2 = ScalarField(eval=lambda p: p[..., 0] ** 2 + p[..., 1] ** 2,
                 grad_coords=lambda p: np.stack([2 * p[..., 0], 2 * p[..., 1], 0 * p[..., 2]], -1),
                 label="|z|^2")
print("grad_H |z|^2 at xi:", horizontal_gradient(z2, xi))
print("Delta_H |z|^2 at xi:", sub_laplacian(z2, xi))

# gauge identities, finite differences against closed forms
rng = np.random.default_rng(0)
pts = rng.uniform(-1.5, 1.5, size=(200, 3))
pts = pts[gauge(pts) > 0.2]
for p in (1.5, 2.0, 3.0):
    rep = check_gauge_identities(pts, p)
    print(f"p={p}: worst identity residual {rep.max_residual():.2e}")
