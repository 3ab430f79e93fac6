"""Finite-difference and brute-force oracles shared by the test modules.

Everything here is deliberately independent of the package's jet machinery:
derivatives come from central differences on plain evaluations, polynomial
values from naive monomial sums, and linking numbers from dense quadrature
of the Gauss double integral.
"""

import numpy as np


def fd_partials(f, t, x, y, z, step=1e-5):
    """Central-difference (dt, dx, dy, dz) of a scalar function f(t,x,y,z)."""
    out = []
    for i in range(4):
        d = [0.0, 0.0, 0.0, 0.0]
        d[i] = step
        fp = f(t + d[0], x + d[1], y + d[2], z + d[3])
        fm = f(t - d[0], x - d[1], y - d[2], z - d[3])
        out.append((fp - fm) / (2.0 * step))
    return out


def fd_gradient(f, t, x, y, z, step=1e-5):
    """Spatial gradient only."""
    return np.array(fd_partials(f, t, x, y, z, step)[1:])


def naive_poly_eval(terms, v, w):
    """Plain monomial sum; the oracle for Horner evaluation."""
    total = 0j
    for (j, k), c in terms.items():
        total = total + c * v**j * w**k
    return total


def gauss_linking_quadrature(curve_a, curve_b, n=1024):
    """Midpoint quadrature of the Gauss linking double integral.

    curve_a/curve_b are callables theta -> 3-vector on [0, 2pi); for smooth
    periodic curves the equal-spaced rule converges spectrally.
    """
    ta = (np.arange(n) + 0.5) * 2.0 * np.pi / n
    tb = (np.arange(n) + 0.5) * 2.0 * np.pi / n
    ra = np.array([curve_a(t) for t in ta])
    rb = np.array([curve_b(t) for t in tb])
    eps = 1e-6
    da = np.array([(curve_a(t + eps) - curve_a(t - eps)) / (2 * eps) for t in ta])
    db = np.array([(curve_b(t + eps) - curve_b(t - eps)) / (2 * eps) for t in tb])
    diff = ra[:, None, :] - rb[None, :, :]
    dist3 = np.sum(diff * diff, axis=2) ** 1.5
    cross = np.cross(da[:, None, :], db[None, :, :])
    integrand = np.sum(cross * diff, axis=2) / dist3
    h = (2.0 * np.pi / n) ** 2
    return integrand.sum() * h / (4.0 * np.pi)


def stereographic_point(alpha, beta):
    """Invert the fixed-time sphere map: (alpha, beta) on S^3 -> (x, y, z).

    Valid at t = 0 where the map is the inverse stereographic projection;
    alpha = 1 (the projection point) must be excluded.
    """
    denom = 1.0 - alpha.real
    return np.array([beta.real / denom, -beta.imag / denom, alpha.imag / denom])
