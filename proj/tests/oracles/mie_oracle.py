"""Tabulates bistatic E-plane RCS of a dielectric sphere with scipy's spherical Bessel functions.

Writes tests/data/mie_eps3_k{2,6}.csv with columns theta_deg, rcs.
"""
import os

import numpy as np
from scipy.special import spherical_jn, spherical_yn

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "data")


def coefficients(x, m, nmax):
    n = np.arange(1, nmax + 1)
    mx = m * x
    jx, djx = spherical_jn(n, x), spherical_jn(n, x, derivative=True)
    yx, dyx = spherical_yn(n, x), spherical_yn(n, x, derivative=True)
    jm, djm = spherical_jn(n, mx), spherical_jn(n, mx, derivative=True)
    hx, dhx = jx + 1j * yx, djx + 1j * dyx
    psi, dpsi = x * jx, jx + x * djx          # d/dx [x j_n(x)]
    xi, dxi = x * hx, hx + x * dhx
    psim, dpsim = mx * jm, jm + mx * djm
    a = (m * psim * dpsi - psi * dpsim) / (m * psim * dxi - xi * dpsim)
    b = (psim * dpsi - m * psi * dpsim) / (psim * dxi - m * xi * dpsim)
    return n, a, b


def rcs_e_plane(k, radius, eps_r, thetas):
    x = k * radius
    m = np.sqrt(eps_r)
    nmax = int(np.ceil(x + 4 * x ** (1 / 3) + 2)) + 10
    n, a, b = coefficients(x, m, nmax)
    out = []
    for th in thetas:
        mu = np.cos(th)
        # angular functions by the Legendre relations pi_n = P_n^1 / sin, tau_n = dP_n^1 / dtheta
        pi = np.zeros(nmax + 1)
        tau = np.zeros(nmax + 1)
        pi[1] = 1.0
        tau[1] = mu
        for k_ in range(2, nmax + 1):
            pi[k_] = ((2 * k_ - 1) * mu * pi[k_ - 1] - k_ * pi[k_ - 2]) / (k_ - 1)
            tau[k_] = k_ * mu * pi[k_] - (k_ + 1) * pi[k_ - 1]
        f = (2 * n + 1) / (n * (n + 1))
        s2 = np.sum(f * (a * tau[1:] + b * pi[1:]))
        out.append(4 * np.pi * abs(s2) ** 2 / k ** 2)
    return np.array(out)


def main():
    os.makedirs(DATA, exist_ok=True)
    thetas = np.linspace(0.0, np.pi, 181)
    for k in (2.0, 6.0):
        rcs = rcs_e_plane(k, 1.0, 3.0, thetas)
        path = os.path.join(DATA, "mie_eps3_k%d.csv" % int(k))
        with open(path, "w") as fh:
            fh.write("theta_deg,rcs\n")
            for th, s in zip(np.degrees(thetas), rcs):
                fh.write("%.1f,%.17g\n" % (th, s))


if __name__ == "__main__":
    main()
