"""Independent evaluation of alpha_2(t) for the constant-density model
(wave, alpha = d = 1, unit C) with fractional gamma, H = 0.75.

Uses QUADPACK's algebraic-weight rule for the |w|^{2H-2} singularity instead
of the inverse-CDF substitution of the C++ oracle.
"""
import sys

import numpy as np
from scipy.integrate import quad

H = 0.75
CH = H * (2 * H - 1)
E = 2 * H - 2
GL_X, GL_W = np.polynomial.legendre.leggauss(4)


def gauss(f, lo, hi):
    if hi <= lo:
        return 0.0
    m, h = 0.5 * (hi + lo), 0.5 * (hi - lo)
    return h * sum(w * f(m + h * x) for x, w in zip(GL_X, GL_W))


def sgn_sq(k):
    return k * abs(k)


def gamma_weighted(f, t, breaks=()):
    """int_{-t}^{t} gamma(w) f(w) dw."""
    total = 0.0
    for sign in (1.0, -1.0):
        pts = sorted({abs(b) for b in breaks if 0 < abs(b) < t})
        edges = [0.0] + pts + [t]
        for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
            if i == 0:
                v, _ = quad(lambda w: f(sign * w), lo, hi, weight="alg", wvar=(E, 0.0),
                            epsabs=1e-13, epsrel=1e-10, limit=200)
            else:
                v, _ = quad(lambda w: f(sign * w) * w ** E, lo, hi, epsabs=1e-13,
                            epsrel=1e-10, limit=200)
            total += CH * v
    return total


def t_same(t):
    def inner(p):
        def f(r):
            R = t - max(0.0, r) - max(0.0, -p) - max(0.0, p - r)
            return R ** 4 if R > 0 else 0.0
        return gamma_weighted(f, t, (p,))
    return gamma_weighted(inner, t) / 96.0


def a_int(t, s, r, p):
    c = min(p - s, r - p)
    lo, hi = max(0.0, -p), min(t - p + s, t - r)
    if hi <= lo or c <= 0:
        return 0.0
    f = lambda a: (sgn_sq(2 * a + p + c) - sgn_sq(2 * a + p - c) - sgn_sq(c - p)
                   - sgn_sq(p + c))
    br = 0.5 * (c - p)
    if lo < br < hi:
        return gauss(f, lo, br) + gauss(f, br, hi)
    return gauss(f, lo, hi)


def t_cross(t):
    def inner(s):
        def f(r):
            if r <= s:
                return 0.0
            pts = [x for x in (0.0, 0.5 * (s + r), s + r, t + s, r - t, 0.5 * s,
                               t + 1.5 * s, 0.5 * r, 1.5 * r - t) if s < x < r]
            v, _ = quad(lambda p: a_int(t, s, r, p), s, r, points=pts or None,
                        epsabs=1e-14, epsrel=1e-11, limit=200)
            return v
        return gamma_weighted(f, t, (s,))
    return gamma_weighted(inner, t) / 32.0


if __name__ == "__main__":
    for t in map(float, sys.argv[1:] or ["0.5", "1.0"]):
        print(t, repr(2 * (t_same(t) + t_cross(t))), flush=True)
