"""Independent reference computations used only by the tests."""

import mpmath
from sympy import nsimplify
from sympy.physics.wigner import wigner_3j as sympy_3j
from sympy.physics.wigner import wigner_6j as sympy_6j

mpmath.mp.dps = 40


def exact_3j(j1, j2, j3, m1, m2, m3):
    args = [nsimplify(a) for a in (j1, j2, j3, m1, m2, m3)]
    return sympy_3j(*args)


def exact_6j(*js):
    try:
        return sympy_6j(*[nsimplify(a) for a in js])
    except ValueError:
        # sympy refuses non-integer triad perimeters; the symbol is zero there
        return 0


def thermal_entropy_mp(n):
    n = mpmath.mpf(n)
    if n == 0:
        return mpmath.mpf(0)
    return (n + 1) * mpmath.log(n + 1) - n * mpmath.log(n)


def cv_info_mp(eta, s):
    eta, s = mpmath.mpf(eta), mpmath.mpf(s)
    n = -mpmath.mpf(1) / 2 + (s + 1 / s) / 4
    return thermal_entropy_mp(eta * n) - thermal_entropy_mp((1 - eta) * n)


def single_photon_mp(eta, mu):
    eta, mu = mpmath.mpf(eta), mpmath.mpf(mu)
    x = mu * (1 - eta)
    return 1 - 3 * x / (4 * eta) * mpmath.log(4 * mpmath.e * eta / x, 2)
