"""50-digit reference values of P(a, z) = gamma(a, z) / Gamma(a).

Grid: 40 values of a log-spaced in [1, 1e6] and 40 values of lambda = z / a
log-spaced in [0.25, 4]. The (a, z) pairs written to the CSV are the exact
binary64 inputs used for the reference evaluation.

Evaluation is independent of the library: a positive-term power series for
z < a and the Legendre continued fraction (modified Lentz) for Q otherwise,
carried out at 60 significant digits.
"""
import sys
import numpy as np
import mpmath as mp

mp.mp.dps = 60
EPS = mp.mpf(10) ** -55


def log_prefactor(a, z):
    return a * mp.log(z) - z - mp.loggamma(a)


def lower_series(a, z):
    term = mp.mpf(1) / a
    total = term
    k = 1
    while True:
        term *= z / (a + k)
        total += term
        if term < EPS * total:
            break
        k += 1
    return mp.exp(log_prefactor(a, z)) * total


def upper_cf(a, z):
    tiny = mp.mpf(10) ** -300
    b = z + 1 - a
    c = 1 / tiny
    d = 1 / b
    h = d
    i = 1
    while True:
        an = -i * (i - a)
        b += 2
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1 / d
        delta = d * c
        h *= delta
        if abs(delta - 1) < EPS:
            break
        i += 1
    return mp.exp(log_prefactor(a, z)) * h


def reg_lower(a, z):
    a = mp.mpf(a)
    z = mp.mpf(z)
    if z < a:
        return lower_series(a, z)
    return 1 - upper_cf(a, z)


if __name__ == '__main__':
    avals = np.logspace(0.0, 6.0, 40)
    lams = np.logspace(np.log10(0.25), np.log10(4.0), 40)
    out = sys.argv[1] if len(sys.argv) > 1 else 'gamma_grid.csv'
    with open(out, 'w') as f:
        f.write('a,z,p\n')
        for a in avals:
            for lam in lams:
                z = float(a * lam)
                p = reg_lower(float(a), z)
                f.write('%r,%r,%s\n' % (float(a), z, mp.nstr(p, 40, min_fixed=-1, max_fixed=0)))
