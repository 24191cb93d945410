"""Fit 3-Gaussian expansions of zeta=1 Slater orbitals by overlap maximization.

Validation targets (published universal STO-3G expansions):
  1s : alpha = (2.227660584, 0.405771156, 0.109818)
       d     = (0.154328967, 0.535328142, 0.444634542)
  2sp: alpha = (0.994203460, 0.231031231, 0.0751386)
       d(2s) = (-0.099967229, 0.399512826, 0.700115469)
       d(2p) = (0.155916275, 0.607683719, 0.391957393)
"""
import numpy as np
from scipy.optimize import minimize
from scipy.integrate import quad


def sto_radial(n, r):
    # normalized R_{n}(r) with zeta=1, node-less Slater forms
    if n == 1:
        N = 2.0
        return N * np.exp(-r)
    if n == 2:
        N = (2.0 / np.sqrt(3.0))
        return N * r * np.exp(-r)
    if n == 3:
        N = np.sqrt(8.0 / 45.0) / np.sqrt(2.0)  # check numerically below
        return N * r * r * np.exp(-r)
    raise ValueError


# fix 3s normalization numerically
val = quad(lambda r: (r**2 * np.exp(-r))**2 * r**2, 0, 60)[0]
N3 = 1.0 / np.sqrt(val)


def sto3(r):
    return N3 * r**2 * np.exp(-r)


def gauss_radial(l, a, r):
    # normalized radial part of a Cartesian gaussian of angular momentum l
    if l == 0:
        N = (2 * a / np.pi) ** 0.75
        return N * np.exp(-a * r * r)
    N = (2 * a / np.pi) ** 0.75 * 2 * np.sqrt(a)
    return N * r * np.exp(-a * r * r) / np.sqrt(3) * np.sqrt(3)  # same radial for p with Y_1m


def radial_overlap(f, g):
    return quad(lambda r: f(r) * g(r) * r * r, 0, 60, limit=200)[0]


def channel_best(alphas, sto_fun, l):
    k = len(alphas)
    s = np.array([radial_overlap(sto_fun, lambda r, a=a: gauss_radial(l, a, r)) for a in alphas])
    S = np.zeros((k, k))
    for i, ai in enumerate(alphas):
        for j, aj in enumerate(alphas):
            S[i, j] = radial_overlap(lambda r: gauss_radial(l, ai, r), lambda r: gauss_radial(l, aj, r))
    d = np.linalg.solve(S, s)
    ov2 = s @ d
    d = d / np.sqrt(d @ S @ d)
    return ov2, d


def fit_1s():
    def neg(logalpha):
        ov2, _ = channel_best(np.exp(logalpha), lambda r: sto_radial(1, r), 0)
        return -ov2
    x0 = np.log([2.0, 0.4, 0.1])
    res = minimize(neg, x0, method="Nelder-Mead", options=dict(xatol=1e-12, fatol=1e-14, maxiter=4000))
    a = np.sort(np.exp(res.x))[::-1]
    _, d = channel_best(a, lambda r: sto_radial(1, r), 0)
    return a, d, -res.fun


def fit_sp(n):
    sto_s = (lambda r: sto_radial(2, r)) if n == 2 else sto3
    sto_p = sto_s  # same radial form for node-less Slater ns / np
    def neg(logalpha):
        a = np.exp(logalpha)
        o1, _ = channel_best(a, sto_s, 0)
        o2, _ = channel_best(a, sto_p, 1)
        return -(o1 + o2)
    x0 = np.log([1.0, 0.25, 0.08]) if n == 2 else np.log([0.3, 0.09, 0.03])
    res = minimize(neg, x0, method="Nelder-Mead", options=dict(xatol=1e-12, fatol=1e-14, maxiter=6000))
    a = np.sort(np.exp(res.x))[::-1]
    _, ds = channel_best(a, sto_s, 0)
    _, dp = channel_best(a, sto_p, 1)
    return a, ds, dp


a1, d1, ov = fit_1s()
print("1s  alpha:", a1, " d:", d1, " (overlap^2  %.8f)" % ov)
a2, d2s, d2p = fit_sp(2)
print("2sp alpha:", a2)
print("    d2s  :", d2s)
print("    d2p  :", d2p)
a3, d3s, d3p = fit_sp(3)
print("3sp alpha:", a3)
print("    d3s  :", d3s)
print("    d3p  :", d3p)
