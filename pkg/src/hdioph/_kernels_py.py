"""Pure-Python versions of the compiled kernels, used when the extension is absent.

Semantics match ``_kernels.pyx`` exactly; only speed differs.
"""
from __future__ import annotations

import math

import numpy as np


def _round_even(n: int, shift: int) -> int:
    fl = n >> shift
    twice = (n - (fl << shift)) * 2
    d = 1 << shift
    if twice > d:
        return fl + 1
    if twice < d:
        return fl
    return fl + (fl & 1)


def carnot_dists(X, Y, T, shift, lam_num, lam_den, N):
    X, Y, T = int(X), int(Y), int(T)
    D = 1 << shift
    Dd = math.ldexp(1.0, shift)
    lam = lam_num / lam_den
    out = np.empty(N, dtype=np.float64)
    for q in range(1, N + 1):
        a = _round_even(q * X, shift)
        b = _round_even(q * Y, shift)
        h = max(abs(a * D - q * X), abs(b * D - q * Y))
        num = q * q * T - 2 * q * (a * Y - b * X)
        c = _round_even(num, shift)
        vres = abs(c * D - num)
        dh = float(h) / (q * Dd)
        dv = math.sqrt(lam * float(vres) / Dd) / q
        out[q - 1] = dh if dh > dv else dv
    return out


def gauss_sieve(K):
    M = math.isqrt(K)
    phi = np.zeros((M + 1, M + 1), dtype=np.int64)
    mu = np.zeros((M + 1, M + 1), dtype=np.int8)
    a = np.arange(M + 1, dtype=np.int64)
    norms = a[:, None] ** 2 + a[None, :] ** 2
    mask = (a[:, None] > 0) & (norms <= K)
    phi[mask] = norms[mask]
    mu[mask] = 1
    isp = np.ones(K + 1, dtype=bool)
    isp[:2] = False
    for p in range(2, math.isqrt(K) + 1):
        if isp[p]:
            isp[p * p :: p] = False
    primes = [(x, y) for x in range(1, M + 1) for y in range(1, M + 1) if x * x + y * y <= K and isp[x * x + y * y]]
    primes += [(x, 0) for x in range(3, M + 1, 4) if isp[x]]
    for pa, pb in primes:
        Np = pa * pa + pb * pb
        for mult, step in (((pa, pb), Np), ((pa * pa - pb * pb, 2 * pa * pb), Np * Np)):
            lim = K // step
            ma, mb = mult
            for x in range(1, math.isqrt(lim) + 1):
                for y in range(0, math.isqrt(lim - x * x) + 1):
                    ca, cb = ma * x - mb * y, ma * y + mb * x
                    while not (ca > 0 and cb >= 0):
                        ca, cb = -cb, ca
                    if step == Np:
                        phi[ca, cb] = phi[ca, cb] // Np * (Np - 1)
                        mu[ca, cb] = -mu[ca, cb]
                    else:
                        mu[ca, cb] = 0
    return phi, mu


def _ext_gcd(a, b):
    old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
    while r:
        qq = old_r // r
        old_r, r = r, old_r - qq * r
        old_s, s = s, old_s - qq * s
        old_t, t = t, old_t - qq * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def siegel_scan(ure, uim, vim, C, alpha, nmax, slack=1e-9):
    rows = []
    dists = []
    nmax2 = nmax * nmax
    for a in range(1, nmax + 1):
        b = 0
        while a * a + b * b <= nmax2:
            Nq = a * a + b * b
            absq = math.sqrt(Nq)
            rho = C * absq ** (-alpha) * (1.0 + slack)
            rho2 = rho * rho
            wre = a * ure - b * uim
            wim = a * uim + b * ure
            cr = (wre + wim) / 2.0
            ci = (wim - wre) / 2.0
            rad = rho * absq
            g, x0, y0 = _ext_gcd(a, b)
            for rr in range(math.ceil(cr - rad), math.floor(cr + rad) + 1):
                dr = rr - cr
                if dr * dr > rad * rad:
                    continue
                lim_im = math.sqrt(rad * rad - dr * dr)
                for ri in range(math.ceil(ci - lim_im), math.floor(ci + lim_im) + 1):
                    m = rr * rr + ri * ri
                    if m % g:
                        continue
                    qre = ((rr - ri) * a + (rr + ri) * b) / Nq
                    qim = ((rr + ri) * a - (rr - ri) * b) / Nq
                    dre = qre - ure
                    dim = qim - uim
                    rew = (dre * dre + dim * dim) / 2.0
                    if rew > rho2:
                        continue
                    tgt = vim + (ure * qim - uim * qre)
                    mg = m // g
                    p0r, p0i = mg * x0, mg * y0
                    s0 = p0i * a - p0r * b
                    lim2 = math.sqrt(rho2 * rho2 - rew * rew)
                    k_lo = math.ceil((tgt - lim2 - s0 / Nq) * g)
                    k_hi = math.floor((tgt + lim2 - s0 / Nq) * g)
                    for k in range(k_lo, k_hi + 1):
                        imw = s0 / Nq + k / g - tgt
                        w = math.sqrt(rew * rew + imw * imw)
                        if w <= rho2:
                            rows.append((a, b, rr, ri, p0r - k * (b // g), p0i + k * (a // g)))
                            dists.append(math.sqrt(w))
            b += 1
    if rows:
        return np.asarray(rows, dtype=np.int64), np.asarray(dists, dtype=np.float64)
    return np.zeros((0, 6), dtype=np.int64), np.zeros(0, dtype=np.float64)
