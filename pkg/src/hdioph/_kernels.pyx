# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.  The pure-Python twins live in _kernels_py.py."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, floor, ceil, pow, ldexp

cnp.import_array()

cdef extern from *:
    ctypedef long long i128 "__int128"


cdef inline i128 _iabs(i128 x) nogil:
    return -x if x < 0 else x


cdef inline i128 _round_even(i128 n, int shift) nogil:
    # n / 2**shift rounded to nearest, ties to even
    cdef i128 one = 1
    cdef i128 d = one << shift
    cdef i128 fl = n >> shift
    cdef i128 rem = n - (fl << shift)
    cdef i128 twice = rem * 2
    if twice > d:
        return fl + 1
    if twice < d:
        return fl
    return fl + (fl & 1)


def carnot_dists(object X, object Y, object T, int shift, long long lam_num,
                 long long lam_den, long long N):
    """Weighted sup-distance from (X, Y, T) / 2**shift to its rounded point at each q <= N.

    Requires |X|, |Y|, |T| < 2**62 and shift <= 60; q*q*T must fit in 127 bits.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(N, dtype=np.float64)
    cdef i128 x = <long long>X
    cdef i128 y = <long long>Y
    cdef i128 t = <long long>T
    cdef i128 one = 1
    cdef i128 D = one << shift
    cdef double Dd = ldexp(1.0, shift)
    cdef double lam = <double>lam_num / <double>lam_den
    cdef long long q
    cdef i128 a, b, c, num, hx, hy, vres
    cdef double dh, dv, qd
    with nogil:
        for q in range(1, N + 1):
            a = _round_even(q * x, shift)
            b = _round_even(q * y, shift)
            hx = _iabs(a * D - q * x)
            hy = _iabs(b * D - q * y)
            num = q * q * t - 2 * q * (a * y - b * x)
            c = _round_even(num, shift)
            vres = _iabs(c * D - num)
            qd = <double>q
            dh = (<double>(hx if hx > hy else hy)) / (qd * Dd)
            dv = sqrt(lam * (<double>vres) / Dd) / qd
            out[q - 1] = dh if dh > dv else dv
    return out


def gauss_sieve(long long K):
    """Totient and Moebius values on canonical a+bi with a*a+b*b <= K."""
    cdef long long M = <long long>floor(sqrt(<double>K))
    while (M + 1) * (M + 1) <= K:
        M += 1
    while M * M > K:
        M -= 1
    phi_arr = np.zeros((M + 1, M + 1), dtype=np.int64)
    mu_arr = np.zeros((M + 1, M + 1), dtype=np.int8)
    cdef long long[:, ::1] phi = phi_arr
    cdef signed char[:, ::1] mu = mu_arr
    cdef long long a, b, n, pa, pb, Np, ca, cb, ta, tb, bmax, lim, p
    cdef long long[:, ::1] primes
    for a in range(1, M + 1):
        for b in range(0, M + 1):
            if a * a + b * b <= K:
                phi[a, b] = a * a + b * b
                mu[a, b] = 1
    # rational primes up to K for the primality test of norms
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] isp = np.ones(K + 1, dtype=np.uint8)
    isp[0] = 0
    if K >= 1:
        isp[1] = 0
    p = 2
    while p * p <= K:
        if isp[p]:
            n = p * p
            while n <= K:
                isp[n] = 0
                n += p
        p += 1
    plist = []
    for a in range(1, M + 1):
        for b in range(1, M + 1):
            n = a * a + b * b
            if n <= K and isp[n]:
                plist.append((a, b))
    for a in range(3, M + 1, 4):
        if isp[a]:
            plist.append((a, 0))
    if not plist:
        return phi_arr, mu_arr
    primes = np.asarray(plist, dtype=np.int64)
    cdef Py_ssize_t k, nprimes = primes.shape[0]
    with nogil:
        for k in range(nprimes):
            pa = primes[k, 0]
            pb = primes[k, 1]
            Np = pa * pa + pb * pb
            lim = K // Np
            # every multiple pi*beta, beta canonical
            for a in range(1, M + 1):
                if a * a > lim:
                    break
                bmax = 0
                while (bmax + 1) * (bmax + 1) + a * a <= lim:
                    bmax += 1
                for b in range(0, bmax + 1):
                    ca = pa * a - pb * b
                    cb = pa * b + pb * a
                    while not (ca > 0 and cb >= 0):
                        ta = ca
                        ca = -cb
                        cb = ta
                    phi[ca, cb] = phi[ca, cb] // Np * (Np - 1)
                    mu[ca, cb] = -mu[ca, cb]
            # multiples of pi^2 are not squarefree
            lim = K // (Np * Np)
            ta = pa * pa - pb * pb
            n = 2 * pa * pb
            for a in range(1, M + 1):
                if a * a > lim:
                    break
                bmax = 0
                while (bmax + 1) * (bmax + 1) + a * a <= lim:
                    bmax += 1
                for b in range(0, bmax + 1):
                    ca = ta * a - n * b
                    cb = ta * b + n * a
                    while not (ca > 0 and cb >= 0):
                        tb = ca
                        ca = -cb
                        cb = tb
                    mu[ca, cb] = 0
    return phi_arr, mu_arr


cdef inline long long _ext_gcd(long long a, long long b, long long* x, long long* y) nogil:
    cdef long long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1, qq, tmp
    while r != 0:
        qq = old_r // r
        tmp = old_r - qq * r
        old_r = r
        r = tmp
        tmp = old_s - qq * s
        old_s = s
        s = tmp
        tmp = old_t - qq * t
        old_t = t
        t = tmp
    if old_r < 0:
        old_r = -old_r
        old_s = -old_s
        old_t = -old_t
    x[0] = old_s
    y[0] = old_t
    return old_r


def siegel_scan(double ure, double uim, double vim, double C, double alpha,
                long long nmax, double slack=1e-9):
    """Rational Siegel points (r/q, p/q) with |q| <= nmax and d <= C |q|^-alpha.

    q runs over canonical a+bi; r = (1+i) rt.  Returns an int64 array of
    rows (a, b, rt_re, rt_im, p_re, p_im) and the float distances.  The
    threshold is widened by ``slack`` so callers can recheck exactly.
    """
    cdef long long nmax2 = nmax * nmax
    cdef long long a, b, g, x0, y0, Nq, m, rr, ri, rr_lo, rr_hi, ri_lo, ri_hi, k, k_lo, k_hi
    cdef long long p0r, p0i, s0, pr, pi_, mg
    cdef double rho, rho2, cr, ci, rad, dr, di, du2, rew, tgt, imw, w, absq, lim_im
    cdef double wre, wim, qre, qim
    rows = []
    dists = []
    for a in range(1, nmax + 1):
        b = 0
        while a * a + b * b <= nmax2:
            Nq = a * a + b * b
            absq = sqrt(<double>Nq)
            rho = C * pow(absq, -alpha) * (1.0 + slack)
            rho2 = rho * rho
            # centre of the r~ disk: q * u * (1 - i) / 2
            wre = a * ure - b * uim
            wim = a * uim + b * ure
            cr = (wre + wim) / 2.0
            ci = (wim - wre) / 2.0
            rad = rho * absq
            g = _ext_gcd(a, b, &x0, &y0)
            rr_lo = <long long>ceil(cr - rad)
            rr_hi = <long long>floor(cr + rad)
            for rr in range(rr_lo, rr_hi + 1):
                dr = rr - cr
                if dr * dr > rad * rad:
                    continue
                lim_im = sqrt(rad * rad - dr * dr)
                ri_lo = <long long>ceil(ci - lim_im)
                ri_hi = <long long>floor(ci + lim_im)
                for ri in range(ri_lo, ri_hi + 1):
                    m = rr * rr + ri * ri
                    if m % g != 0:
                        continue
                    # r/q - u and Re w
                    qre = ((rr - ri) * a + (rr + ri) * b) / <double>Nq
                    qim = ((rr + ri) * a - (rr - ri) * b) / <double>Nq
                    dr = qre - ure
                    di = qim - uim
                    du2 = dr * dr + di * di
                    rew = du2 / 2.0
                    if rew > rho2:
                        continue
                    # target for Im(p/q): Im v + Im(conj(u) r / q)
                    tgt = vim + (ure * qim - uim * qre)
                    mg = m // g
                    p0r = mg * x0
                    p0i = mg * y0
                    s0 = p0i * a - p0r * b
                    lim_im = sqrt(rho2 * rho2 - rew * rew)
                    # Im(p/q) = s0/Nq + k/g
                    k_lo = <long long>ceil((tgt - lim_im - s0 / <double>Nq) * g)
                    k_hi = <long long>floor((tgt + lim_im - s0 / <double>Nq) * g)
                    for k in range(k_lo, k_hi + 1):
                        imw = s0 / <double>Nq + k / <double>g - tgt
                        w = sqrt(rew * rew + imw * imw)
                        if w <= rho2:
                            # p = p0 + i k q / g
                            pr = p0r - k * (b // g)
                            pi_ = p0i + k * (a // g)
                            rows.append((a, b, rr, ri, pr, pi_))
                            dists.append(sqrt(w))
            b += 1
    if rows:
        return np.asarray(rows, dtype=np.int64), np.asarray(dists, dtype=np.float64)
    return np.zeros((0, 6), dtype=np.int64), np.zeros(0, dtype=np.float64)
