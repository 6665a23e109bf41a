# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: 64-bit primality, factoring, and the candidate screen.

Mirrors ``_pykernel``; see that module for the contracts.
"""

from libc.math cimport log

from abclll import _pykernel

cdef extern from *:
    """
    typedef unsigned long long abc_u64;
    typedef unsigned __int128 abc_u128;
    typedef __int128 abc_i128;

    static inline abc_u64 abc_mulmod(abc_u64 a, abc_u64 b, abc_u64 m) {
        return (abc_u64)(((abc_u128)a * b) % m);
    }
    static inline abc_u64 abc_step(abc_u64 y, abc_u64 c, abc_u64 m) {
        return (abc_u64)(((abc_u128)y * y + c) % m);
    }
    static abc_u64 abc_powmod(abc_u64 a, abc_u64 e, abc_u64 m) {
        abc_u64 r = 1 % m;
        a %= m;
        while (e) {
            if (e & 1) r = abc_mulmod(r, a, m);
            a = abc_mulmod(a, a, m);
            e >>= 1;
        }
        return r;
    }
    static abc_u64 abc_gcd(abc_u64 a, abc_u64 b) {
        while (b) { abc_u64 t = a % b; a = b; b = t; }
        return a;
    }
    static int abc_is_prime(abc_u64 n) {
        static const abc_u64 bases[12] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
        int i, r, s = 0;
        abc_u64 d, x;
        if (n < 2) return 0;
        for (i = 0; i < 12; i++) {
            if (n == bases[i]) return 1;
            if (n % bases[i] == 0) return 0;
        }
        d = n - 1;
        while ((d & 1) == 0) { d >>= 1; s++; }
        for (i = 0; i < 12; i++) {
            int composite = 1;
            x = abc_powmod(bases[i], d, n);
            if (x == 1 || x == n - 1) continue;
            for (r = 1; r < s; r++) {
                x = abc_mulmod(x, x, n);
                if (x == n - 1) { composite = 0; break; }
            }
            if (composite) return 0;
        }
        return 1;
    }
    static abc_u64 abc_isqrt(abc_u64 n) {
        abc_u64 x = 0, bit = (abc_u64)1 << 62;
        while (bit > n) bit >>= 2;
        while (bit) {
            if (n >= x + bit) { n -= x + bit; x = (x >> 1) + bit; }
            else x >>= 1;
            bit >>= 2;
        }
        return x;
    }
    /* Brent's rho: a nontrivial factor of odd composite n, or 0 on budget exhaustion. */
    static abc_u64 abc_rho(abc_u64 n, abc_u64 budget) {
        abc_u64 used = 0, c = 0;
        if ((n & 1) == 0) return 2;
        while (used < budget) {
            abc_u64 y = 2, x = 2, ys = 2, q = 1, g = 1, r = 1, m = 128, k, i, lim;
            c++;
            while (g == 1 && used < budget) {
                x = y;
                for (i = 0; i < r; i++) y = abc_step(y, c, n);
                k = 0;
                while (k < r && g == 1) {
                    ys = y;
                    lim = (m < r - k) ? m : r - k;
                    for (i = 0; i < lim; i++) {
                        y = abc_step(y, c, n);
                        q = abc_mulmod(q, x > y ? x - y : y - x, n);
                    }
                    used += lim;
                    g = abc_gcd(q, n);
                    k += m;
                }
                r <<= 1;
            }
            if (g == n) {
                g = 1;
                while (g == 1) {
                    ys = abc_step(ys, c, n);
                    g = abc_gcd(x > ys ? x - ys : ys - x, n);
                }
            }
            if (g > 1 && g < n) return g;
        }
        return 0;
    }
    /* Appends prime factors of n to out[*cnt]; returns the unsplit part (1 on success). */
    static abc_u64 abc_split(abc_u64 n, abc_u64 budget, abc_u64 *out, int *cnt) {
        abc_u64 r, d, left, right;
        if (n == 1) return 1;
        if (abc_is_prime(n)) { out[(*cnt)++] = n; return 1; }
        r = abc_isqrt(n);
        if (r * r == n) {
            left = abc_split(r, budget, out, cnt);
            right = abc_split(r, budget, out, cnt);
            return left * right;
        }
        d = abc_rho(n, budget);
        if (d == 0) return n;
        left = abc_split(d, budget, out, cnt);
        right = abc_split(n / d, budget, out, cnt);
        return left * right;
    }
    /* x = c1*a + c2*b; returns 0 if the result leaves (-limit, limit). */
    static int abc_comb(long long c1, long long a, long long c2, long long b,
                        long long limit, long long *x) {
        abc_i128 v = (abc_i128)c1 * a + (abc_i128)c2 * b;
        if (v >= (abc_i128)limit || v <= -(abc_i128)limit) return 0;
        *x = (long long)v;
        return 1;
    }
    """
    ctypedef unsigned long long u64 "abc_u64"
    int abc_is_prime(u64 n) nogil
    u64 abc_split(u64 n, u64 budget, u64 *out, int *cnt) nogil
    u64 abc_rho(u64 n, u64 budget) nogil
    int abc_comb(long long c1, long long a, long long c2, long long b,
                 long long limit, long long *x) nogil

BACKEND = "cython"

cdef enum:
    MAX_PRIMES = 64
    MAX_SCREEN_PRIMES = 256

cdef u64 U64_MAX = 0xFFFFFFFFFFFFFFFF
cdef list _SMALL = _pykernel.SMALL_PRIMES
cdef int _NSMALL = len(_SMALL)
cdef u64 _small[6542]
cdef int _i
for _i in range(_NSMALL):
    _small[_i] = _SMALL[_i]

cdef long long ENTRY_LIMIT = _pykernel.SCREEN_ENTRY_LIMIT
cdef int TRIAL_LIMIT = _pykernel.SCREEN_TRIAL_LIMIT
cdef u64 RHO_BUDGET = _pykernel.SCREEN_RHO_BUDGET
cdef double SLACK = _pykernel.SCREEN_SLACK


def is_prime_u64(n):
    if n < 0 or n > U64_MAX:
        raise OverflowError("n outside [0, 2**64)")
    return bool(abc_is_prime(<u64>n))


def rho_brent(n, budget):
    if n <= 0 or n > U64_MAX:
        return _pykernel.rho_brent(n, budget)
    return int(abc_rho(<u64>n, <u64>min(budget, U64_MAX)))


cdef list _collect(u64 *fac, int cnt):
    cdef int i, j
    cdef u64 t
    # insertion sort, cnt <= 64
    for i in range(1, cnt):
        t = fac[i]
        j = i - 1
        while j >= 0 and fac[j] > t:
            fac[j + 1] = fac[j]
            j -= 1
        fac[j + 1] = t
    cdef list pairs = []
    i = 0
    while i < cnt:
        j = i
        while j < cnt and fac[j] == fac[i]:
            j += 1
        pairs.append((int(fac[i]), j - i))
        i = j
    return pairs


def factor_u64(n, trial_bound, rho_budget):
    if n < 1 or n > U64_MAX:
        raise OverflowError("n outside [1, 2**64)")
    cdef u64 m = n
    cdef u64 bound = min(trial_bound, U64_MAX)
    cdef u64 budget = min(rho_budget, U64_MAX)
    cdef u64 fac[MAX_PRIMES]
    cdef int cnt = 0
    cdef int k
    cdef u64 p
    for k in range(_NSMALL):
        p = _small[k]
        if p > bound or p * p > m:
            break
        while m % p == 0:
            m //= p
            fac[cnt] = p
            cnt += 1
    cdef u64 cof = abc_split(m, budget, fac, &cnt)
    return _collect(fac, cnt), int(cof)


cdef int _screen_factor(u64 n, u64 *out, int *cnt) nogil:
    cdef int k
    cdef u64 p
    for k in range(_NSMALL):
        p = _small[k]
        if p >= <u64>TRIAL_LIMIT or p * p > n:
            break
        while n % p == 0:
            n //= p
            out[cnt[0]] = p
            cnt[0] += 1
    return abc_split(n, RHO_BUDGET, out, cnt) == 1


def screen_candidates(v1, v2, pairs, base_primes, base_vals, base_logx,
                      double p_threshold, double rho_threshold):
    cdef int nb = len(base_primes)
    if nb > MAX_SCREEN_PRIMES // 2 or max(abs(x) for x in (*v1, *v2)) >= ENTRY_LIMIT:
        return _pykernel.screen_candidates(v1, v2, pairs, base_primes, base_vals,
                                           base_logx, p_threshold, rho_threshold)
    cdef long long a[3]
    cdef long long b[3]
    cdef long long v[3]
    cdef double logx[3]
    cdef u64 bp[MAX_SCREEN_PRIMES]
    cdef int bv[3][MAX_SCREEN_PRIMES]
    cdef double blog[MAX_SCREEN_PRIMES]
    cdef u64 primes[MAX_SCREEN_PRIMES]
    cdef int ev[3][MAX_SCREEN_PRIMES]
    cdef double plog[MAX_SCREEN_PRIMES]
    cdef u64 fac[MAX_PRIMES]
    cdef int i, j, t, np, cnt, ok, lo, hi
    cdef long long c1, c2, s, g1, g2, tmp
    cdef u64 p
    cdef double log_rad, log_g, lmax, lsum, lt, power, szpiro
    for i in range(3):
        a[i] = v1[i]
        b[i] = v2[i]
        logx[i] = base_logx[i]
    for j in range(nb):
        bp[j] = base_primes[j]
        blog[j] = log(<double>bp[j])
        for i in range(3):
            bv[i][j] = base_vals[i][j]
    out = []
    for c1_obj, c2_obj in pairs:
        if abs(c1_obj) >= ENTRY_LIMIT or abs(c2_obj) >= ENTRY_LIMIT:
            out.extend(_pykernel.screen_candidates(v1, v2, [(c1_obj, c2_obj)], base_primes,
                                                   base_vals, base_logx, p_threshold,
                                                   rho_threshold))
            continue
        c1 = c1_obj
        c2 = c2_obj
        g1 = c1 if c1 >= 0 else -c1
        g2 = c2 if c2 >= 0 else -c2
        while g2:
            tmp = g1 % g2
            g1 = g2
            g2 = tmp
        if g1 != 1:
            continue
        ok = 1
        for i in range(3):
            if not abc_comb(c1, a[i], c2, b[i], ENTRY_LIMIT, &v[i]):
                ok = 0
        if not ok:
            out.extend(_pykernel.screen_candidates(v1, v2, [(c1_obj, c2_obj)], base_primes,
                                                   base_vals, base_logx, p_threshold,
                                                   rho_threshold))
            continue
        if v[0] == 0 or v[1] == 0 or v[2] == 0:
            continue
        if v[0] < 0:
            for i in range(3):
                v[i] = -v[i]
        vec = (v[0], v[1], v[2])
        np = nb
        for j in range(nb):
            primes[j] = bp[j]
            plog[j] = blog[j]
            for i in range(3):
                ev[i][j] = bv[i][j]
        ok = 1
        for i in range(3):
            cnt = 0
            if not _screen_factor(<u64>(v[i] if v[i] > 0 else -v[i]), fac, &cnt):
                ok = 0
                break
            for t in range(cnt):
                p = fac[t]
                for j in range(np):
                    if primes[j] == p:
                        break
                else:
                    if np >= MAX_SCREEN_PRIMES:
                        ok = 0
                        break
                    j = np
                    primes[j] = p
                    plog[j] = log(<double>p)
                    ev[0][j] = 0
                    ev[1][j] = 0
                    ev[2][j] = 0
                    np += 1
                ev[i][j] += 1
            if not ok:
                break
        if not ok:
            out.append(vec)
            continue
        log_rad = 0.0
        log_g = 0.0
        for j in range(np):
            lo = ev[0][j]
            hi = ev[0][j]
            for i in range(1, 3):
                if ev[i][j] < lo:
                    lo = ev[i][j]
                if ev[i][j] > hi:
                    hi = ev[i][j]
            if hi > lo:
                log_rad += plog[j]
            if lo:
                log_g += lo * plog[j]
        if log_rad <= 0.0:
            out.append(vec)
            continue
        lmax = -1e300
        lsum = 0.0
        for i in range(3):
            lt = log(<double>(v[i] if v[i] > 0 else -v[i])) + logx[i]
            lsum += lt
            if lt > lmax:
                lmax = lt
        power = (lmax - log_g) / log_rad
        szpiro = (lsum - 3.0 * log_g) / log_rad
        if power > p_threshold - SLACK or szpiro > rho_threshold - SLACK:
            out.append(vec)
    return out
