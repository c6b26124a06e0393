# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled agent phase. Mirrors ``_pykernel.agent_phase`` operation for operation."""

from libc.math cimport floor

cdef int NI[8]
cdef int NJ[8]
NI[:] = [-1, -1, -1, 0, 0, 1, 1, 1]
NJ[:] = [-1, 0, 1, -1, 1, -1, 0, 1]


cdef inline long _mod(long a, long s) nogil:
    cdef long r = a % s
    if r < 0:
        r += s
    return r


cdef inline int _torus_sign(long d, long s) nogil:
    d = _mod(d, s)
    if d == 0:
        return 0
    if d <= s // 2:
        return 1
    return -1


cdef inline double _step(double x, double xi5, double xi6) nogil:
    if x <= xi5:
        return 0.0
    if x >= xi6:
        return 1.0
    return (x - xi5) / (xi6 - xi5)


cdef struct Lists:
    long *head
    long *nxt
    long *prv
    long *cnt
    long *grp
    long *pi
    long *pj
    long s
    long ss


cdef inline void _link(Lists *L, long k) nogil:
    cdef long key = L.grp[k] * L.ss + L.pi[k] * L.s + L.pj[k]
    cdef long h = L.head[key]
    L.nxt[k] = h
    L.prv[k] = -1
    if h >= 0:
        L.prv[h] = k
    L.head[key] = k
    L.cnt[key] += 1


cdef inline void _unlink(Lists *L, long k) nogil:
    cdef long key = L.grp[k] * L.ss + L.pi[k] * L.s + L.pj[k]
    cdef long p = L.prv[k]
    cdef long q = L.nxt[k]
    if p >= 0:
        L.nxt[p] = q
    else:
        L.head[key] = q
    if q >= 0:
        L.prv[q] = p
    L.cnt[key] -= 1


cdef inline long _nth(Lists *L, long key, long r, long skip) nogil:
    cdef long k = L.head[key]
    cdef long c = 0
    while k >= 0:
        if k != skip:
            if c == r:
                return k
            c += 1
        k = L.nxt[k]
    return -1


def agent_phase(long n, long[::1] order, double[:, ::1] draws,
                long[::1] age, double[::1] life, double[::1] a3, double[::1] a4, double[::1] a5,
                double[::1] a6, double[::1] a7, double[::1] a8, long[::1] grp, long[::1] pi, long[::1] pj,
                signed char[::1] alive, double[::1] in_e, double[::1] in_f, signed char[::1] cared,
                long[::1] G, double[::1] R, double[::1] E, double[::1] F, double[::1] qF,
                long[::1] head, long[::1] nxt, long[::1] prv, long[::1] cnt,
                long s, long lam, double xi1, double xi2, double xi3, double xi4, double xi5, double xi6,
                int intake_mode):
    cdef Lists L
    L.head = &head[0]
    L.nxt = &nxt[0]
    L.prv = &prv[0]
    L.cnt = &cnt[0]
    L.grp = &grp[0]
    L.pi = &pi[0]
    L.pj = &pj[0]
    L.s = s
    L.ss = s * s
    cdef long ss = s * s
    cdef long key, k, pos, a, i, j, ti, tj, ii, jj, di, dj, site, own, other, c, t, nt, pick, m
    cdef double best, v, take, food, e, f, val, fossil = 0.0
    cdef int drifted, found

    with nogil:
        for key in range(2 * ss):
            head[key] = -1
            cnt[key] = 0
        for k in range(n):
            _link(&L, k)

        m = n
        for pos in range(n):
            a = order[pos]
            i = pi[a]
            j = pj[a]
            # move
            if draws[pos, 0] < a3[a]:
                best = -1.0
                nt = 0
                for di in range(-lam, lam + 1):
                    ii = _mod(i + di, s)
                    for dj in range(-lam, lam + 1):
                        jj = _mod(j + dj, s)
                        v = F[ii * s + jj] + a8[a] * E[ii * s + jj]
                        if v > best:
                            best = v
                            nt = 1
                        elif v == best:
                            nt += 1
                if best <= 0.0:
                    k = <long>floor(draws[pos, 1] * 8)
                    ti = _mod(i + NI[k], s)
                    tj = _mod(j + NJ[k], s)
                else:
                    pick = <long>floor(draws[pos, 1] * nt)
                    c = 0
                    found = 0
                    ti = i
                    tj = j
                    for di in range(-lam, lam + 1):
                        if found:
                            break
                        ii = _mod(i + di, s)
                        for dj in range(-lam, lam + 1):
                            jj = _mod(j + dj, s)
                            if F[ii * s + jj] + a8[a] * E[ii * s + jj] == best:
                                if c == pick:
                                    ti = ii
                                    tj = jj
                                    found = 1
                                    break
                                c += 1
                    ti = _mod(i + _torus_sign(ti - i, s), s)
                    tj = _mod(j + _torus_sign(tj - j, s), s)
                if ti != i or tj != j:
                    _unlink(&L, a)
                    G[i * s + j] -= 1
                    pi[a] = ti
                    pj[a] = tj
                    i = ti
                    j = tj
                    _link(&L, a)
                    G[i * s + j] += 1
            site = i * s + j
            # reproduce
            if draws[pos, 2] < a4[a]:
                age[m] = 0
                life[m] = life[a]
                a3[m] = a3[a]
                a4[m] = a4[a]
                a5[m] = a5[a]
                a6[m] = a6[a]
                a7[m] = a7[a]
                a8[m] = a8[a]
                grp[m] = grp[a]
                pi[m] = i
                pj[m] = j
                alive[m] = 1
                in_e[m] = 0.0
                in_f[m] = 0.0
                cared[m] = 0
                _link(&L, m)
                G[site] += 1
                m += 1
            # consume
            if a8[a] > draws[pos, 3]:
                take = a6[a] if a6[a] < E[site] else E[site]
                E[site] -= take
                fossil += take
            else:
                take = a6[a] if a6[a] < R[site] else R[site]
                R[site] -= take
            food = a7[a] if a7[a] < F[site] else F[site]
            F[site] -= food
            qF[site] += food
            in_e[a] += take
            in_f[a] += food
            # cooperate or compete
            own = grp[a] * ss + site
            if draws[pos, 4] < a5[a]:
                c = cnt[own] - 1
                if c > 0:
                    t = _nth(&L, own, <long>floor(draws[pos, 5] * c), a)
                    in_e[a] -= 0.5 * take
                    in_f[a] -= 0.5 * food
                    in_e[t] += 0.5 * take
                    in_f[t] += 0.5 * food
                cared[a] = 1
            else:
                other = (1 - grp[a]) * ss + site
                c = cnt[other]
                if c > 0:
                    t = _nth(&L, other, <long>floor(draws[pos, 5] * c), -1)
                    _unlink(&L, t)
                    a8[t] = 1.0 - a8[t]
                    grp[t] = 1 - grp[t]
                    _link(&L, t)
                c = cnt[own] - 1
                if c > 0:
                    t = _nth(&L, own, <long>floor(draws[pos, 6] * c), a)
                    k = <long>floor(draws[pos, 7] * 8)
                    _unlink(&L, t)
                    G[site] -= 1
                    pi[t] = _mod(i + NI[k], s)
                    pj[t] = _mod(j + NJ[k], s)
                    _link(&L, t)
                    G[pi[t] * s + pj[t]] += 1
            # lifespan, ageing, death
            if intake_mode == 0:
                e = in_e[a] if a6[a] > 0.0 else 0.0
                f = in_f[a] if a7[a] > 0.0 else 0.0
            else:
                e = a6[a]
                f = a7[a]
            val = xi1 + (1.0 - xi3) * (xi2 - xi1) + xi3 * e * f * (xi2 - xi1) - xi4 * xi2 * _step(<double>G[site], xi5, xi6)
            if val < 0.0:
                val = 0.0
            elif val > xi2:
                val = xi2
            life[a] = val
            age[a] += 1
            if age[a] >= life[a]:
                alive[a] = 0
                _unlink(&L, a)
                G[site] -= 1
    return m, fossil
