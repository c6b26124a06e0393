"""Pure-Python agent phase. Mirrors ``_kernel.pyx`` operation for operation."""

from math import floor

# Moore neighbourhood, row-major
NEIGHBORS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
NDRAWS = 8  # uniforms per agent and turn: move, target, reproduce, source, social, pick, pick2, push dir


def step_function(x, xi5, xi6):
    if x <= xi5:
        return 0.0
    if x >= xi6:
        return 1.0
    return (x - xi5) / (xi6 - xi5)


def lifespan_value(e, f, density, xi1, xi2, xi3, xi4, xi5, xi6):
    v = xi1 + (1.0 - xi3) * (xi2 - xi1) + xi3 * e * f * (xi2 - xi1) - xi4 * xi2 * step_function(density, xi5, xi6)
    if v < 0.0:
        return 0.0
    if v > xi2:
        return xi2
    return v


def pick_destination(i, j, a8, F, E, s, lam, u):
    """Site to head for: argmax of F + a8*E in sight (uniform tie-break), or
    a random Moore neighbour when nothing is in sight. Returns (ti, tj, drifted)."""
    best = -1.0
    nt = 0
    for di in range(-lam, lam + 1):
        ii = (i + di) % s
        for dj in range(-lam, lam + 1):
            jj = (j + dj) % s
            v = F[ii * s + jj] + a8 * E[ii * s + jj]
            if v > best:
                best = v
                nt = 1
            elif v == best:
                nt += 1
    if best <= 0.0:
        di, dj = NEIGHBORS[int(floor(u * 8))]
        return (i + di) % s, (j + dj) % s, False
    pick = int(floor(u * nt))
    c = 0
    for di in range(-lam, lam + 1):
        ii = (i + di) % s
        for dj in range(-lam, lam + 1):
            jj = (j + dj) % s
            if F[ii * s + jj] + a8 * E[ii * s + jj] == best:
                if c == pick:
                    return ii, jj, True
                c += 1
    raise AssertionError("tie scan mismatch")


def torus_sign(d, s):
    d = d % s
    if d == 0:
        return 0
    return 1 if d <= s // 2 else -1


def agent_phase(n, order, draws, age, life, a3, a4, a5, a6, a7, a8, grp, pi, pj, alive,
                in_e, in_f, cared, G, R, E, F, qF, head, nxt, prv, cnt,
                s, lam, xi1, xi2, xi3, xi4, xi5, xi6, intake_mode):
    """Run every agent's actions for one turn, mutating the arrays in place.

    Grids are flat (s*s). Returns (number of agent slots used, fossil consumed).
    """
    # work on Python lists, write back at the end
    arrs = dict(age=age, life=life, a8=a8, grp=grp, pi=pi, pj=pj, alive=alive, in_e=in_e, in_f=in_f,
                cared=cared, G=G, R=R, E=E, F=F, qF=qF, head=head, nxt=nxt, prv=prv, cnt=cnt,
                a3=a3, a4=a4, a5=a5, a6=a6, a7=a7)
    L = {k: v.tolist() for k, v in arrs.items()}
    age_, life_, a8_, grp_, pi_, pj_, alive_ = L["age"], L["life"], L["a8"], L["grp"], L["pi"], L["pj"], L["alive"]
    ine, inf_, cared_ = L["in_e"], L["in_f"], L["cared"]
    G_, R_, E_, F_, qF_ = L["G"], L["R"], L["E"], L["F"], L["qF"]
    head_, nxt_, prv_, cnt_ = L["head"], L["nxt"], L["prv"], L["cnt"]
    a3_, a4_, a5_, a6_, a7_ = L["a3"], L["a4"], L["a5"], L["a6"], L["a7"]
    ss = s * s

    def link(k):
        key = grp_[k] * ss + pi_[k] * s + pj_[k]
        h = head_[key]
        nxt_[k] = h
        prv_[k] = -1
        if h >= 0:
            prv_[h] = k
        head_[key] = k
        cnt_[key] += 1

    def unlink(k):
        key = grp_[k] * ss + pi_[k] * s + pj_[k]
        p, q = prv_[k], nxt_[k]
        if p >= 0:
            nxt_[p] = q
        else:
            head_[key] = q
        if q >= 0:
            prv_[q] = p
        cnt_[key] -= 1

    def nth_member(key, r, skip):
        k = head_[key]
        c = 0
        while k >= 0:
            if k != skip:
                if c == r:
                    return k
                c += 1
            k = nxt_[k]
        raise AssertionError("site list shorter than its count")

    for key in range(2 * ss):
        head_[key] = -1
        cnt_[key] = 0
    for k in range(n):
        link(k)

    m = n
    fossil = 0.0
    dl = draws.tolist()
    for pos in range(n):
        a = int(order[pos])
        u = dl[pos]
        i, j = pi_[a], pj_[a]
        # move
        if u[0] < a3_[a]:
            ti, tj, drifted = pick_destination(i, j, a8_[a], F_, E_, s, lam, u[1])
            if drifted:
                ti = (i + torus_sign(ti - i, s)) % s
                tj = (j + torus_sign(tj - j, s)) % s
            if ti != i or tj != j:
                unlink(a)
                G_[i * s + j] -= 1
                pi_[a], pj_[a] = ti, tj
                i, j = ti, tj
                link(a)
                G_[i * s + j] += 1
        site = i * s + j
        # reproduce
        if u[2] < a4_[a]:
            age_[m] = 0
            life_[m] = life_[a]
            a3_[m], a4_[m], a5_[m], a6_[m], a7_[m], a8_[m] = a3_[a], a4_[a], a5_[a], a6_[a], a7_[a], a8_[a]
            grp_[m] = grp_[a]
            pi_[m], pj_[m] = i, j
            alive_[m] = 1
            ine[m] = 0.0
            inf_[m] = 0.0
            cared_[m] = 0
            link(m)
            G_[site] += 1
            m += 1
        # consume
        if a8_[a] > u[3]:
            take = a6_[a] if a6_[a] < E_[site] else E_[site]
            E_[site] -= take
            fossil += take
        else:
            take = a6_[a] if a6_[a] < R_[site] else R_[site]
            R_[site] -= take
        food = a7_[a] if a7_[a] < F_[site] else F_[site]
        F_[site] -= food
        qF_[site] += food
        ine[a] += take
        inf_[a] += food
        # cooperate or compete
        g = grp_[a]
        own = g * ss + site
        if u[4] < a5_[a]:
            c = cnt_[own] - 1
            if c > 0:
                t = nth_member(own, int(floor(u[5] * c)), a)
                ine[a] -= 0.5 * take
                inf_[a] -= 0.5 * food
                ine[t] += 0.5 * take
                inf_[t] += 0.5 * food
            cared_[a] = 1
        else:
            other = (1 - g) * ss + site
            c = cnt_[other]
            if c > 0:
                t = nth_member(other, int(floor(u[5] * c)), -1)
                unlink(t)
                a8_[t] = 1.0 - a8_[t]
                grp_[t] = 1 - grp_[t]
                link(t)
            c = cnt_[own] - 1
            if c > 0:
                t = nth_member(own, int(floor(u[6] * c)), a)
                di, dj = NEIGHBORS[int(floor(u[7] * 8))]
                unlink(t)
                G_[site] -= 1
                pi_[t] = (i + di) % s
                pj_[t] = (j + dj) % s
                link(t)
                G_[pi_[t] * s + pj_[t]] += 1
        # lifespan, ageing, death
        if intake_mode == 0:
            e = ine[a] if a6_[a] > 0.0 else 0.0
            f = inf_[a] if a7_[a] > 0.0 else 0.0
        else:
            e = a6_[a]
            f = a7_[a]
        life_[a] = lifespan_value(e, f, float(G_[site]), xi1, xi2, xi3, xi4, xi5, xi6)
        age_[a] += 1
        if age_[a] >= life_[a]:
            alive_[a] = 0
            unlink(a)
            G_[site] -= 1

    for k, arr in arrs.items():
        arr[:] = L[k]
    return m, fossil
