"""Slow, literal reference implementations used to freeze expected values.

Nothing here imports the package's algorithms beyond the Graph container; each
function follows its definition directly, trading speed for obviousness.
"""

from __future__ import annotations

import cmath
import itertools
import math
from collections import deque
from fractions import Fraction


def step_tokens(g, pointers, loads):
    """Send tokens one at a time round-robin; return new pointers, loads, arc loads."""
    arc_loads = [0] * g.m
    new_loads = [0] * g.n
    new_ptr = list(pointers)
    for v in range(g.n):
        ports = g.ports[v]
        for _ in range(loads[v]):
            e = ports[new_ptr[v]]
            arc_loads[e] += 1
            new_loads[g.succ[e]] += 1
            new_ptr[v] = (new_ptr[v] + 1) % len(ports)
    return new_ptr, new_loads, arc_loads


def recurrence(g, pointers, loads, limit=200_000):
    """(preperiod, period, load rows) by storing every visited state."""
    seen = {}
    states = []
    rows = []
    state = (tuple(pointers), tuple(loads))
    for t in range(limit):
        if state in seen:
            mu = seen[state]
            return mu, t - mu, rows[mu:t]
        seen[state] = t
        states.append(state)
        p, l, a = step_tokens(g, *state)
        rows.append(a)
        state = (tuple(p), tuple(l))
    raise RuntimeError("no recurrence")


def cumulated(rows, e, t, dt):
    p = len(rows)
    return sum(rows[(t + i) % p][e] for i in range(dt))


def empirical_delta(rows, e1, e2, x):
    """Literal max over tau in [0, p) and dt in [0, p]."""
    p = len(rows)
    best = 0
    for tau in range(p):
        for dt in range(p + 1):
            best = max(best, abs(cumulated(rows, e1, tau, dt) - cumulated(rows, e2, tau + x, dt)))
    return best


def idleness(rows):
    """``idle(e) = max_t min{dt >= 1 : C_t^dt(e) >= 1}`` over one period."""
    p, m = len(rows), len(rows[0])
    out = []
    for e in range(m):
        if not any(r[e] for r in rows):
            out.append(math.inf)
            continue
        worst = 0
        for t in range(p):
            dt = 1
            while cumulated(rows, e, t, dt) < 1:
                dt += 1
            worst = max(worst, dt)
        out.append(worst)
    return out


def lcm(values):
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def cycles_of(phi):
    seen, out = set(), []
    for s in range(len(phi)):
        if s in seen:
            continue
        cyc, e = [], s
        while e not in seen:
            seen.add(e)
            cyc.append(e)
            e = phi[e]
        out.append(cyc)
    return out


def zero_one_bfs(g, phi, source_arc):
    """Deque 0-1 BFS on arc x Z_L from ``(source_arc, 0)``; returns {(e, x): dist}."""
    L = lcm(len(c) for c in cycles_of(phi))
    inv = [0] * len(phi)
    for e, f in enumerate(phi):
        inv[f] = e
    dist = {(source_arc, 0): 0}
    dq = deque([(source_arc, 0)])
    while dq:
        e, x = dq.popleft()
        d = dist[(e, x)]
        moves = [((phi[e], (x + 1) % L), 0), ((inv[e], (x - 1) % L), 0)]
        moves += [((f, x), 1) for f in g.ports[g.pred[e]] if f != e]
        for state, w in moves:
            nd = d + w
            if nd < dist.get(state, math.inf):
                dist[state] = nd
                if w == 0:
                    dq.appendleft(state)
                else:
                    dq.append(state)
    return L, dist


def gphi_diameter(g, phi):
    """BFS on V x Z_L with edges taken verbatim from the forward relation, symmetrised."""
    L = lcm(len(c) for c in cycles_of(phi))
    adj = {(v, a): set() for v in range(g.n) for a in range(L)}

    def power(e, t):
        for _ in range(t):
            e = phi[e]
        return e

    for u in range(g.n):
        for e in g.ports[u]:
            for t in range(L):
                v = g.succ[power(e, t)]
                for a in range(L):
                    b = (a + t) % L
                    adj[(u, a)].add((v, b))
                    adj[(v, b)].add((u, a))
    best = 0
    for v in range(g.n):
        dist = {(v, 0): 0}
        q = deque([(v, 0)])
        while q:
            x = q.popleft()
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    q.append(y)
        if len(dist) != len(adj):
            return None
        best = max(best, max(dist.values()))
    return best


# -- additive combinatorics ----------------------------------------------------------


def sumset(a, b, eta):
    return {(x + y) % eta for x in a for y in b}


def frac_norm(x, eta):
    r = Fraction(x % eta, eta)
    return min(r, 1 - r)


def bohr(s, alpha, eta):
    return {xi for xi in range(eta) if all(frac_norm(x * xi, eta) <= alpha for x in s)}


def fourier(a, eta):
    return [abs(sum(cmath.exp(2j * math.pi * x * j / eta) for x in a)) / len(a) for j in range(eta)]


def representation_count(a, kappa, l, eta):
    """Count (a_1..a_k, b_1..b_k) with sum(a) - sum(b) = l by enumeration."""
    a = sorted(a)
    return sum(
        1
        for tup in itertools.product(a, repeat=2 * kappa)
        if (sum(tup[:kappa]) - sum(tup[kappa:]) - l) % eta == 0
    )


def valid_circulations(g, rows):
    """Every phi with pred(phi e) = succ(e) and L_t(e) = L_{t+1}(phi e), by enumeration."""
    p = len(rows)
    col = lambda e, shift: tuple(rows[(t + shift) % p][e] for t in range(p))  # noqa: E731
    choices = []
    for e in range(g.m):
        v = g.succ[e]
        choices.append([f for f in g.ports[v] if col(f, 1) == col(e, 0)])
    out = []
    for combo in itertools.product(*choices):
        if len(set(combo)) == g.m:
            out.append(list(combo))
    return out
