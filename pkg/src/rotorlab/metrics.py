"""Cumulated loads, empirical similarity, idleness and discrepancy of a recurrent trace.

All quantities are exact integers (or Fractions).  The trace is one full
period of an exactly periodic sequence, so every ``max``/``limsup`` over time
reduces to a finite scan of that period.

Empirical similarity uses one identity throughout: with ``S_e(s) = C_0^s(e)``,
``C_tau^dt(e1) - C_{tau+x}^dt(e2) = D(tau + dt) - D(tau)`` where
``D(s) = S_e1(s) - S_e2(s + x)``.  Per-period arc totals coincide, so ``D`` is
periodic and the maximum over windows is simply ``max D - min D``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .engine import LoadTrace
from .graph import Graph


class UnequalPeriodTotals(ValueError):
    """Arc totals over a period differ, so the trace is not a valid recurrent one."""


def prefix_sums(trace: LoadTrace) -> np.ndarray:
    """``S[s, e] = C_0^s(e)`` for ``s in [0, p]``."""
    out = np.zeros((trace.period + 1, trace.m), dtype=np.int64)
    np.cumsum(trace.loads, axis=0, out=out[1:])
    return out


def period_total(trace: LoadTrace) -> int:
    """Tokens per arc over one period (``k p / m``); raises if arcs disagree."""
    totals = trace.loads.sum(axis=0)
    if (totals != totals[0]).any():
        raise UnequalPeriodTotals("per-period arc totals are not all equal")
    return int(totals[0])


def _extended(trace: LoadTrace, length: int) -> np.ndarray:
    """``S_e(s)`` for ``s in [0, length)`` using periodic extension."""
    p = trace.period
    reps = -(-length // p) + 1
    tiled = np.tile(trace.loads, (reps, 1))[: length - 1]
    out = np.zeros((length, trace.m), dtype=np.int64)
    np.cumsum(tiled, axis=0, out=out[1:])
    return out


def cumulated_load(trace: LoadTrace, e: int, t: int, dt: int) -> int:
    """``C_t^dt(e)``: tokens crossing ``e`` during steps ``t .. t+dt-1``."""
    if dt < 0:
        raise ValueError("dt must be non-negative")
    p = trace.period
    q, r = divmod(dt, p)
    col = trace.loads[:, e]
    t0 = t % p
    total = int(col.sum())
    if t0 + r <= p:
        part = int(col[t0 : t0 + r].sum())
    else:
        part = int(col[t0:].sum() + col[: t0 + r - p].sum())
    return q * total + part


def window_sums(trace: LoadTrace, dt: int) -> np.ndarray:
    """``W[t, e] = C_t^dt(e)`` for every ``t in [0, p)``."""
    if dt < 0:
        raise ValueError("dt must be non-negative")
    p = trace.period
    q, r = divmod(dt, p)
    ext = _extended(trace, 2 * p + 1)
    totals = ext[p]
    return q * totals[None, :] + ext[r : r + p] - ext[:p]


def empirical_delta(trace: LoadTrace, e1: int, e2: int, t: int) -> int:
    """``max_{tau, dt >= 0} |C_tau^dt(e1) - C_{tau+t}^dt(e2)|``."""
    period_total(trace)
    p = trace.period
    ext = _extended(trace, 2 * p)
    r = t % p
    d = ext[:p, e1] - ext[r : r + p, e2]
    return int(d.max() - d.min())


def empirical_delta_profile(trace: LoadTrace, e1: int, e2: int) -> np.ndarray:
    """``[x] -> empirical delta_x(e1, e2)`` for ``x in [0, p)``."""
    period_total(trace)
    p = trace.period
    ext = _extended(trace, 2 * p)
    idx = np.arange(p)[:, None] + np.arange(p)[None, :]  # [x, s] -> s + x
    d = ext[:p, e1][None, :] - ext[idx, e2]
    return d.max(axis=1) - d.min(axis=1)


def empirical_diagonal(trace: LoadTrace) -> np.ndarray:
    """``[e, x] -> empirical delta_x(e, e)`` for every arc and ``x in [0, p)``."""
    period_total(trace)
    p, m = trace.period, trace.m
    ext = _extended(trace, 2 * p)
    out = np.empty((m, p), dtype=np.int64)
    base = ext[:p]
    for x in range(p):
        d = base - ext[x : x + p]
        out[:, x] = d.max(axis=0) - d.min(axis=0)
    return out


def idleness(trace: LoadTrace) -> tuple[tuple[float, ...], float]:
    """Per-arc longest wait between visits (with wrap-around) and its maximum."""
    p = trace.period
    per_arc: list[float] = []
    for e in range(trace.m):
        visits = np.flatnonzero(trace.loads[:, e])
        if visits.size == 0:
            per_arc.append(math.inf)
            continue
        gaps = np.diff(np.append(visits, visits[0] + p))
        per_arc.append(int(gaps.max()))
    return tuple(per_arc), max(per_arc)


def cumulated_discrepancy(trace: LoadTrace, dt: int) -> int:
    """``max_t max_{e1,e2} |C_t^dt(e1) - C_t^dt(e2)|`` over one period."""
    w = window_sums(trace, dt)
    return int((w.max(axis=1) - w.min(axis=1)).max())


def time_average_deviation(trace: LoadTrace, T: int) -> tuple[Fraction, Fraction]:
    """``max_{e,t} |C_t^T(e) - kT/m|`` and the same divided by ``T``."""
    if T < 1:
        raise ValueError("T must be >= 1")
    w = window_sums(trace, T)
    m, k = trace.m, trace.token_count
    dev = Fraction(int(np.abs(m * w - k * T).max()), m)
    return dev, dev / T


def deviation_within_delta(trace: LoadTrace, diag: np.ndarray, T: int) -> bool:
    """``|C_t^T(e) - kT/m| <= delta_T(e, e)`` for every arc and start ``t``."""
    w = window_sums(trace, T)
    m, k = trace.m, trace.token_count
    bound = diag[:, T % trace.period]
    return bool((np.abs(m * w - k * T) <= m * bound[None, :]).all())


# -- random-walk baseline ------------------------------------------------------------


def random_walk_baseline(
    g: Graph, k: int, horizon: int, trials: int, seed: int = 0, chunk: int = 4096
) -> np.ndarray:
    """Largest inter-visit gap over all arcs for ``k`` independent random walkers.

    Walkers start at uniformly random nodes and each step take a uniformly
    random outgoing arc.  An arc visited fewer than twice within the horizon
    counts as a gap of ``horizon``.  Trial ``i`` draws from its own generator
    spawned from ``seed``, so results do not depend on ``trials``.
    """
    if horizon < 1 or trials < 1 or k < 1:
        raise ValueError("horizon, trials and k must be >= 1")
    m = g.m
    deg = np.asarray(g.out_degree, dtype=np.int64)
    start = np.concatenate([[0], np.cumsum(deg)[:-1]])
    port_arcs = np.asarray([e for v in range(g.n) for e in g.ports[v]], dtype=np.int64)
    succ = np.asarray(g.succ, dtype=np.int64)
    gens = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]
    pos = np.stack([gen.integers(0, g.n, size=k) for gen in gens])
    last = np.full((trials, m), -1, dtype=np.int64)
    best = np.zeros((trials, m), dtype=np.int64)
    visits = np.zeros((trials, m), dtype=np.int64)
    rows = np.repeat(np.arange(trials), k).reshape(trials, k)
    t = 0
    while t < horizon:
        steps = min(chunk, horizon - t)
        draws = np.stack([gen.random((steps, k)) for gen in gens], axis=1)  # steps, trials, k
        for s in range(steps):
            arcs = port_arcs[start[pos] + (draws[s] * deg[pos]).astype(np.int64)]
            prev = last[rows, arcs]
            gap = np.where(prev >= 0, t - prev, 0)
            np.maximum.at(best, (rows, arcs), gap)
            np.add.at(visits, (rows, arcs), 1)
            last[rows, arcs] = t
            pos = succ[arcs]
            t += 1
    best = np.where(visits >= 2, best, horizon)
    return best.max(axis=1)


# -- report ---------------------------------------------------------------------------


def bound_values(g: Graph, k: int, diam: int) -> dict[str, float]:
    """Idleness bounds without hidden constants; polylog factors are ``log2(m)^2``."""
    m, n = g.m, g.n
    lg2 = max(math.log2(m), 1.0) ** 2
    out = {
        "gcd": math.gcd(k, m) * m / k * lg2,
        "diam": m / k * max(diam, 1),
        "sqrt_n": m / k * math.sqrt(n) * lg2,
        "sqrt_k": m / k * math.sqrt(k) * lg2,
    }
    if 4 * k > 3 * m:
        out["dense"] = 4.0
    if g.is_tree:
        out["tree"] = m / k
    return out


@dataclass(frozen=True)
class MetricsReport:
    idleness_per_arc: tuple[float, ...]
    idleness: float
    cumulated_discrepancy: dict[int, int]
    time_avg_deviation: dict[int, Fraction]
    empirical_delta_max: int
    bound_ratios: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "idleness": _jsonable(self.idleness),
            "idleness_per_arc": [_jsonable(x) for x in self.idleness_per_arc],
            "cumulated_discrepancy": {str(k): v for k, v in self.cumulated_discrepancy.items()},
            "time_avg_deviation": {str(k): str(v) for k, v in self.time_avg_deviation.items()},
            "empirical_delta_max": self.empirical_delta_max,
            "bound_ratios": self.bound_ratios,
        }


def _jsonable(x: float):
    return "inf" if x == math.inf else x


def compute_metrics(
    g: Graph,
    trace: LoadTrace,
    diam: int,
    windows: tuple[int, ...] | None = None,
    diag: np.ndarray | None = None,
) -> MetricsReport:
    p = trace.period
    if windows is None:
        windows = tuple(sorted({1, 2, 4, max(1, p // 2), p}))
    per_arc, idle = idleness(trace)
    if diag is None:
        diag = empirical_diagonal(trace)
    disc = {dt: cumulated_discrepancy(trace, dt) for dt in windows}
    dev = {T: time_average_deviation(trace, T)[0] for T in windows}
    ratios = {name: idle / b for name, b in bound_values(g, trace.token_count, diam).items()}
    return MetricsReport(per_arc, idle, disc, dev, int(diag.max()), ratios)


def empirical_within_table(trace: LoadTrace, table) -> bool:
    """Empirical ``delta_x(e1, e2)`` never exceeds the minimal table value.

    Both sides depend on ``(e1, e2, x)`` only through the two cycles and
    ``x + pos(e1) - pos(e2)`` (windows slide along the circulation), so it is
    enough to compare the first arcs of every cycle pair over all offsets.
    """
    c = table.circulation
    p = trace.period
    for i, ci in enumerate(c.cycles):
        for j, cj in enumerate(c.cycles):
            emp = empirical_delta_profile(trace, ci[0], cj[0])
            n = c.cycle_lengths[j]
            z = np.arange(p * n // math.gcd(p, n))
            vals = table.dist[i, c.offsets[j] + z % n]
            ok = (vals < 0) | (emp[z % p] <= vals)
            if not ok.all():
                return False
    return True
