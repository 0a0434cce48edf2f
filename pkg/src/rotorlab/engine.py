"""Synchronous round-robin (rotor-router) dynamics and recurrence detection."""

from __future__ import annotations

import math
import random
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .graph import Graph, graph_diameter

DEFAULT_STATE_CAP = 1_000_000
ABSOLUTE_STEP_CAP = 10_000_000


class RecurrenceNotFound(RuntimeError):
    def __init__(self, steps: int):
        super().__init__(f"no recurrent state within {steps} simulated steps")
        self.steps = steps


@dataclass(frozen=True)
class RRState:
    """Pointer (index into the port order) and token count for every node."""

    pointers: tuple[int, ...]
    loads: tuple[int, ...]

    @property
    def k(self) -> int:
        return sum(self.loads)

    def key(self) -> bytes:
        return np.asarray(self.pointers + self.loads, dtype=np.int64).tobytes()


def init_state(
    g: Graph,
    placement: Sequence[int] | Mapping[int, int] | int,
    pointer_init: Sequence[int] | str | None = None,
    seed: int | None = None,
) -> RRState:
    """Build an initial state.

    ``placement`` is a per-node count list, a ``{node: count}`` mapping, or an
    int ``k`` meaning ``k`` tokens dropped uniformly at random (seeded).
    ``pointer_init`` is ``None`` (all at port 0), ``"random"`` or explicit
    port indices.
    """
    rng = random.Random(seed)
    if isinstance(placement, int):
        if placement < 1:
            raise ValueError("need at least one token")
        loads = [0] * g.n
        for _ in range(placement):
            loads[rng.randrange(g.n)] += 1
    elif isinstance(placement, Mapping):
        loads = [0] * g.n
        for v, c in placement.items():
            if not 0 <= v < g.n:
                raise ValueError(f"invalid node id {v}")
            if c < 0:
                raise ValueError("token counts must be non-negative")
            loads[v] += c
    else:
        loads = list(placement)
        if len(loads) != g.n:
            raise ValueError(f"placement needs {g.n} counts, got {len(loads)}")
        if any(c < 0 for c in loads):
            raise ValueError("token counts must be non-negative")
    if sum(loads) < 1:
        raise ValueError("need at least one token")

    if pointer_init is None:
        pointers = [0] * g.n
    elif pointer_init == "random":
        pointers = [rng.randrange(d) for d in g.out_degree]
    else:
        pointers = list(pointer_init)
        if len(pointers) != g.n:
            raise ValueError(f"need {g.n} pointers, got {len(pointers)}")
        for v, (p, d) in enumerate(zip(pointers, g.out_degree)):
            if not 0 <= p < d:
                raise ValueError(f"pointer {p} invalid at node {v} (degree {d})")
    return RRState(tuple(pointers), tuple(loads))


class _Stepper:
    """Vectorised single step over numpy arrays."""

    def __init__(self, g: Graph):
        a = g.arrays
        self.n = g.n
        self.pred = a["pred"]
        self.succ = a["succ"]
        self.port = a["port_index"]
        self.deg = a["out_degree"]
        self.arc_deg = self.deg[self.pred]

    def __call__(self, pointers: np.ndarray, loads: np.ndarray):
        here = loads[self.pred]
        rel = (self.port - pointers[self.pred]) % self.arc_deg
        arc_loads = here // self.arc_deg + (rel < here % self.arc_deg)
        new_loads = np.bincount(self.succ, weights=arc_loads, minlength=self.n).astype(np.int64)
        new_pointers = (pointers + loads) % self.deg
        return new_pointers, new_loads, arc_loads


def step(g: Graph, s: RRState) -> tuple[RRState, tuple[int, ...]]:
    """One synchronous round: every node empties itself round-robin."""
    ptr, ld, arc_loads = _Stepper(g)(np.asarray(s.pointers), np.asarray(s.loads))
    return RRState(tuple(ptr.tolist()), tuple(ld.tolist())), tuple(arc_loads.tolist())


@dataclass(frozen=True, eq=False)
class LoadTrace:
    """Arc loads over one period of the recurrent regime.

    ``loads[t, e]`` is the number of tokens sent along ``e`` at step
    ``preperiod + t``; ``state`` is the state at step ``preperiod``.
    """

    period: int
    preperiod: int
    loads: np.ndarray
    token_count: int
    state: RRState

    @property
    def m(self) -> int:
        return self.loads.shape[1]

    def arc_load_at(self, t: int, e: int) -> int:
        return int(self.loads[t % self.period, e])


def arc_load_at(trace: LoadTrace, t: int, e: int) -> int:
    """``L_t(e)`` with ``t`` taken modulo the period (t=0 is the first recurrent step)."""
    return trace.arc_load_at(t, e)


def stabilization_bound(g: Graph, k: int, diam: int | None = None) -> float:
    """``m^4 diam^2 + m diam log2(k+1)`` (no constant)."""
    if diam is None:
        diam = graph_diameter(g)
    diam = max(diam, 1)
    return g.m**4 * diam**2 + g.m * diam * math.log2(k + 1)


def default_max_steps(g: Graph, k: int, cap: int = ABSOLUTE_STEP_CAP) -> int:
    return int(min(10 * stabilization_bound(g, k), cap))


def run_until_recurrent(
    g: Graph,
    s0: RRState,
    max_steps: int | None = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> LoadTrace:
    """Simulate until a full state repeats and record one period of loads.

    States are remembered in a dict; once more than ``state_cap`` have been
    stored the search restarts with Brent's algorithm, which needs O(1)
    memory.  Both report the exact preperiod and period.
    """
    if max_steps is None:
        max_steps = default_max_steps(g, s0.k)
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    stepper = _Stepper(g)
    ptr = np.asarray(s0.pointers, dtype=np.int64)
    ld = np.asarray(s0.loads, dtype=np.int64)

    found = _find_cycle_dict(stepper, ptr, ld, max_steps, state_cap)
    if found is None:
        found = _find_cycle_brent(stepper, ptr, ld, max_steps)
    mu, lam = found

    for _ in range(mu):
        ptr, ld, _ = stepper(ptr, ld)
    state = RRState(tuple(ptr.tolist()), tuple(ld.tolist()))
    rows = np.empty((lam, g.m), dtype=np.int64)
    for t in range(lam):
        ptr, ld, rows[t] = stepper(ptr, ld)
    # one extra step closes the period
    if (ptr.tobytes() + ld.tobytes()) != (
        np.asarray(state.pointers, dtype=np.int64).tobytes()
        + np.asarray(state.loads, dtype=np.int64).tobytes()
    ):
        raise AssertionError("recorded period does not close")
    rows.flags.writeable = False
    return LoadTrace(period=lam, preperiod=mu, loads=rows, token_count=s0.k, state=state)


def _key(ptr: np.ndarray, ld: np.ndarray) -> bytes:
    return ptr.tobytes() + ld.tobytes()


def _find_cycle_dict(stepper, ptr, ld, max_steps, state_cap):
    seen: dict[bytes, int] = {_key(ptr, ld): 0}
    for t in range(1, max_steps + 1):
        ptr, ld, _ = stepper(ptr, ld)
        key = _key(ptr, ld)
        first = seen.get(key)
        if first is not None:
            return first, t - first
        if len(seen) >= state_cap:
            return None
        seen[key] = t
    raise RecurrenceNotFound(max_steps)


def _find_cycle_brent(stepper, ptr0, ld0, max_steps):
    """Brent's cycle finding on the state sequence; returns (mu, lambda)."""
    budget = max_steps
    power = lam = 1
    t_ptr, t_ld = ptr0, ld0
    h_ptr, h_ld, _ = stepper(ptr0, ld0)
    budget -= 1
    while _key(t_ptr, t_ld) != _key(h_ptr, h_ld):
        if power == lam:
            t_ptr, t_ld = h_ptr, h_ld
            power *= 2
            lam = 0
        h_ptr, h_ld, _ = stepper(h_ptr, h_ld)
        lam += 1
        budget -= 1
        if budget < 0:
            raise RecurrenceNotFound(max_steps)

    t_ptr, t_ld = ptr0, ld0
    h_ptr, h_ld = ptr0, ld0
    for _ in range(lam):
        h_ptr, h_ld, _ = stepper(h_ptr, h_ld)
    mu = 0
    while _key(t_ptr, t_ld) != _key(h_ptr, h_ld):
        t_ptr, t_ld, _ = stepper(t_ptr, t_ld)
        h_ptr, h_ld, _ = stepper(h_ptr, h_ld)
        mu += 1
    return mu, lam
