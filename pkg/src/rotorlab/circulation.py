"""Circulations recovered from recurrent traces, labelings and intersection distance.

A circulation ``phi`` is a permutation of arcs with ``pred(phi(e)) == succ(e)``.
Its orbits (cycles) are stored starting from their smallest arc id; ``position``
is the index of an arc along its cycle.

Minimal intersection distance lives on arc-time states ``(e, y)``.  Moves
``(e, y) -> (phi(e), y + 1)`` are free in both directions, so every free orbit
(``L`` states, where ``L`` is the lcm of the cycle lengths) collapses into a
single "slot" ``(cycle, (y - position(e)) mod |cycle|)``.  There are exactly
``m`` slots and the weight-1 moves (switching between arcs with a common tail)
become plain BFS edges between slots.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property, reduce

import numpy as np

from .addcomb import ResidueSet
from .engine import LoadTrace
from .graph import Graph, graph_diameter

UNREACHABLE = -1
DEFAULT_CAP = 1_000_000


class CirculationError(RuntimeError):
    """No bijection compatible with the trace exists (an engine bug)."""


class BipartiteGraphError(ValueError):
    """The requested analysis needs a non-bipartite graph."""


class ShiftModulusError(ValueError):
    def __init__(self, modulus: int, cap: int):
        super().__init__(f"shift modulus {modulus} exceeds cap {cap}")
        self.modulus = modulus
        self.cap = cap


def _lcm(values) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


@dataclass(frozen=True, eq=False)
class Circulation:
    graph: Graph = field(repr=False)
    phi: tuple[int, ...]
    cycles: tuple[tuple[int, ...], ...]
    per_cycle_tokens: tuple[int, ...] = ()
    token_count: int = 0

    @property
    def g(self) -> int:
        return len(self.cycles)

    @cached_property
    def cycle_lengths(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cycles)

    @cached_property
    def cycle_of(self) -> tuple[int, ...]:
        out = [0] * len(self.phi)
        for i, cyc in enumerate(self.cycles):
            for e in cyc:
                out[e] = i
        return tuple(out)

    @cached_property
    def position(self) -> tuple[int, ...]:
        out = [0] * len(self.phi)
        for cyc in self.cycles:
            for j, e in enumerate(cyc):
                out[e] = j
        return tuple(out)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        acc, out = 0, []
        for n in self.cycle_lengths:
            out.append(acc)
            acc += n
        return tuple(out)

    @cached_property
    def modulus(self) -> int:
        """``L``: lcm of the cycle lengths, the period of every time shift."""
        return _lcm(self.cycle_lengths)

    @cached_property
    def eta(self) -> int:
        """Default labeling modulus: gcd of the cycle lengths."""
        return reduce(math.gcd, self.cycle_lengths)

    @property
    def is_eulerian(self) -> bool:
        return self.g == 1

    def power(self, e: int, j: int) -> int:
        """``phi^j(e)`` for any integer ``j``."""
        cyc = self.cycles[self.cycle_of[e]]
        return cyc[(self.position[e] + j) % len(cyc)]

    def slot(self, e: int, y: int) -> int:
        """Index of the free orbit containing arc-time state ``(e, y)``."""
        c = self.cycle_of[e]
        return self.offsets[c] + (y - self.position[e]) % self.cycle_lengths[c]

    def ratios_consistent(self) -> bool:
        """``k_i / |E_i| == k / m`` for every cycle, by cross-multiplication."""
        m = len(self.phi)
        return all(
            ki * m == self.token_count * n for ki, n in zip(self.per_cycle_tokens, self.cycle_lengths)
        )

    @cached_property
    def slot_graph(self) -> _SlotGraph:
        return _SlotGraph(self)

    def check(self) -> None:
        g = self.graph
        if sorted(self.phi) != list(range(g.m)):
            raise CirculationError("phi is not a permutation of the arcs")
        for e, f in enumerate(self.phi):
            if g.pred[f] != g.succ[e]:
                raise CirculationError(f"phi({e}) = {f} does not continue arc {e}")


def circulation_from_phi(g: Graph, phi, arc_loads=None) -> Circulation:
    """Wrap a permutation; ``arc_loads`` (one time step) fills the token counts."""
    phi = tuple(int(f) for f in phi)
    seen = [False] * g.m
    cycles = []
    for start in range(g.m):
        if seen[start]:
            continue
        cyc, e = [], start
        while not seen[e]:
            seen[e] = True
            cyc.append(e)
            e = phi[e]
        cycles.append(tuple(cyc))
    tokens: tuple[int, ...] = ()
    k = 0
    if arc_loads is not None:
        tokens = tuple(int(sum(arc_loads[e] for e in cyc)) for cyc in cycles)
        k = int(sum(arc_loads))
    c = Circulation(g, phi, tuple(cycles), tokens, k)
    c.check()
    return c


def extract_circulation(g: Graph, trace: LoadTrace, cycles: str = "divisor") -> Circulation:
    """Recover ``phi`` with ``L_t(e) == L_{t+1}(phi(e))`` from a recurrent trace.

    At each node the incoming arcs are grouped by their load sequence and the
    outgoing arcs by their sequence one step later; equal groups are paired in
    port order (``cycles="local"`` stops here).  Any re-pairing inside a group
    is again valid, and exchanging two images changes the cycle count by one.
    ``"fewest"`` joins cycles until no group spans two of them, giving the
    minimum count over all valid circulations.  ``"divisor"`` then splits
    cycles until the count is the smallest divisor of ``gcd(k, m)`` at or above
    that minimum, and keeps the minimum when no such count is reachable.
    """
    if cycles not in ("divisor", "fewest", "local"):
        raise ValueError(f"unknown cycles mode {cycles!r}")
    if trace.m != g.m:
        raise ValueError("trace does not belong to this graph")
    loads = trace.loads
    after = np.roll(loads, -1, axis=0)
    phi = [-1] * g.m
    blocks: list[list[int]] = []
    for v in range(g.n):
        incoming: dict[bytes, list[int]] = defaultdict(list)
        for e in sorted(g.in_arcs[v], key=lambda e: (g.port_index[g.reverse[e]], e)):
            incoming[loads[:, e].tobytes()].append(e)
        outgoing: dict[bytes, list[int]] = defaultdict(list)
        for f in g.ports[v]:
            outgoing[after[:, f].tobytes()].append(f)
        for key, ins in incoming.items():
            outs = outgoing.pop(key, [])
            if len(outs) != len(ins):
                raise CirculationError(
                    f"node {v}: {len(ins)} incoming arcs but {len(outs)} matching outgoing arcs"
                )
            for e, f in zip(ins, outs):
                phi[e] = f
            if len(ins) > 1:
                blocks.append(ins)
        if outgoing:
            raise CirculationError(f"node {v}: unmatched outgoing arcs")
    if cycles != "local" and blocks:
        fewest = _merge_cycles(phi, blocks)
        if cycles == "divisor":
            gcd = math.gcd(trace.token_count, g.m)
            target = min(d for d in range(fewest, gcd + 1) if gcd % d == 0)
            if target > fewest:
                trial = list(phi)
                if _split_cycles(trial, blocks, target):
                    phi = trial
    c = circulation_from_phi(g, phi, loads[0])
    if not np.array_equal(after[:, list(c.phi)], loads):
        raise CirculationError("phi does not transport the load sequence")
    return c


def _cycle_ids(phi: list[int]) -> tuple[list[int], int]:
    cyc_id = [-1] * len(phi)
    count = 0
    for s in range(len(phi)):
        if cyc_id[s] < 0:
            e = s
            while cyc_id[e] < 0:
                cyc_id[e] = count
                e = phi[e]
            count += 1
    return cyc_id, count


def _merge_cycles(phi: list[int], blocks: list[list[int]]) -> int:
    """Swap images inside interchangeable groups to join distinct cycles; return the count."""
    cyc_id, count = _cycle_ids(phi)
    parent = list(range(count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for block in blocks:
        head = block[0]
        for e in block[1:]:
            a, b = find(cyc_id[head]), find(cyc_id[e])
            if a != b:
                # exchanging successors of two arcs on different cycles splices them
                phi[head], phi[e] = phi[e], phi[head]
                parent[b] = a
                count -= 1
    return count


def _split_cycles(phi: list[int], blocks: list[list[int]], target: int) -> bool:
    """Swap images of two same-cycle arcs in a group until there are ``target`` cycles."""
    cyc_id, count = _cycle_ids(phi)
    while count < target:
        pair = next(
            (
                (e1, e2)
                for block in blocks
                for i, e1 in enumerate(block)
                for e2 in block[i + 1 :]
                if cyc_id[e1] == cyc_id[e2]
            ),
            None,
        )
        if pair is None:
            return False
        e1, e2 = pair
        phi[e1], phi[e2] = phi[e2], phi[e1]
        cyc_id, count = _cycle_ids(phi)
    return True


# -- labelings -------------------------------------------------------------------


@dataclass(frozen=True)
class Labeling:
    eta: int
    labels: tuple[int, ...]


def make_labeling(c: Circulation, eta: int | None = None, shifts=None) -> Labeling:
    """``lambda(phi^j(first arc of cycle i)) = j + shifts[i] (mod eta)``."""
    if eta is None:
        eta = c.eta
    if eta < 1 or c.eta % eta:
        raise ValueError(f"eta={eta} must divide gcd of cycle lengths ({c.eta})")
    if shifts is None:
        shifts = [0] * c.g
    labels = [0] * len(c.phi)
    for cyc, s in zip(c.cycles, shifts):
        for j, e in enumerate(cyc):
            labels[e] = (j + s) % eta
    return Labeling(eta, tuple(labels))


def is_labeling(c: Circulation, lab: Labeling) -> bool:
    return all(
        lab.labels[f] == (lab.labels[e] + 1) % lab.eta for e, f in enumerate(c.phi)
    )


def _cycle_adjacency(c: Circulation) -> list[set[int]]:
    g = c.graph
    at: list[set[int]] = [set() for _ in range(g.n)]
    for e in range(g.m):
        at[g.pred[e]].add(c.cycle_of[e])
    adj: list[set[int]] = [set() for _ in range(c.g)]
    for cycles_here in at:
        for i in cycles_here:
            adj[i] |= cycles_here - {i}
    return adj


def _lambda_adjacency(c: Circulation, lab: Labeling) -> list[set[int]]:
    g = c.graph
    adj: list[set[int]] = [set() for _ in range(c.g)]
    for v in range(g.n):
        by_label: dict[int, set[int]] = defaultdict(set)
        for e in g.ports[v]:
            by_label[lab.labels[e]].add(c.cycle_of[e])
        for cycles_here in by_label.values():
            for i in cycles_here:
                adj[i] |= cycles_here - {i}
    return adj


def shift_labeling(c: Circulation, lab: Labeling) -> Labeling:
    """Re-shift cycles along a BFS tree of the cycle adjacency graph.

    Each tree edge becomes a lambda-adjacency, so any two cycles end up at
    lambda-distance at most twice the depth of the tree.
    """
    if c.g == 1:
        return lab
    g = c.graph
    eta = lab.eta
    shifts = [0] * c.g
    # shift of cycle i is lambda(first arc) under the input labeling
    for i, cyc in enumerate(c.cycles):
        shifts[i] = lab.labels[cyc[0]]
    meet: dict[tuple[int, int], tuple[int, int]] = {}
    for v in range(g.n):
        first: dict[int, int] = {}
        for e in g.ports[v]:
            first.setdefault(c.cycle_of[e], e)
        for i, ei in first.items():
            for j, ej in first.items():
                if i != j:
                    meet.setdefault((i, j), (ei, ej))
    adj = _cycle_adjacency(c)
    done = [False] * c.g
    done[0] = True
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in sorted(adj[i]):
            if done[j]:
                continue
            ei, ej = meet[(i, j)]
            label_i = (c.position[ei] + shifts[i]) % eta
            shifts[j] = (label_i - c.position[ej]) % eta
            done[j] = True
            queue.append(j)
    return make_labeling(c, eta, shifts)


def intersection_set(g: Graph, lab: Labeling) -> ResidueSet:
    """``{lambda(e1) - lambda(e2) : pred(e1) == pred(e2)}`` in Z_eta."""
    eta = lab.eta
    out = ResidueSet.zero(eta)
    for v in range(g.n):
        here = ResidueSet.of(eta, (lab.labels[e] for e in g.ports[v]))
        out = out | (here - here)
    return out


def _all_pairs_bfs(adj: list[set[int]]) -> np.ndarray:
    size = len(adj)
    dist = np.full((size, size), UNREACHABLE, dtype=np.int64)
    for s in range(size):
        dist[s, s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if dist[s, w] < 0:
                    dist[s, w] = dist[s, u] + 1
                    queue.append(w)
    return dist


@dataclass(frozen=True, eq=False)
class CycleGraphs:
    adjacency: tuple[frozenset[int], ...]
    lambda_adjacency: tuple[frozenset[int], ...]
    dist: np.ndarray
    lambda_dist: np.ndarray

    @property
    def diameter(self) -> int:
        return int(self.dist.max()) if self.dist.min() >= 0 else UNREACHABLE

    @property
    def lambda_connected(self) -> bool:
        return bool(self.lambda_dist.min() >= 0)


def cycle_graphs(g: Graph, c: Circulation, lab: Labeling) -> CycleGraphs:
    if g is not c.graph:
        raise ValueError("circulation belongs to another graph")
    adj = _cycle_adjacency(c)
    ladj = _lambda_adjacency(c, lab)
    return CycleGraphs(
        tuple(map(frozenset, adj)),
        tuple(map(frozenset, ladj)),
        _all_pairs_bfs(adj),
        _all_pairs_bfs(ladj),
    )


# -- minimal intersection distance --------------------------------------------------


class _SlotGraph:
    """Weight-1 moves between free orbits, grouped to avoid duplicate edges."""

    def __init__(self, c: Circulation):
        g = c.graph
        self.c = c
        lens = c.cycle_lengths
        # (cycle, target cycle, residue of offset mod gcd) -> one witness arc pair
        moves: dict[int, dict[tuple[int, int], tuple[int, int]]] = defaultdict(dict)
        for v in range(g.n):
            out = g.ports[v]
            for f in out:
                cf, pf = c.cycle_of[f], c.position[f]
                for f2 in out:
                    if f2 == f:
                        continue
                    c2 = c.cycle_of[f2]
                    step = math.gcd(lens[cf], lens[c2])
                    moves[cf].setdefault((c2, (pf - c.position[f2]) % step), (f, f2))
        self.moves = {
            i: [(c2, d, math.gcd(lens[i], lens[c2]), pair) for (c2, d), pair in sorted(mv.items())]
            for i, mv in moves.items()
        }
        self._bfs: dict[int, tuple[np.ndarray, list]] = {}

    def neighbours(self, s: int):
        """Yield ``(slot, f, f2)``: switching from ``f`` to ``f2`` reaches ``slot``."""
        c = self.c
        ci = int(np.searchsorted(c.offsets, s, side="right")) - 1
        r = s - c.offsets[ci]
        lens = c.cycle_lengths
        for c2, d, step, pair in self.moves.get(ci, ()):
            base = c.offsets[c2]
            for q in range((r + d) % step, lens[c2], step):
                yield base + q, pair

    def bfs(self, source: int) -> tuple[np.ndarray, list]:
        if source not in self._bfs:
            self._bfs[source] = self._run_bfs(source)
        return self._bfs[source]

    def _run_bfs(self, source: int) -> tuple[np.ndarray, list]:
        m = len(self.c.phi)
        dist = np.full(m, UNREACHABLE, dtype=np.int64)
        parent: list = [None] * m
        dist[source] = 0
        queue = deque([source])
        while queue:
            s = queue.popleft()
            for t, pair in self.neighbours(s):
                if dist[t] < 0:
                    dist[t] = dist[s] + 1
                    parent[t] = (s, pair)
                    queue.append(t)
        return dist, parent


@dataclass(frozen=True, eq=False)
class DeltaTable:
    """Least function satisfying the generalised intersection-distance axioms.

    ``delta(e1, e2, x)`` is the fewest switches between arcs with a common tail
    needed to go from ``(e1, 0)`` to ``(e2, x)`` while moving freely along the
    circulation.  Values are periodic in ``x`` with period ``modulus``.
    """

    circulation: Circulation = field(repr=False)
    modulus: int
    dist: np.ndarray = field(repr=False)  # [source cycle, slot]

    def delta(self, e1: int, e2: int, x: int) -> float:
        c = self.circulation
        d = self.dist[c.cycle_of[e1], c.slot(e2, x + c.position[e1])]
        return math.inf if d < 0 else int(d)

    def diagonal(self, e: int, x: int) -> float:
        return self.delta(e, e, x)

    def row(self, e1: int) -> np.ndarray:
        """``[e2, x] -> delta_x(e1, e2)`` for ``x in [0, modulus)``; -1 if unreachable."""
        c = self.circulation
        m = len(c.phi)
        lens = np.asarray(c.cycle_lengths)
        cyc = np.asarray(c.cycle_of)
        pos = np.asarray(c.position)
        off = np.asarray(c.offsets)
        x = np.arange(self.modulus)
        slots = off[cyc][:, None] + (x[None, :] + c.position[e1] - pos[:, None]) % lens[cyc][:, None]
        return self.dist[c.cycle_of[e1]][slots].reshape(m, self.modulus)

    def diagonal_profile(self, cycle: int) -> np.ndarray:
        """``delta_x(e, e)`` for arcs of ``cycle``, ``x in [0, |cycle|)``."""
        c = self.circulation
        o = c.offsets[cycle]
        return self.dist[cycle, o : o + c.cycle_lengths[cycle]]

    @property
    def connected(self) -> bool:
        return bool(self.dist.min() >= 0)

    @property
    def diagonal_max(self) -> float:
        vals = [self.diagonal_profile(i) for i in range(self.circulation.g)]
        if any(v.min() < 0 for v in vals):
            return math.inf
        return int(max(v.max() for v in vals))


def delta_table(g: Graph, c: Circulation, shift_modulus_cap: int = DEFAULT_CAP) -> DeltaTable:
    if g is not c.graph:
        raise ValueError("circulation belongs to another graph")
    if c.modulus > shift_modulus_cap:
        raise ShiftModulusError(c.modulus, shift_modulus_cap)
    sg = c.slot_graph
    dist = np.stack([sg.bfs(c.offsets[i])[0] for i in range(c.g)])
    dist.flags.writeable = False
    return DeltaTable(c, c.modulus, dist)


def check_delta_axioms(table: DeltaTable) -> dict[str, bool]:
    """Exhaustive check of the generalised axioms over all arcs and shifts.

    Both sides of every identity depend on ``(e1, e2, x)`` only through the
    cycles of the arcs and ``x + pos(e1) - pos(e2)``, so iterating over cycle
    pairs and that combined offset covers every entry.
    """
    c = table.circulation
    g = c.graph
    lens = c.cycle_lengths
    D = table.dist
    off = c.offsets

    def block(src: int, dst: int, z: np.ndarray) -> np.ndarray:
        vals = D[src, off[dst] + z % lens[dst]]
        return np.where(vals < 0, np.iinfo(np.int64).max // 4, vals)

    out: dict[str, bool] = {}
    out["zero_diagonal"] = all(D[i, off[i]] == 0 for i in range(c.g))
    out["phi_step_free"] = all(table.delta(e, c.phi[e], 1) == 0 for e in range(g.m))
    out["common_tail_at_most_one"] = all(
        table.delta(e1, e2, 0) <= 1 for v in range(g.n) for e1 in g.ports[v] for e2 in g.ports[v]
    )
    sym = True
    for i in range(c.g):
        for j in range(c.g):
            z = np.arange(_lcm([lens[i], lens[j]]))
            sym &= bool(np.array_equal(block(i, j, z), block(j, i, -z)))
    out["symmetry"] = sym
    tri = True
    for i in range(c.g):
        for j in range(c.g):
            for k in range(c.g):
                z1 = np.arange(_lcm([lens[j], lens[k]]))[:, None]
                z2 = np.arange(lens[k])[None, :]
                lhs = block(i, k, z1 + z2)
                rhs = block(i, j, z1) + block(j, k, z2)
                tri &= bool((lhs <= rhs).all())
    out["triangle"] = tri
    return out


# -- G_phi -------------------------------------------------------------------------


class GPhiDisconnected(RuntimeError):
    pass


def gphi_diameter(g: Graph, c: Circulation, cap: int = DEFAULT_CAP) -> int:
    """Diameter of ``G_phi`` folded onto ``V x Z_L``.

    Forward edges join ``(u, a)`` to ``(succ(phi^t(e)), a + t)`` for arcs ``e``
    leaving ``u`` and ``t >= 0``; edges are undirected, so the mirror images
    through arcs entering ``u`` count too.  Modulo ``L`` a forward half-orbit
    covers the whole free orbit of ``(phi(e), a)`` and a backward one that of
    ``(phi(e), a + 2)``, so one BFS hop is node-time -> orbit -> node-time.
    Distances in the fold never exceed those over the integers.
    """
    if g is not c.graph:
        raise ValueError("circulation belongs to another graph")
    if g.is_bipartite and not g.is_tree:
        raise BipartiteGraphError("G_phi diameter needs a non-bipartite graph (or a tree)")
    L = c.modulus
    if g.n * L > cap or g.m * L > cap:
        raise ShiftModulusError(L, cap)
    m, n = g.m, g.n
    lens = np.asarray(c.cycle_lengths)
    cyc = np.asarray(c.cycle_of)
    pos = np.asarray(c.position)
    off = np.asarray(c.offsets)
    pred = np.asarray(g.pred)
    phi = np.asarray(c.phi)
    a = np.arange(L)
    nxt = phi
    fwd = off[cyc[nxt]][:, None] + (a[None, :] - pos[nxt][:, None]) % lens[cyc[nxt]][:, None]
    bwd = off[cyc[nxt]][:, None] + (a[None, :] + 2 - pos[nxt][:, None]) % lens[cyc[nxt]][:, None]
    members = np.empty((m, L), dtype=np.int64)
    for i, arcs in enumerate(c.cycles):
        arcs = np.asarray(arcs)
        j = np.arange(L)
        tails = pred[arcs[j % len(arcs)]]
        for r in range(len(arcs)):
            members[off[i] + r] = tails * L + (r + j) % L

    best = 0
    for v in range(n):
        seen_nt = np.zeros(n * L, dtype=bool)
        seen_slot = np.zeros(m, dtype=bool)
        seen_nt[v * L] = True
        frontier = np.zeros((n, L), dtype=bool)
        frontier[v, 0] = True
        level = 0
        while True:
            active = frontier[pred]
            slots = np.unique(np.concatenate([fwd[active], bwd[active]]))
            slots = slots[~seen_slot[slots]]
            seen_slot[slots] = True
            reached = np.unique(members[slots].ravel())
            reached = reached[~seen_nt[reached]]
            if reached.size == 0:
                break
            level += 1
            seen_nt[reached] = True
            frontier = np.zeros(n * L, dtype=bool)
            frontier[reached] = True
            frontier = frontier.reshape(n, L)
        if not seen_nt.all():
            raise GPhiDisconnected(f"node-time ({v}, 0) does not reach every node-time")
        best = max(best, level)
    return best


# -- closed walks from circuit fragments -------------------------------------------


@dataclass(frozen=True)
class Walk:
    """Closed walk at ``start`` made of circuit fragments ``(first arc, signed length)``.

    A fragment of length ``j >= 0`` traverses ``a, phi(a), ..., phi^{j-1}(a)``;
    a negative length runs backwards along the circuit.
    """

    start: int
    fragments: tuple[tuple[int, int], ...]
    modulus: int

    @property
    def length(self) -> int:
        return sum(j for _, j in self.fragments)

    def arcs(self, c: Circulation) -> list[int]:
        if any(j < 0 for _, j in self.fragments):
            raise ValueError("walk has negative fragments")
        return [c.power(a, i) for a, j in self.fragments for i in range(j)]


def reconstruct_walk(
    g: Graph, c: Circulation, v: int, l: int, nonnegative: bool = False
) -> Walk:
    """Closed walk at ``v`` with length congruent to ``l`` mod ``m``.

    Uses a shortest switch sequence between ``(e, 0)`` and ``(e, l)`` for the
    first arc ``e`` leaving ``v``, so the fragment count is at most
    ``delta_l(e, e) + 1``.  ``nonnegative`` adds a full circuit to every
    backward fragment, which keeps the length class.
    """
    if c.g != 1:
        raise ValueError(f"walk reconstruction needs an Eulerian circulation (g={c.g})")
    if g is not c.graph:
        raise ValueError("circulation belongs to another graph")
    m = g.m
    e = g.ports[v][0]
    sg = c.slot_graph
    source, target = c.slot(e, 0), c.slot(e, l)
    dist, parent = sg.bfs(source)
    if dist[target] < 0:
        raise BipartiteGraphError(f"shift {l} is not reachable (bipartite graph?)")
    switches = []
    s = target
    while s != source:
        s, pair = parent[s]
        switches.append(pair)
    switches.reverse()

    def signed(j: int) -> int:
        j %= m
        return j - m if j > m // 2 else j

    fragments = []
    cur = e
    for f, f2 in switches:
        fragments.append((cur, signed(c.position[f] - c.position[cur])))
        cur = f2
    fragments.append((cur, signed(c.position[e] - c.position[cur])))
    fragments = [(a, j) for a, j in fragments if j != 0]
    if not fragments:
        fragments = [(e, m)]
    if nonnegative:
        fragments = [(a, j + m if j < 0 else j) for a, j in fragments]
    return Walk(v, tuple(fragments), m)


def replay_walk(g: Graph, c: Circulation, walk: Walk) -> bool:
    """Check fragments chain up and the walk returns to its start."""
    node = walk.start
    for a, j in walk.fragments:
        if g.pred[a] != node:
            return False
        node = g.pred[c.power(a, j)]
    if node != walk.start:
        return False
    if all(j >= 0 for _, j in walk.fragments):
        arcs = walk.arcs(c)
        if any(g.succ[x] != g.pred[y] for x, y in zip(arcs, arcs[1:])):
            return False
        if arcs and (g.pred[arcs[0]] != walk.start or g.succ[arcs[-1]] != walk.start):
            return False
    return True


def diameter_for(g: Graph) -> int:
    return graph_diameter(g)
