"""Symmetric directed multigraphs with port orders.

Every undirected edge ``u v`` becomes a pair of opposite arcs; a loop becomes a
single arc that is its own reverse.  Arc ids are dense integers in ``[0, m)``
and are stable for the lifetime of a graph.
"""

from __future__ import annotations

import random
import re
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np


class GraphError(ValueError):
    """Base class for graph construction failures."""


class GraphParseError(GraphError):
    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line!r}")
        self.lineno = lineno
        self.line = line


class AsymmetryError(GraphError):
    """An arc has no matching opposite arc."""


class ConnectivityError(GraphError):
    """The graph is not weakly connected."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable symmetric directed multigraph.

    ``pred[e]``/``succ[e]`` are the endpoints of arc ``e``, ``reverse[e]`` its
    opposite arc and ``ports[v]`` the cyclic order of arcs leaving ``v``.
    """

    n: int
    pred: tuple[int, ...]
    succ: tuple[int, ...]
    reverse: tuple[int, ...]
    ports: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        _validate(self)

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        ports: Mapping[int, Sequence[int]] | None = None,
    ) -> Graph:
        """Expand undirected edges into arcs; ``(u, u)`` gives one loop arc."""
        pred: list[int] = []
        succ: list[int] = []
        reverse: list[int] = []
        for u, v in edges:
            _check_node(n, u)
            _check_node(n, v)
            e = len(pred)
            if u == v:
                pred.append(u)
                succ.append(u)
                reverse.append(e)
            else:
                pred += [u, v]
                succ += [v, u]
                reverse += [e + 1, e]
        return cls._assemble(n, pred, succ, reverse, ports)

    @classmethod
    def from_arcs(
        cls,
        n: int,
        arcs: Sequence[tuple[int, int]],
        ports: Mapping[int, Sequence[int]] | None = None,
    ) -> Graph:
        """Build from explicit arcs, pairing each ``(u, v)`` with a ``(v, u)``.

        Arcs are paired greedily in id order.  Loops are self-reverse.
        """
        pred = [u for u, _ in arcs]
        succ = [v for _, v in arcs]
        for u, v in arcs:
            _check_node(n, u)
            _check_node(n, v)
        reverse = [-1] * len(arcs)
        waiting: dict[tuple[int, int], deque[int]] = {}
        for e, (u, v) in enumerate(arcs):
            if u == v:
                reverse[e] = e
                continue
            pending = waiting.get((v, u))
            if pending:
                r = pending.popleft()
                reverse[e], reverse[r] = r, e
            else:
                waiting.setdefault((u, v), deque()).append(e)
        dangling = [e for e in range(len(arcs)) if reverse[e] < 0]
        if dangling:
            e = dangling[0]
            raise AsymmetryError(
                f"arc {e} = ({pred[e]}, {succ[e]}) has no reverse "
                f"({len(dangling)} dangling arcs)"
            )
        return cls._assemble(n, pred, succ, reverse, ports)

    @classmethod
    def _assemble(cls, n, pred, succ, reverse, ports) -> Graph:
        if n < 1:
            raise GraphError("graph needs at least one node")
        out: list[list[int]] = [[] for _ in range(n)]
        for e, u in enumerate(pred):
            out[u].append(e)
        if ports:
            for v, order in ports.items():
                _check_node(n, v)
                if sorted(order) != out[v]:
                    raise GraphError(
                        f"port order for node {v} must be a permutation of {out[v]}"
                    )
                out[v] = list(order)
        return cls(n, tuple(pred), tuple(succ), tuple(reverse), tuple(map(tuple, out)))

    # -- basic queries -----------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.pred)

    @cached_property
    def out_degree(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.ports)

    @cached_property
    def port_index(self) -> tuple[int, ...]:
        """Position of each arc inside the port order of its tail."""
        idx = [0] * self.m
        for order in self.ports:
            for i, e in enumerate(order):
                idx[e] = i
        return tuple(idx)

    @cached_property
    def in_arcs(self) -> tuple[tuple[int, ...], ...]:
        into: list[list[int]] = [[] for _ in range(self.n)]
        for e, v in enumerate(self.succ):
            into[v].append(e)
        return tuple(map(tuple, into))

    @cached_property
    def arrays(self) -> dict[str, np.ndarray]:
        """Read-only numpy views used by the simulators."""
        arr = {
            "pred": np.asarray(self.pred, dtype=np.int64),
            "succ": np.asarray(self.succ, dtype=np.int64),
            "reverse": np.asarray(self.reverse, dtype=np.int64),
            "port_index": np.asarray(self.port_index, dtype=np.int64),
            "out_degree": np.asarray(self.out_degree, dtype=np.int64),
        }
        for a in arr.values():
            a.flags.writeable = False
        return arr

    def neighbours(self, v: int) -> list[int]:
        return [self.succ[e] for e in self.ports[v]]

    @cached_property
    def has_loops(self) -> bool:
        return any(u == v for u, v in zip(self.pred, self.succ))

    @cached_property
    def is_bipartite(self) -> bool:
        colour = [-1] * self.n
        colour[0] = 0
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for w in self.neighbours(u):
                if colour[w] < 0:
                    colour[w] = 1 - colour[u]
                    queue.append(w)
                elif colour[w] == colour[u]:
                    return False
        return True

    @cached_property
    def is_tree(self) -> bool:
        return not self.has_loops and self.m == 2 * (self.n - 1)

    def bfs_distances(self, source: int) -> list[int]:
        dist = [-1] * self.n
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in self.neighbours(u):
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def arc_distance(self, e1: int, e2: int) -> int:
        """Distance between the tails of two arcs."""
        return self.bfs_distances(self.pred[e1])[self.pred[e2]]

    def edge_list(self) -> list[tuple[int, int]]:
        """One ``(u, v)`` per arc pair (the lower arc id), loops once."""
        return [(self.pred[e], self.succ[e]) for e in range(self.m) if self.reverse[e] >= e]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n, self.pred, self.succ, self.reverse, self.ports) == (
            other.n, other.pred, other.succ, other.reverse, other.ports
        )

    def __hash__(self) -> int:
        return hash((self.n, self.pred, self.succ, self.reverse, self.ports))


def _check_node(n: int, v: int) -> None:
    if not 0 <= v < n:
        raise GraphError(f"node id {v} out of range [0, {n})")


def _validate(g: Graph) -> None:
    m = len(g.pred)
    if m == 0:
        raise GraphError("graph has no arcs")
    if len(g.succ) != m or len(g.reverse) != m:
        raise GraphError("pred/succ/reverse length mismatch")
    for e in range(m):
        r = g.reverse[e]
        if not 0 <= r < m or g.reverse[r] != e:
            raise AsymmetryError(f"reverse is not an involution at arc {e}")
        if g.pred[r] != g.succ[e] or g.succ[r] != g.pred[e]:
            raise AsymmetryError(f"arc {r} is not opposite to arc {e}")
        if r == e and g.pred[e] != g.succ[e]:
            raise AsymmetryError(f"non-loop arc {e} is its own reverse")
    seen = [False] * m
    for v, order in enumerate(g.ports):
        for e in order:
            if g.pred[e] != v or seen[e]:
                raise GraphError(f"arc {e} misplaced in port order of node {v}")
            seen[e] = True
    if not all(seen):
        raise GraphError("some arc is missing from the port orders")
    if len(g.ports) != g.n:
        raise GraphError("one port order per node required")
    if min(g.bfs_distances(0)) < 0:
        raise ConnectivityError("graph is not connected")


# -- text format ------------------------------------------------------------

_PORTS_RE = re.compile(r"^ports\s+(\d+)\s*:\s*(.*)$")


def load_graph(text: str) -> Graph:
    """Parse the edge-list format (``nodes N``, ``u v`` lines, ``ports v: ...``)."""
    n: int | None = None
    edges: list[tuple[int, int]] = []
    ports: dict[int, list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "nodes" or not parts[1].isdigit():
                raise GraphParseError(lineno, raw, "expected header 'nodes N'")
            n = int(parts[1])
            continue
        match = _PORTS_RE.match(line)
        if match:
            v = int(match.group(1))
            try:
                ports[v] = [int(tok) for tok in match.group(2).split()]
            except ValueError:
                raise GraphParseError(lineno, raw, "port list must be arc ids") from None
            continue
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphParseError(lineno, raw, "expected edge 'u v'")
        u, v = int(parts[0]), int(parts[1])
        if not (u < n and v < n):
            raise GraphParseError(lineno, raw, f"node id out of range [0, {n})")
        edges.append((u, v))
    if n is None:
        raise GraphParseError(0, "", "missing header 'nodes N'")
    return Graph.from_edges(n, edges, ports)


def dump_graph(g: Graph) -> str:
    """Inverse of :func:`load_graph` (port lines only where non-default)."""
    lines = [f"nodes {g.n}"]
    lines += [f"{u} {v}" for u, v in g.edge_list()]
    for v, order in enumerate(g.ports):
        if list(order) != sorted(order):
            lines.append(f"ports {v}: " + " ".join(map(str, order)))
    return "\n".join(lines) + "\n"


# -- generators ---------------------------------------------------------------

GENERATORS = ("cycle", "path", "tree", "grid", "complete", "random_regular")


def generate(kind: str, params: Mapping[str, object] | None = None, seed: int = 0) -> Graph:
    """Build a graph from a named family.

    Every family accepts ``loops``: an int (self-loops at nodes ``0..loops-1``)
    or ``"all"``.  Output is a pure function of ``(kind, params, seed)``.
    """
    params = dict(params or {})
    loops = params.pop("loops", 0)
    rng = random.Random(seed)

    def need(name: str, lo: int) -> int:
        if name not in params:
            raise GraphError(f"{kind}: missing parameter {name!r}")
        value = int(params.pop(name))
        if value < lo:
            raise GraphError(f"{kind}: {name} must be >= {lo}, got {value}")
        return value

    if kind == "cycle":
        n = need("n", 3)
        edges = [(i, (i + 1) % n) for i in range(n)]
    elif kind == "path":
        n = need("n", 2)
        edges = [(i, i + 1) for i in range(n - 1)]
    elif kind == "tree":
        n = need("n", 2)
        edges = [(rng.randrange(i), i) for i in range(1, n)]
    elif kind == "grid":
        rows, cols = need("rows", 1), need("cols", 1)
        n = rows * cols
        if n < 2:
            raise GraphError("grid: needs at least two cells")
        edges = []
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c
                if c + 1 < cols:
                    edges.append((v, v + 1))
                if r + 1 < rows:
                    edges.append((v, v + cols))
    elif kind == "complete":
        n = need("n", 2)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    elif kind == "random_regular":
        n, d = need("n", 2), need("d", 1)
        edges = _random_regular_edges(n, d, rng)
    else:
        raise GraphError(f"unknown graph kind {kind!r}; choose from {GENERATORS}")
    if params:
        raise GraphError(f"{kind}: unexpected parameters {sorted(params)}")

    if loops == "all":
        loop_nodes = range(n)
    else:
        count = int(loops)
        if not 0 <= count <= n:
            raise GraphError(f"loops must be in [0, {n}] or 'all'")
        loop_nodes = range(count)
    edges += [(v, v) for v in loop_nodes]
    return Graph.from_edges(n, edges)


def _random_regular_edges(n: int, d: int, rng: random.Random) -> list[tuple[int, int]]:
    import networkx as nx

    if d >= n or (n * d) % 2:
        raise GraphError(f"random_regular: need d < n and n*d even, got n={n}, d={d}")
    for _ in range(1000):
        h = nx.random_regular_graph(d, n, seed=rng.randrange(2**32))
        if nx.is_connected(h):
            return sorted((min(u, v), max(u, v)) for u, v in h.edges())
    raise GraphError(f"random_regular: no connected sample for n={n}, d={d}")


def graph_diameter(g: Graph) -> int:
    """Exact diameter (hop count between nodes) by BFS from every node."""
    return max(max(g.bfs_distances(v)) for v in range(g.n))
