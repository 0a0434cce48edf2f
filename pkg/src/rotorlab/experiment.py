"""Instance families and the per-instance verification pipeline.

``run_instance`` takes one (graph, k, seed) instance through simulation,
circulation extraction, the additive-combinatorics verifiers and the metrics,
and returns a flat record of checks and measurements.  Checks come in two
kinds: ``hard`` ones are proven statements or exact identities and fail the run,
``reported`` ones are recorded only.
"""

from __future__ import annotations

import itertools
import math
import time
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import addcomb, metrics
from .circulation import (
    BipartiteGraphError,
    Circulation,
    CirculationError,
    DeltaTable,
    ShiftModulusError,
    check_delta_axioms,
    cycle_graphs,
    delta_table,
    extract_circulation,
    gphi_diameter,
    intersection_set,
    is_labeling,
    make_labeling,
    reconstruct_walk,
    replay_walk,
    shift_labeling,
)
from .engine import (
    DEFAULT_STATE_CAP,
    LoadTrace,
    RecurrenceNotFound,
    init_state,
    run_until_recurrent,
    stabilization_bound,
)
from .graph import Graph, generate, graph_diameter, load_graph

SCHEMA = "rotorlab.report/1"
ALL_VERIFIERS = (
    "middle_third",
    "bohr_trivial",
    "spectrum_cover",
    "difference_chain",
    "sumset_cover",
    "short_shift_delta",
    "loop_delta_ratio",
    "deviation_bound",
    "idle_from_delta",
    "tree_window_delta",
    "cycle_adjacency",
    "gphi",
    "walk",
    "minimality",
)
NEEDS_NON_BIPARTITE = {"middle_third", "bohr_trivial", "sumset_cover", "short_shift_delta"}
MINIMALITY_CAP = 10_000
DEVIATION_PAIRS = 10_000


def log2sq(x: int) -> float:
    return max(math.log2(x), 1.0) ** 2


def is_prime(x: int) -> bool:
    if x < 2:
        return False
    return all(x % d for d in range(2, math.isqrt(x) + 1))


@dataclass(frozen=True)
class Caps:
    max_steps: int | None = None
    shift_cap: int = 1_000_000
    state_cap: int = DEFAULT_STATE_CAP


@dataclass(frozen=True)
class InstanceSpec:
    kind: str
    params: tuple[tuple[str, object], ...]
    k: int
    seed: int
    graph_text: str | None = None

    @property
    def id(self) -> str:
        if self.kind == "file":
            name = dict(self.params).get("name", "graph")
            return f"file-{name}-k{self.k}-s{self.seed}"
        p = "-".join(f"{a}{b}" for a, b in self.params)
        return f"{self.kind}-{p}-k{self.k}-s{self.seed}"

    def graph(self) -> Graph:
        if self.kind == "file":
            return load_graph(self.graph_text or "")
        return generate(self.kind, dict(self.params), seed=self.seed)


def normalize_verifiers(names: Iterable[str] | None) -> tuple[str, ...] | None:
    if names is None:
        return None
    out = []
    for raw in names:
        name = raw.strip().lower()
        if not name:
            continue
        if name == "all":
            return ALL_VERIFIERS
        if name not in ALL_VERIFIERS:
            raise ValueError(f"unknown verifier {raw!r}; choose from {', '.join(ALL_VERIFIERS)}")
        out.append(name)
    return tuple(dict.fromkeys(out))


# -- result record ---------------------------------------------------------------------


@dataclass
class InstanceResult:
    id: str
    n: int
    m: int
    k: int
    seed: int
    bipartite: bool
    tree: bool
    diam: int
    period: int = 0
    preperiod: int = 0
    g: int = 0
    gcd: int = 0
    cycle_lengths: list[int] = field(default_factory=list)
    modulus: int = 0
    eta: int = 0
    hard: dict[str, bool] = field(default_factory=dict)
    reported: dict[str, bool] = field(default_factory=dict)
    skipped: dict[str, str] = field(default_factory=dict)
    measures: dict[str, float] = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    error: str | None = None
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.error is None and all(self.hard.values())

    @property
    def failures(self) -> list[str]:
        out = [k for k, v in self.hard.items() if not v]
        if self.error:
            out.append(f"error: {self.error}")
        return out

    def as_dict(self) -> dict:
        d = asdict(self)
        d["schema"] = SCHEMA
        d["ok"] = self.ok
        d["measures"] = {k: _num(v) for k, v in self.measures.items()}
        return d


def _num(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


# -- the pipeline ---------------------------------------------------------------------------


@dataclass
class Artifacts:
    """Intermediate objects, kept for callers that want to inspect them."""

    graph: Graph
    trace: LoadTrace | None = None
    circulation: Circulation | None = None
    table: DeltaTable | None = None
    diagonal: np.ndarray | None = None


def simulate(spec: InstanceSpec, caps: Caps = Caps()) -> tuple[Graph, LoadTrace]:
    g = spec.graph()
    s0 = init_state(g, spec.k, "random", seed=spec.seed)
    return g, run_until_recurrent(g, s0, caps.max_steps, caps.state_cap)


def run_instance(
    spec: InstanceSpec,
    caps: Caps = Caps(),
    verify: Sequence[str] | None = None,
    keep: Artifacts | None = None,
) -> InstanceResult:
    """Run every applicable check on one instance.

    ``verify=None`` runs every verifier that applies and skips the rest.  An
    explicit list makes a non-applicable verifier a hard refusal
    (``BipartiteGraphError``), mirroring the hypotheses of the statements.
    """
    started = time.perf_counter()
    explicit = normalize_verifiers(verify)
    wanted = set(explicit) if explicit is not None else set(ALL_VERIFIERS)
    g = spec.graph()
    if explicit is not None and g.is_bipartite:
        refused = sorted(wanted & NEEDS_NON_BIPARTITE)
        if refused or ("gphi" in wanted and not g.is_tree):
            raise BipartiteGraphError(
                f"{spec.id}: {', '.join(refused or ['gphi'])} need a non-bipartite graph"
            )
    diam = graph_diameter(g)
    res = InstanceResult(spec.id, g.n, g.m, spec.k, spec.seed, g.is_bipartite, g.is_tree, diam)
    res.gcd = math.gcd(spec.k, g.m)
    if keep is not None:
        keep.graph = g
    try:
        _pipeline(g, spec, caps, wanted, res, keep)
    except (CirculationError, RecurrenceNotFound) as exc:
        res.error = f"{type(exc).__name__}: {exc}"
    res.seconds = time.perf_counter() - started
    return res


def _pipeline(g, spec, caps, wanted, res: InstanceResult, keep) -> None:
    hard, rep, meas, skip = res.hard, res.reported, res.measures, res.skipped
    m, k = g.m, spec.k
    s0 = init_state(g, k, "random", seed=spec.seed)
    trace = run_until_recurrent(g, s0, caps.max_steps, caps.state_cap)
    res.period, res.preperiod = trace.period, trace.preperiod
    hard["conservation"] = bool((trace.loads.sum(axis=1) == k).all())
    bound = stabilization_bound(g, k, res.diam)
    hard["stabilization"] = trace.preperiod <= 10 * bound
    meas["stabilization_ratio"] = trace.preperiod / bound

    c = extract_circulation(g, trace)
    hard["circulation"] = True
    res.g, res.cycle_lengths, res.modulus, res.eta = c.g, list(c.cycle_lengths), c.modulus, c.eta
    hard["ratios_exact"] = c.ratios_consistent()
    hard["g_le_gcd"] = c.g <= res.gcd
    rep["g_divides_gcd"] = res.gcd % c.g == 0
    if is_prime(m) and k < m:
        hard["prime_eulerian"] = c.g == 1

    # labelings and intersection set
    lab = make_labeling(c)
    hard["labeling"] = is_labeling(c, lab)
    lab = shift_labeling(c, lab)
    hard["labeling_shifted"] = is_labeling(c, lab)
    a = intersection_set(g, lab)
    shifted = make_labeling(c, lab.eta, [lab.labels[cyc[0]] + 1 for cyc in c.cycles])
    hard["intersection_set"] = (
        0 in a and (-a) == a and intersection_set(g, shifted) == a
        and (g.is_bipartite or a.eta < 2 or any(x % 2 for x in a) or a.eta % 2 == 1)
    )
    if "cycle_adjacency" in wanted:
        cg = cycle_graphs(g, c, lab)
        hard["cycle_adjacency"] = cg.lambda_connected and int(cg.lambda_dist.max()) <= 2 * max(cg.diameter, 0)
        meas["cycle_graph_diameter"] = cg.diameter

    non_bip = not g.is_bipartite
    eta = a.eta
    if "middle_third" in wanted:
        if non_bip:
            r3 = addcomb.verify_int_mod(a)
            hard["middle_third"] = r3.passed
            meas["middle_third_borderline"] = len(r3.borderline)
        else:
            skip["middle_third"] = "bipartite"
    if "bohr_trivial" in wanted:
        if non_bip and eta >= 2:
            hard["bohr_trivial"] = addcomb.verify_bohr_sumset(a).passed
        else:
            skip["bohr_trivial"] = "bipartite" if not non_bip else "eta < 2"
    if "sumset_cover" in wanted:
        if non_bip and c.g == 1 and eta >= 2:
            kappa = addcomb.cover_kappa(a, 16 * math.ceil(log2sq(eta)))
            hard["sumset_cover"] = kappa is not None
            if kappa is not None:
                meas["sumset_cover_ratio"] = kappa / log2sq(eta)
        else:
            skip["sumset_cover"] = "needs a non-bipartite Eulerian instance with eta >= 2"
    if "spectrum_cover" in wanted and eta >= 2:
        ann = addcomb.verify_spectrum_annihilation(a)
        if ann is not None:
            hard["spectrum_cover"] = ann.covered
            meas["spectrum_cover_kappa"] = ann.kappa
    if "difference_chain" in wanted and non_bip and eta >= 2:
        chain = addcomb.difference_chain(a + a)
        rep["difference_chain"] = chain.kappa is not None
        if chain.kappa is not None:
            meas["difference_chain_kappa_ratio"] = chain.kappa / max(math.log2(eta), 1.0)

    # metrics
    diag = metrics.empirical_diagonal(trace)
    report = metrics.compute_metrics(g, trace, res.diam, diag=diag)
    res.metrics = report.as_dict()
    idle = report.idleness
    meas["idleness"] = idle
    hard["idle_pigeonhole"] = idle >= -(-m // k)
    if 4 * k > 3 * m:
        hard["idle_dense"] = idle <= 4
    if g.is_tree:
        hard["idle_tree"] = idle * k <= 8 * m
        meas["idle_tree_ratio"] = idle * k / m
    if res.gcd == 1:
        hard["idle_coprime"] = idle <= 16 * (m / k) * log2sq(m)
        meas["idle_coprime_ratio"] = idle / ((m / k) * log2sq(m))
    for name, r in report.bound_ratios.items():
        meas[f"idle_ratio_{name}"] = r
    p = trace.period
    disc = max(metrics.cumulated_discrepancy(trace, dt) for dt in range(p))
    meas["discrepancy"] = disc
    meas["discrepancy_ratio_gcd"] = disc / (res.gcd * log2sq(m))
    meas["discrepancy_ratio_diam"] = disc / max(res.diam, 1)
    meas["discrepancy_ratio_sqrt_n"] = disc / (math.sqrt(g.n) * log2sq(m))
    hard["discrepancy_full_period"] = metrics.cumulated_discrepancy(trace, p) == 0
    meas["empirical_delta_max"] = int(diag.max())

    if "short_shift_delta" in wanted:
        ok15 = bool((diag[:, 4 % p] <= 3).all())
        (hard if non_bip else rep)["short_shift_delta"] = ok15
    if "deviation_bound" in wanted:
        hard["deviation_bound"], rep["deviation_zero_only_at_period"], hard["deviation_zero_at_period"] = (
            _deviation_bound(trace, diag)
        )

    table = None
    try:
        table = delta_table(g, c, caps.shift_cap)
    except ShiftModulusError as exc:
        skip["delta_table"] = str(exc)
    if table is not None:
        axioms = check_delta_axioms(table)
        hard["delta_axioms"] = all(axioms.values())
        meas["delta_table_diag_max"] = table.diagonal_max
        if c.g == 1 and math.isfinite(table.diagonal_max):
            meas["delta_log2sq_ratio"] = table.diagonal_max / log2sq(m)
        if "minimality" in wanted:
            if c.modulus <= MINIMALITY_CAP:
                hard["minimality"] = metrics.empirical_within_table(trace, table)
            else:
                skip["minimality"] = f"L={c.modulus} > {MINIMALITY_CAP}"
        if "idle_from_delta" in wanted:
            hard["idle_from_delta"] = _idle_from_delta(trace, report.idleness_per_arc, table, k)
        if "walk" in wanted and c.g == 1 and non_bip:
            hard["walk"] = _walks_ok(g, c, table)
        if "loop_delta_ratio" in wanted and all(_has_loop(g, v) for v in range(g.n)):
            worst = max(
                int(table.diagonal_profile(i).max()) / max(_cycle_diam(g, c, i), 1)
                for i in range(c.g)
            )
            meas["loop_delta_ratio_ratio"] = worst
    if "tree_window_delta" in wanted and g.is_tree:
        meas["tree_window_delta_max"] = _tree_window_delta(trace, diag)
    if "gphi" in wanted and (non_bip or g.is_tree):
        try:
            d = gphi_diameter(g, c, caps.shift_cap)
            meas["gphi_diameter"] = d
            meas["gphi_ratio"] = d / (c.g * log2sq(g.n))
        except (ShiftModulusError, BipartiteGraphError) as exc:
            skip["gphi"] = str(exc)
        except Exception as exc:  # disconnected quotient on trees
            skip["gphi"] = f"{type(exc).__name__}: {exc}"
    if keep is not None:
        keep.trace, keep.circulation, keep.table, keep.diagonal = trace, c, table, diag


def _has_loop(g: Graph, v: int) -> bool:
    return any(g.succ[e] == v for e in g.ports[v])


def _cycle_diam(g: Graph, c: Circulation, i: int) -> int:
    nodes = sorted({g.pred[e] for e in c.cycles[i]})
    best = 0
    for u in nodes:
        dist = g.bfs_distances(u)
        best = max(best, max(dist[v] for v in nodes))
    return best


def _deviation_bound(trace: LoadTrace, diag: np.ndarray) -> tuple[bool, bool, bool]:
    p = trace.period
    Ts = list(range(1, 2 * p + 1))
    if p * len(Ts) > DEVIATION_PAIRS:
        count = max(2, DEVIATION_PAIRS // p)
        Ts = sorted(set(np.linspace(1, 2 * p, count).astype(int).tolist()) | {p, 2 * p})
    within = zero_only = zero_at = True
    for T in Ts:
        within &= metrics.deviation_within_delta(trace, diag, T)
        dev = metrics.time_average_deviation(trace, T)[0]
        if T % p == 0:
            zero_at &= dev == 0
        elif dev == 0:
            zero_only = False
    return within, zero_only, zero_at


def _idle_from_delta(trace: LoadTrace, idle_per_arc, table: DeltaTable, k: int) -> bool:
    m, p = trace.m, trace.period
    for e in range(m):
        c = table.circulation
        prof = table.diagonal_profile(c.cycle_of[e])
        n = len(prof)
        for T in range(1, 2 * p + 1):
            d = prof[T % n]
            if d >= 0 and T * k > m * d and idle_per_arc[e] > T:
                return False
    return True


def _tree_window_delta(trace: LoadTrace, diag: np.ndarray) -> int:
    p = trace.period
    worst = 0
    for B in range(1, trace.m + 1):
        xs = np.arange(B, 2 * B + 1) % p
        worst = max(worst, int(diag[:, xs].min(axis=1).max()))
    return worst


def _walks_ok(g: Graph, c: Circulation, table: DeltaTable) -> bool:
    m = g.m
    for v in range(g.n):
        for l in sorted({0, 1, 2, m // 2, m - 1, 7 % m}):
            w = reconstruct_walk(g, c, v, l)
            e = g.ports[v][0]
            if not replay_walk(g, c, w) or (w.length - l) % m:
                return False
            if len(w.fragments) > table.diagonal(e, l) + 1:
                return False
            w2 = reconstruct_walk(g, c, v, l, nonnegative=True)
            if not replay_walk(g, c, w2) or (w2.length - l) % m:
                return False
    return True


# -- families ------------------------------------------------------------------------------


def _k_values(m: int) -> list[int]:
    return sorted({k for k in (1, 2, 3, m // 4, 3 * m // 4 + 1) if k >= 1})


ACCEPTANCE_GRAPHS: tuple[tuple[str, dict], ...] = (
    *(("cycle", {"n": n}) for n in (3, 4, 5, 7, 8, 12, 16, 23, 31, 40)),
    *(("cycle", {"n": n, "loops": 1}) for n in (3, 5, 6, 9, 11, 15)),
    *(("tree", {"n": n}) for n in (6, 10, 15, 25, 40)),
    *(("grid", {"rows": r, "cols": c}) for r, c in ((2, 3), (3, 3), (3, 4), (4, 5), (5, 6), (5, 8))),
    *(
        ("random_regular", {"n": n, "d": d})
        for n, d in ((10, 3), (12, 3), (16, 4), (20, 3), (24, 5), (30, 4), (40, 3))
    ),
)

PRIME_GRAPHS: tuple[tuple[str, dict], ...] = (
    *(("cycle", {"n": n, "loops": 1}) for n in (3, 5, 6, 9, 11, 15, 18, 21)),
    ("complete", {"n": 6, "loops": 1}),
    ("complete", {"n": 4, "loops": 1}),
)

TREE_GRAPHS: tuple[tuple[str, dict], ...] = tuple(("tree", {"n": n}) for n in (5, 8, 12, 20, 30, 40))


def sweep(
    graphs: Iterable[tuple[str, dict]],
    ks: Sequence[int | str] | None = None,
    seeds: Sequence[int] = (0, 1, 2),
    where: str | None = None,
) -> list[InstanceSpec]:
    """Cartesian product of graphs, token counts and seeds.

    ``ks`` entries may be ints or expressions in ``m`` such as ``"m//4"``.
    ``where`` filters on ``"prime"`` (m prime) or ``"coprime"`` (gcd(k, m) = 1).
    """
    out = []
    for (kind, params), seed in itertools.product(graphs, seeds):
        g = generate(kind, params, seed=seed)
        m = g.m
        kv = _k_values(m) if ks is None else sorted({_eval_k(x, m) for x in ks} - {0})
        for k in kv:
            if where == "prime" and not (is_prime(m) and k < m):
                continue
            if where == "coprime" and math.gcd(k, m) != 1:
                continue
            out.append(InstanceSpec(kind, tuple(sorted(params.items())), k, seed))
    return out


def _eval_k(x: int | str, m: int) -> int:
    if isinstance(x, int):
        return x
    x = x.strip()
    if x.isdigit():
        return int(x)
    expr = x.replace(" ", "")
    allowed = set("m0123456789/*+-()")
    if not set(expr) <= allowed:
        raise ValueError(f"bad k expression {x!r}")
    return int(eval(expr, {"__builtins__": {}}, {"m": m}))  # noqa: S307 - restricted alphabet


FAMILIES = {
    "acceptance": lambda: sweep(ACCEPTANCE_GRAPHS),
    "prime": lambda: sweep(PRIME_GRAPHS, where="prime"),
    "trees": lambda: sweep(TREE_GRAPHS),
    "small": lambda: sweep((("cycle", {"n": 3}), ("cycle", {"n": 5, "loops": 1}), ("tree", {"n": 6})), seeds=(0,)),
}


def parse_family(text: str) -> list[InstanceSpec]:
    """Named family, or ``kind:key=v1|v2,...;k=1|2|m//4;seeds=0|1;where=prime``."""
    if text in FAMILIES:
        return FAMILIES[text]()
    head, *opts = [part.strip() for part in text.split(";")]
    kind, _, rest = head.partition(":")
    grids: dict[str, list[object]] = {}
    for item in filter(None, rest.split(",")):
        key, _, vals = item.partition("=")
        grids[key.strip()] = [_scalar(v) for v in vals.split("|")]
    ks: list[int | str] | None = None
    seeds: list[int] = [0, 1, 2]
    where = None
    for opt in filter(None, opts):
        key, _, vals = opt.partition("=")
        key = key.strip()
        if key == "k":
            ks = [_scalar(v) for v in vals.split("|")]  # type: ignore[misc]
        elif key == "seeds":
            seeds = [int(v) for v in vals.split("|")]
        elif key == "where":
            where = vals.strip()
        else:
            raise ValueError(f"unknown family option {key!r}")
    keys = sorted(grids)
    graphs = [(kind, dict(zip(keys, combo))) for combo in itertools.product(*(grids[k] for k in keys))]
    return sweep(graphs, ks, seeds, where)


def _scalar(v: str):
    v = v.strip()
    try:
        return int(v)
    except ValueError:
        return v


# -- suites ----------------------------------------------------------------------------------


@dataclass
class SuiteSummary:
    name: str
    results: list[InstanceResult]
    rows: list[dict]
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results) and self.extra.get("ok", True)

    def check_totals(self) -> dict[str, tuple[int, int]]:
        totals: dict[str, list[int]] = {}
        for r in self.results:
            for name, v in r.hard.items():
                t = totals.setdefault(name, [0, 0])
                t[0] += bool(v)
                t[1] += 1
        return {k: (a, b) for k, (a, b) in sorted(totals.items())}


def run_many(
    specs: Sequence[InstanceSpec],
    caps: Caps = Caps(),
    verify: Sequence[str] | None = None,
    workers: int = 1,
) -> list[InstanceResult]:
    if workers <= 1:
        results = [run_instance(s, caps, verify) for s in specs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_instance, specs, [caps] * len(specs), [verify] * len(specs)))
    return sorted(results, key=lambda r: r.id)


def table_row(r: InstanceResult) -> dict:
    return {
        "instance": r.id,
        "k": r.k,
        "m": r.m,
        "gcd": r.gcd,
        "g": r.g,
        "idle": _num(r.measures.get("idleness", float("nan"))),
        "bound": round(r.m / r.k, 4),
        "ratio": round(r.measures.get("idleness", float("nan")) * r.k / r.m, 4),
        "ok": r.ok,
    }


def run_suite(
    name: str,
    specs: Sequence[InstanceSpec] | None = None,
    caps: Caps = Caps(),
    workers: int = 1,
    baseline_sizes: Sequence[int] = (11, 23, 47, 97),
    baseline_trials: int = 20,
) -> SuiteSummary:
    if name == "baseline":
        return _baseline_suite(baseline_sizes, baseline_trials)
    verifiers = {
        "lemmas": ("middle_third", "bohr_trivial", "spectrum_cover", "sumset_cover", "short_shift_delta", "cycle_adjacency", "walk"),
        "idleness": ("idle_from_delta", "tree_window_delta"),
        "discrepancy": ("deviation_bound", "minimality"),
    }
    if name not in verifiers:
        raise ValueError(f"unknown suite {name!r}; choose lemmas, idleness, discrepancy or baseline")
    if specs is None:
        specs = FAMILIES["prime" if name == "lemmas" else "acceptance"]()
    # suites run every applicable verifier; skipped ones are listed per instance
    results = run_many(specs, caps, None, workers)
    rows = []
    for r in results:
        row = table_row(r)
        for v in verifiers[name]:
            row[v] = r.hard.get(v, r.reported.get(v, "skip"))
        if name == "discrepancy":
            row["discrepancy"] = r.measures.get("discrepancy")
            row["ratio_gcd"] = round(r.measures.get("discrepancy_ratio_gcd", 0.0), 4)
        rows.append(row)
    return SuiteSummary(name, results, rows)


def baseline_comparison(
    n: int, k: int = 2, trials: int = 20, seed: int = 0, horizon_factor: int = 50
) -> dict:
    g = generate("cycle", {"n": n})
    m = g.m
    _, trace = simulate(InstanceSpec("cycle", (("n", n),), k, seed))
    _, rr_idle = metrics.idleness(trace)
    gaps = metrics.random_walk_baseline(g, k, horizon_factor * m * m, trials, seed)
    med = float(np.median(gaps))
    return {"n": n, "m": m, "k": k, "rr_idle": rr_idle, "rw_median_gap": med, "rw_over_m2": med / m**2}


def _baseline_suite(sizes: Sequence[int], trials: int) -> SuiteSummary:
    rows = [baseline_comparison(n, trials=trials) for n in sizes]
    ratios = [r["rw_over_m2"] for r in rows]
    sep = all(r["rw_median_gap"] > 5 * r["rr_idle"] for r in rows)
    spread = max(ratios) / min(ratios) if min(ratios) > 0 else math.inf
    return SuiteSummary(
        "baseline", [], rows, {"separation": sep, "m2_spread": spread, "ok": True}
    )
