"""Two-layer neighborhood crawl and the uniform-selection baseline.

The crawl explores a graph through an oracle: pick layer-0 vertices uniformly
at random and retrieve their full neighbor lists, then from each layer-0
vertex pick one neighbor (weighted by the current class-pair estimate) and
retrieve its full list as well.  Expanded vertices are "core" and their rows
of the adjacency are completely known; every other discovered vertex is
"frontier" and contributes only its attribute class.
"""

from dataclasses import dataclass, field

import numpy as np

from . import rng
from .errors import DataError, ModelError, SamplingError
from .estimation import estimate_p0


class SampleOracle:
    """Adjacency-backed oracle over a :class:`~attrnet.model.GraphSample`."""

    def __init__(self, graph):
        self._graph = graph
        self._neighbors = {}

    @property
    def class_count(self) -> int:
        return self._graph.k

    def vertex_count(self) -> int:
        return self._graph.n

    def label_of(self, v: int) -> int:
        return int(self._graph.labels[v])

    def neighbors_of(self, v: int):
        cached = self._neighbors.get(v)
        if cached is None:
            cached = tuple(int(u) for u in np.nonzero(self._graph.adjacency[v])[0])
            self._neighbors[v] = cached
        return cached


def as_oracle(source) -> SampleOracle:
    """Coerce a GraphSample (or anything already oracle-shaped) to an oracle."""
    if hasattr(source, "neighbors_of"):
        return source
    if hasattr(source, "adjacency"):
        return SampleOracle(source)
    raise DataError(f"cannot interpret {type(source).__name__} as a graph oracle")


@dataclass(frozen=True)
class CrawlSample:
    """Partially observed subgraph produced by a crawl.

    ``layer0`` holds the uniformly drawn seed vertices and ``layer1`` the
    expanded neighbor picks; both are core, with exact degrees and full
    neighbor lists.  ``frontier`` vertices contribute class labels only.
    ``observed_edges`` is every pair revealed by an expansion, so each one
    has at least one core endpoint.  For the uniform-selection baseline,
    ``degrees_censored`` marks that neighbor lists are induced-subgraph
    views rather than full rows.
    """

    k: int
    n0: int
    fanout: int
    seed: int
    layer0: tuple
    layer1: tuple
    frontier: tuple
    labels: dict
    neighbors: dict
    observed_edges: frozenset
    degrees_censored: bool = False

    @property
    def core(self) -> tuple:
        return self.layer0 + self.layer1

    def degree_of(self, v: int) -> int:
        return len(self.neighbors[v])

    def core_count(self) -> int:
        return len(self.layer0) + len(self.layer1)


def _rank_pick(gen, population: int, count: int):
    """Draw ``count`` distinct vertices by ranking one uniform per vertex."""
    u = gen.random(population)
    order = np.argsort(u, kind="stable")
    return [int(v) for v in order[:count]]


def _weighted_pick(gen, ids, weights):
    total = float(np.sum(weights))
    if total <= 0.0:
        weights = np.ones(len(ids))
        total = float(len(ids))
    u = gen.random() * total
    acc = 0.0
    for idx, w in zip(ids, weights):
        acc += float(w)
        if u < acc:
            return idx
    return ids[-1]


def select_neighbor(neighbor_ids, neighbor_labels, origin_label, weights=None,
                    observed=None, seed=0):
    """Pick one neighbor with probability proportional to the class-pair
    weight ``weights[origin_label, label(neighbor)]``.

    Entries flagged unobserved (or a missing matrix) carry zero weight; when
    nothing usable remains the choice is uniform.
    """
    neighbor_ids = list(neighbor_ids)
    if not neighbor_ids:
        raise SamplingError("cannot select from an empty neighbor list")
    if len(neighbor_ids) != len(neighbor_labels):
        raise DataError("neighbor ids and labels must align")
    gen = seed if isinstance(seed, np.random.Generator) else rng.generator(seed)
    if weights is None:
        w = np.zeros(len(neighbor_ids))
    else:
        weights = np.asarray(weights, dtype=float)
        w = np.array([weights[origin_label, c] for c in neighbor_labels])
        if observed is not None:
            mask = np.asarray(observed, dtype=bool)
            w = np.where([mask[origin_label, c] for c in neighbor_labels], w, 0.0)
    return _weighted_pick(gen, neighbor_ids, w)


def crawl_two_layers(oracle, n0: int, seed: int, selector="estimate", fanout=1,
                     kernel=None, epsilon=0.05) -> CrawlSample:
    """Run the two-layer crawl.

    Layer 0 is ``n0`` distinct uniform vertices, fully expanded.  A first
    class-pair estimate is formed from the layer-0 induced subgraph; each
    layer-0 vertex then nominates ``fanout`` of its neighbors (weighted by
    that estimate, or by the true kernel under ``selector='true-kernel'``),
    and the nominees are expanded as layer 1.  A nominee that is already
    core adds no new expansion.  Isolated layer-0 vertices simply nominate
    nobody.  Deterministic given ``seed``.
    """
    oracle = as_oracle(oracle)
    population = oracle.vertex_count()
    if population < 1:
        raise SamplingError("oracle has no vertices")
    n0 = int(n0)
    if n0 < 1:
        raise SamplingError(f"need at least one seed vertex, got n0={n0}")
    if n0 > population:
        raise SamplingError(f"n0={n0} exceeds the population size {population}")
    fanout = int(fanout)
    if fanout < 1:
        raise SamplingError(f"fanout must be >= 1, got {fanout}")
    if selector not in ("estimate", "true-kernel"):
        raise ModelError(f"unknown selector {selector!r}")
    if selector == "true-kernel" and kernel is None:
        raise ModelError("selector 'true-kernel' needs the kernel")

    gen = rng.generator(rng.check_seed(seed))
    k = oracle.class_count
    labels = {}
    neighbors = {}
    edges = set()

    def expand(v):
        nbrs = oracle.neighbors_of(v)
        neighbors[v] = tuple(nbrs)
        labels.setdefault(v, oracle.label_of(v))
        for u in nbrs:
            labels.setdefault(u, oracle.label_of(u))
            edges.add((v, u) if v < u else (u, v))

    layer0 = _rank_pick(gen, population, n0)
    for v in layer0:
        expand(v)

    core = set(layer0)
    if selector == "estimate":
        index = {v: i for i, v in enumerate(layer0)}
        l0_labels = [labels[v] for v in layer0]
        l0_edges = [(index[a], index[b]) for a, b in edges
                    if a in index and b in index]
        if len(layer0) >= 2:
            raw = estimate_p0(l0_labels, l0_edges, k, epsilon=epsilon)
            weights, observed = raw.q, raw.observed
        else:
            weights, observed = np.zeros((k, k)), np.zeros((k, k), dtype=bool)
    else:
        weights, observed = kernel.p, np.ones((k, k), dtype=bool)

    layer1 = []
    for v in layer0:
        nbrs = list(neighbors[v])
        picks = min(fanout, len(nbrs))
        for _ in range(picks):
            chosen = select_neighbor(nbrs, [labels[u] for u in nbrs],
                                     labels[v], weights, observed, seed=gen)
            nbrs.remove(chosen)
            if chosen not in core:
                core.add(chosen)
                layer1.append(chosen)
                expand(chosen)

    frontier = tuple(sorted(u for u in labels if u not in core))
    return CrawlSample(
        k=k,
        n0=n0,
        fanout=fanout,
        seed=rng.check_seed(seed),
        layer0=tuple(layer0),
        layer1=tuple(layer1),
        frontier=frontier,
        labels=labels,
        neighbors=neighbors,
        observed_edges=frozenset(edges),
        degrees_censored=False,
    )


def rns_baseline(oracle, n: int, seed: int) -> CrawlSample:
    """Uniform node selection: ``n`` distinct vertices and all their mutual
    links.  Every sampled vertex is core (layer 0) but its recorded neighbor
    list is censored to the induced subgraph."""
    oracle = as_oracle(oracle)
    population = oracle.vertex_count()
    n = int(n)
    if n < 1:
        raise SamplingError(f"need at least one vertex, got n={n}")
    if n > population:
        raise SamplingError(f"n={n} exceeds the population size {population}")
    gen = rng.generator(rng.check_seed(seed))
    picked = _rank_pick(gen, population, n)
    chosen = set(picked)
    labels = {v: oracle.label_of(v) for v in picked}
    neighbors = {}
    edges = set()
    for v in picked:
        inside = tuple(u for u in oracle.neighbors_of(v) if u in chosen)
        neighbors[v] = inside
        for u in inside:
            edges.add((v, u) if v < u else (u, v))
    return CrawlSample(
        k=oracle.class_count,
        n0=n,
        fanout=0,
        seed=rng.check_seed(seed),
        layer0=tuple(picked),
        layer1=(),
        frontier=(),
        labels=labels,
        neighbors=neighbors,
        observed_edges=frozenset(edges),
        degrees_censored=True,
    )


# ---------------------------------------------------------------------------
# Serialization


def save_crawl(sample: CrawlSample, path, provenance=None) -> None:
    """Sectioned text format: meta line, seed vertices, core rows
    (vertex class degree neighbors...), frontier rows, edge pairs."""
    lines = []
    if provenance:
        lines.append(f"# {provenance}")
    lines.append(
        f"meta k {sample.k} n0 {sample.n0} fanout {sample.fanout} "
        f"seed {sample.seed} censored {int(sample.degrees_censored)}"
    )
    lines.append("seeds " + " ".join(str(v) for v in sample.layer0))
    lines.append("core")
    for v in sample.core:
        nbrs = " ".join(str(u) for u in sample.neighbors[v])
        lines.append(f"{v} {sample.labels[v]} {sample.degree_of(v)}"
                     + (f" {nbrs}" if nbrs else ""))
    lines.append("frontier")
    for v in sample.frontier:
        lines.append(f"{v} {sample.labels[v]}")
    lines.append("edges")
    for a, b in sorted(sample.observed_edges):
        lines.append(f"{a} {b}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_crawl(path) -> CrawlSample:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            rows = [ln.rstrip("\n") for ln in fh
                    if ln.strip() and not ln.startswith("#")]
    except OSError as exc:
        raise DataError(f"cannot read crawl file {path}: {exc}") from exc
    if not rows or not rows[0].startswith("meta "):
        raise DataError(f"crawl file {path} is missing its meta line")
    meta_parts = rows[0].split()[1:]
    meta = {meta_parts[i]: int(meta_parts[i + 1]) for i in range(0, len(meta_parts), 2)}
    if not rows[1].startswith("seeds"):
        raise DataError("crawl file is missing its seeds line")
    layer0 = tuple(int(v) for v in rows[1].split()[1:])

    section = None
    labels, neighbors, edges = {}, {}, set()
    core_order = []
    frontier = []
    for row in rows[2:]:
        if row in ("core", "frontier", "edges"):
            section = row
            continue
        parts = row.split()
        if section == "core":
            v, cls, deg = int(parts[0]), int(parts[1]), int(parts[2])
            nbrs = tuple(int(u) for u in parts[3:])
            if len(nbrs) != deg:
                raise DataError(f"core row {row!r} degree mismatch")
            core_order.append(v)
            labels[v] = cls
            neighbors[v] = nbrs
        elif section == "frontier":
            v, cls = int(parts[0]), int(parts[1])
            frontier.append(v)
            labels[v] = cls
        elif section == "edges":
            a, b = int(parts[0]), int(parts[1])
            edges.add((a, b) if a < b else (b, a))
        else:
            raise DataError(f"unexpected row {row!r} before any section")
    layer1 = tuple(v for v in core_order if v not in set(layer0))
    return CrawlSample(
        k=meta["k"],
        n0=meta["n0"],
        fanout=meta["fanout"],
        seed=meta["seed"],
        layer0=layer0,
        layer1=layer1,
        frontier=tuple(frontier),
        labels=labels,
        neighbors=neighbors,
        observed_edges=frozenset(edges),
        degrees_censored=bool(meta.get("censored", 0)),
    )
