"""Attribute-class random graph model.

Vertices carry one of k attribute values; an edge between two vertices is an
independent Bernoulli draw whose probability depends only on the pair of
attribute classes.  The class-pair probabilities form a symmetric kernel with
entries kept inside [epsilon, 1 - epsilon], and can either be given literally
or derived from a metric on the attribute values through a decreasing shape
function.
"""

import json
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from . import rng
from .errors import DataError, ModelError
from .validation import (
    as_square_matrix,
    check_adjacency,
    check_distribution,
    check_epsilon,
    check_labels,
    check_probability_matrix,
    readonly,
)

DEFAULT_EPSILON = 0.05

KERNEL_SHAPES = ("one-minus-min", "exponential")


@dataclass(frozen=True)
class AttributeSpace:
    """Finite set of attribute values with a metric on them.

    The metric matrix is validated at construction: zero diagonal, symmetry,
    nonnegativity, and the triangle inequality over every ordered triple.
    """

    values: tuple
    metric: np.ndarray

    def __post_init__(self):
        values = tuple(self.values)
        if len(values) < 1:
            raise ModelError("attribute space needs at least one value")
        if len(set(values)) != len(values):
            raise ModelError("attribute values must be distinct")
        d = as_square_matrix(self.metric, "metric")
        if d.shape[0] != len(values):
            raise ModelError("metric shape does not match number of values")
        if np.any(np.diag(d) != 0):
            raise ModelError("metric must vanish on the diagonal")
        if np.any(d < 0):
            raise ModelError("metric must be nonnegative")
        if np.max(np.abs(d - d.T)) > 0:
            raise ModelError("metric must be symmetric")
        for a, b, c in permutations(range(len(values)), 3):
            if d[a, c] > d[a, b] + d[b, c] + 1e-12:
                raise ModelError(
                    f"triangle inequality violated on ({a},{b},{c}): "
                    f"{d[a, c]} > {d[a, b]} + {d[b, c]}"
                )
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "metric", readonly(d))

    @property
    def k(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ClassDistribution:
    """Probabilities of the k attribute classes (sums to 1)."""

    pi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pi", readonly(check_distribution(self.pi)))

    @property
    def k(self) -> int:
        return self.pi.size


@dataclass(frozen=True)
class ClassKernel:
    """Symmetric k x k matrix of class-pair edge probabilities.

    Entries are bounded into [epsilon, 1 - epsilon] so that no pair is ever
    certainly linked or certainly unlinked.
    """

    p: np.ndarray
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        epsilon = check_epsilon(self.epsilon)
        p = check_probability_matrix(self.p, epsilon)
        object.__setattr__(self, "p", readonly(p))
        object.__setattr__(self, "epsilon", epsilon)

    @property
    def k(self) -> int:
        return self.p.shape[0]


@dataclass(frozen=True)
class GraphSample:
    """A realized graph: class labels plus a symmetric 0/1 adjacency."""

    labels: np.ndarray
    adjacency: np.ndarray
    seed: int
    k: int

    def __post_init__(self):
        adjacency = check_adjacency(self.adjacency)
        labels = check_labels(self.labels, self.k)
        if labels.size != adjacency.shape[0]:
            raise DataError("labels and adjacency sizes disagree")
        object.__setattr__(self, "labels", readonly(labels))
        object.__setattr__(self, "adjacency", readonly(adjacency))
        object.__setattr__(self, "seed", rng.check_seed(self.seed))

    @property
    def n(self) -> int:
        return self.labels.size

    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2


def kernel_from_metric(space: AttributeSpace, shape="one-minus-min", *,
                       epsilon=DEFAULT_EPSILON, scale=1.0, rate=1.0) -> ClassKernel:
    """Build a kernel by applying a decreasing shape function to the metric.

    ``one-minus-min`` evaluates 1 - min(1, d); ``exponential`` evaluates
    scale * exp(-rate * d).  Values are clamped into [epsilon, 1 - epsilon]
    afterwards, which preserves monotonicity: closer attribute pairs never
    get a smaller probability than more distant ones.
    """
    epsilon = check_epsilon(epsilon)
    d = space.metric
    if shape == "one-minus-min":
        raw = 1.0 - np.minimum(1.0, d)
    elif shape == "exponential":
        scale = float(scale)
        rate = float(rate)
        if scale <= 0:
            raise ModelError(f"exponential shape needs scale > 0, got {scale}")
        if rate < 0:
            raise ModelError(f"exponential shape needs rate >= 0, got {rate}")
        raw = scale * np.exp(-rate * d)
    else:
        raise ModelError(f"unknown kernel shape {shape!r}; choose from {KERNEL_SHAPES}")
    if np.all(raw <= 0.0) or np.all(raw >= 1.0):
        raise ModelError("shape parameters give a constant kernel outside (0, 1)")
    p = np.clip(raw, epsilon, 1.0 - epsilon)
    return ClassKernel(p=p, epsilon=epsilon)


def generate_graph(kernel: ClassKernel, dist: ClassDistribution, n: int,
                   seed: int) -> GraphSample:
    """Draw a graph: labels i.i.d. from ``dist``, edges Bernoulli per pair.

    Stream layout (Philox doubles, in order): n label uniforms mapped through
    the inverse CDF of ``dist``, then one uniform per unordered pair (i, j),
    i < j, in row-major order, with an edge iff u < p[label_i, label_j].
    """
    if kernel.k != dist.k:
        raise ModelError("kernel and class distribution sizes disagree")
    n = int(n)
    if n < 1:
        raise ModelError(f"vertex count must be >= 1, got {n}")
    seed = rng.check_seed(seed)
    gen = rng.generator(seed)
    cum = np.cumsum(dist.pi)
    cum[-1] = 1.0
    labels = np.searchsorted(cum, gen.random(n), side="right").astype(np.int64)

    adjacency = np.zeros((n, n), dtype=np.uint8)
    if n > 1:
        iu, ju = np.triu_indices(n, k=1)
        u = gen.random(iu.size)
        edges = u < kernel.p[labels[iu], labels[ju]]
        adjacency[iu[edges], ju[edges]] = 1
        adjacency |= adjacency.T
    return GraphSample(labels=labels, adjacency=adjacency, seed=seed, k=kernel.k)


def edge_marginal(kernel: ClassKernel, dist: ClassDistribution) -> float:
    """Unconditional edge probability: sum over class pairs of p_kl pi_k pi_l."""
    if kernel.k != dist.k:
        raise ModelError("kernel and class distribution sizes disagree")
    return float(dist.pi @ kernel.p @ dist.pi)


def validate_kernel(kernel: ClassKernel) -> list:
    """Return the list of violated kernel invariants (empty means pass).

    ClassKernel already rejects broken input at construction; this re-checks
    the raw arrays so foreign or mutated data can be audited.
    """
    violations = []
    p = np.asarray(kernel.p, dtype=float)
    epsilon = float(kernel.epsilon)
    if not 0.0 < epsilon < 0.5:
        violations.append(f"epsilon {epsilon} outside (0, 0.5)")
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        violations.append(f"kernel not square: shape {p.shape}")
        return violations
    asym = np.max(np.abs(p - p.T)) if p.size else 0.0
    if asym > 0:
        violations.append(f"kernel asymmetric (max |p_kl - p_lk| = {asym})")
    low, high = p.min(), p.max()
    if low < epsilon - 1e-12:
        violations.append(f"entry {low} below epsilon bound {epsilon}")
    if high > 1.0 - epsilon + 1e-12:
        violations.append(f"entry {high} above bound {1.0 - epsilon}")
    return violations


# ---------------------------------------------------------------------------
# Model files and graph serialization


@dataclass(frozen=True)
class ModelConfig:
    """A loaded model file: kernel, class distribution, optional space."""

    kernel: ClassKernel
    dist: ClassDistribution
    space: AttributeSpace = None
    classes: tuple = field(default=())


def load_model(path) -> ModelConfig:
    """Read a JSON model file.

    Keys: ``classes`` (list of labels), ``pi`` (length-k), ``epsilon``
    (optional), and either a literal ``kernel`` matrix or a ``metric`` matrix
    plus ``shape`` (optionally ``shape_params`` with ``scale``/``rate``).
    A literal kernel takes precedence over the metric route.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelError(f"model file {path} is not valid JSON: {exc}") from exc

    if "classes" not in doc or "pi" not in doc:
        raise ModelError("model file needs 'classes' and 'pi'")
    classes = tuple(str(c) for c in doc["classes"])
    epsilon = check_epsilon(doc.get("epsilon", DEFAULT_EPSILON))
    dist = ClassDistribution(pi=np.asarray(doc["pi"], dtype=float))
    if dist.k != len(classes):
        raise ModelError("'pi' length does not match 'classes'")

    space = None
    if "metric" in doc:
        space = AttributeSpace(values=classes, metric=np.asarray(doc["metric"], float))
    if "kernel" in doc:
        kernel = ClassKernel(p=np.asarray(doc["kernel"], dtype=float), epsilon=epsilon)
        if kernel.k != len(classes):
            raise ModelError("'kernel' shape does not match 'classes'")
    else:
        if space is None:
            raise ModelError("model file needs either 'kernel' or 'metric'")
        params = doc.get("shape_params", {})
        kernel = kernel_from_metric(
            space,
            doc.get("shape", "one-minus-min"),
            epsilon=epsilon,
            scale=params.get("scale", 1.0),
            rate=params.get("rate", 1.0),
        )
    return ModelConfig(kernel=kernel, dist=dist, space=space, classes=classes)


def save_graph(graph: GraphSample, path, provenance=None) -> None:
    """Write the edge-list format: ``n k seed`` header, ``i j`` edge lines
    (0-based, i < j, sorted), and a trailing ``labels`` line."""
    iu, ju = np.nonzero(np.triu(graph.adjacency, k=1))
    lines = []
    if provenance:
        lines.append(f"# {provenance}")
    lines.append(f"{graph.n} {graph.k} {graph.seed}")
    lines.extend(f"{i} {j}" for i, j in zip(iu.tolist(), ju.tolist()))
    lines.append("labels " + " ".join(str(c) for c in graph.labels.tolist()))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_graph(path) -> GraphSample:
    """Read a graph written by :func:`save_graph`."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            rows = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    except OSError as exc:
        raise DataError(f"cannot read graph file {path}: {exc}") from exc
    if not rows:
        raise DataError(f"graph file {path} is empty")
    head = rows[0].split()
    if len(head) != 3:
        raise DataError(f"bad graph header {rows[0]!r} (want 'n k seed')")
    n, k, seed = int(head[0]), int(head[1]), int(head[2])
    labels = None
    adjacency = np.zeros((n, n), dtype=np.uint8)
    for row in rows[1:]:
        parts = row.split()
        if parts[0] == "labels":
            labels = np.asarray([int(x) for x in parts[1:]], dtype=np.int64)
            continue
        if len(parts) != 2:
            raise DataError(f"bad edge line {row!r}")
        i, j = int(parts[0]), int(parts[1])
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise DataError(f"edge {row!r} out of range")
        adjacency[i, j] = adjacency[j, i] = 1
    if labels is None:
        raise DataError(f"graph file {path} is missing its labels line")
    if labels.size != n:
        raise DataError("labels line length does not match header")
    return GraphSample(labels=labels, adjacency=adjacency, seed=seed, k=k)
