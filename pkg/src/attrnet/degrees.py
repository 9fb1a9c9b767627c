"""Degree statistics and normal-approximation tests under a kernel hypothesis.

For a graph whose edges are independent Bernoulli draws with class-pair
probabilities p, each degree is a sum of independent indicators, so
mu_i = sum_{j != i} p_ij and v_i = sum_{j != i} p_ij (1 - p_ij) and the
standardized degree is asymptotically standard normal whenever the kernel is
bounded away from 0 and 1.
"""

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import DataError, ModelError
from .validation import check_labels, readonly

SMALL_SAMPLE_N = 30


def degree_vector(graph) -> np.ndarray:
    """Row sums of the adjacency matrix."""
    return graph.adjacency.sum(axis=1).astype(np.int64)


def _class_counts(labels, k):
    return np.bincount(labels, minlength=k)


def degree_moments(kernel, labels):
    """Per-vertex degree mean and variance under the kernel.

    Computed classwise in O(n k): vertex i of class c sees count_l partners
    of class l, minus itself.
    """
    labels = check_labels(labels, kernel.k)
    counts = _class_counts(labels, kernel.k).astype(float)
    p = kernel.p
    pq = p * (1.0 - p)
    mu = (p @ counts)[labels] - p[labels, labels]
    var = (pq @ counts)[labels] - pq[labels, labels]
    return mu, var


def degree_covariance(kernel, labels, i: int, kvtx: int) -> float:
    """Covariance of the degrees of two distinct vertices: the shared-edge
    indicator contributes p_ik (1 - p_ik) and independence kills the rest."""
    if i == kvtx:
        raise ModelError("vertices must differ; use the variance for i == k")
    labels = check_labels(labels, kernel.k)
    p = kernel.p[labels[i], labels[kvtx]]
    return float(p * (1.0 - p))


@dataclass(frozen=True)
class DegreeReport:
    """Per-vertex degree test results plus the Bonferroni-global verdict."""

    degrees: np.ndarray
    mu: np.ndarray
    var: np.ndarray
    z: np.ndarray
    pvalues: np.ndarray
    scaled_density: np.ndarray
    labels: np.ndarray
    level: float
    reject: bool
    small_sample: bool

    def __post_init__(self):
        for name in ("degrees", "mu", "var", "z", "pvalues", "scaled_density", "labels"):
            object.__setattr__(self, name, readonly(np.asarray(getattr(self, name))))

    @property
    def n(self) -> int:
        return self.degrees.size


def degree_clt_test(graph, kernel, level=0.05) -> DegreeReport:
    """Two-sided per-vertex z-tests of the observed degrees against the
    kernel hypothesis, combined with a Bonferroni rule at ``level``.

    Also carries the scaled degree density d_i / sqrt(n).  Small graphs
    (n < 30) only set a warning flag; the normal approximation is still
    evaluated.
    """
    if not 0.0 < level < 1.0:
        raise ModelError(f"test level must lie in (0, 1), got {level}")
    if graph.k != kernel.k:
        raise DataError("graph and kernel class counts disagree")
    d = degree_vector(graph)
    mu, var = degree_moments(kernel, graph.labels)
    n = graph.n
    if n < 2:
        raise DataError("degree test needs at least two vertices")
    z = (d - mu) / np.sqrt(var)
    pvalues = 2.0 * stats.norm.sf(np.abs(z))
    reject = bool(np.min(pvalues) < level / n)
    return DegreeReport(
        degrees=d,
        mu=mu,
        var=var,
        z=z,
        pvalues=pvalues,
        scaled_density=d / np.sqrt(n),
        labels=graph.labels.copy(),
        level=float(level),
        reject=reject,
        small_sample=n < SMALL_SAMPLE_N,
    )


def degree_ci(graph, kernel, coverage: float) -> np.ndarray:
    """Normal intervals d_i +- z * sqrt(v_i) for the expected degrees.

    Returns an (n, 2) array; coverage 0 collapses to the point d_i.
    """
    coverage = float(coverage)
    if not 0.0 <= coverage < 1.0:
        raise ModelError(f"coverage must lie in [0, 1), got {coverage}")
    d = degree_vector(graph).astype(float)
    _, var = degree_moments(kernel, graph.labels)
    zq = stats.norm.ppf(0.5 + coverage / 2.0) if coverage > 0 else 0.0
    half = zq * np.sqrt(var)
    return np.column_stack([d - half, d + half])


def argmax_expected_degree(kernel, dist):
    """Class with the highest expected degree per partner, i.e. the argmax of
    sum_l p_cl pi_l.  Ties go to the lowest index and are reported."""
    if kernel.k != dist.k:
        raise ModelError("kernel and class distribution sizes disagree")
    scores = kernel.p @ dist.pi
    best = int(np.argmax(scores))
    tie = bool(np.sum(np.isclose(scores, scores[best], rtol=0, atol=1e-12)) > 1)
    return best, tie


def write_degree_report(report: DegreeReport, path, provenance=None) -> None:
    lines = []
    if provenance:
        lines.append(f"# {provenance}")
    lines.append("vertex,class,degree,mu,var,z,pvalue")
    for i in range(report.n):
        lines.append(
            f"{i},{report.labels[i]},{report.degrees[i]},"
            f"{report.mu[i]!r},{report.var[i]!r},{report.z[i]!r},{report.pvalues[i]!r}"
        )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
