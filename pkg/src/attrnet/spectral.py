"""Spectra of symmetric matrices and the planarity test battery.

Covers the empirical spectral distribution, the semicircle law (density, CDF,
moments) with a goodness-of-fit distance, expected Kuratowski subgraph counts
with the resulting planarity-with-confidence verdict, an eigenvalue screen
for K5 / K3,3, and brute-force subgraph containment oracles for validation.
"""

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ComplexityError, ConvergenceError, DataError, ModelError
from .validation import check_adjacency, check_symmetric

JACOBI_TOL = 1e-10
JACOBI_MAX_SWEEPS = 100
# Above this order the cyclic Jacobi solver is slower than is useful and the
# LAPACK path takes over; both are exposed explicitly through ``method``.
JACOBI_AUTO_LIMIT = 64


def jacobi_eigh(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Sweeps rotate away every off-diagonal pair until the off-diagonal
    Frobenius norm falls below ``tol`` relative to the matrix norm.  Returns
    (eigenvalues in descending order, orthogonal eigenvector columns).
    """
    a = check_symmetric(a, "matrix")
    n = a.shape[0]
    A = a.copy()
    V = np.eye(n)
    scale = np.linalg.norm(a)
    if scale == 0.0 or n == 1:
        w = np.diag(A).copy()
        order = np.argsort(-w, kind="stable")
        return w[order], V[:, order]

    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, np.sum(A * A) - np.sum(np.diag(A) ** 2)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-2 * tol * scale / n:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        raise ConvergenceError(
            f"Jacobi sweep limit {max_sweeps} reached with off-diagonal norm {off}"
        )
    w = np.diag(A).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def eigenvalues_symmetric(a, method="auto") -> np.ndarray:
    """Eigenvalues of a real symmetric matrix, sorted descending.

    ``method`` is ``jacobi`` (the in-house solver), ``lapack``
    (``numpy.linalg.eigvalsh``), or ``auto`` which routes small matrices to
    Jacobi and larger ones to LAPACK.
    """
    a = check_symmetric(a, "matrix")
    if method == "auto":
        method = "jacobi" if a.shape[0] <= JACOBI_AUTO_LIMIT else "lapack"
    if method == "jacobi":
        w, _ = jacobi_eigh(a)
        return w
    if method == "lapack":
        return np.linalg.eigvalsh(a)[::-1].copy()
    raise ModelError(f"unknown eigensolver method {method!r}")


def eigh_symmetric(a, method="auto", check=False):
    """Eigenvalues (descending) and eigenvectors; optionally verify that the
    reconstruction Q diag(w) Q^T matches the input to 1e-8 relative error."""
    a = check_symmetric(a, "matrix")
    if method == "auto":
        method = "jacobi" if a.shape[0] <= JACOBI_AUTO_LIMIT else "lapack"
    if method == "jacobi":
        w, V = jacobi_eigh(a)
    elif method == "lapack":
        w, V = np.linalg.eigh(a)
        w, V = w[::-1].copy(), V[:, ::-1].copy()
    else:
        raise ModelError(f"unknown eigensolver method {method!r}")
    if check:
        scale = max(np.linalg.norm(a), 1e-300)
        err = np.linalg.norm((V * w) @ V.T - a)
        if err > 1e-8 * scale:
            raise ConvergenceError(f"reconstruction error {err} exceeds 1e-8 * |A|")
    return w, V


@dataclass(frozen=True)
class SpectralSummary:
    """Sorted spectrum of a symmetric matrix with its empirical distribution."""

    eigenvalues: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.eigenvalues, dtype=float).ravel()
        if w.size == 0:
            raise DataError("spectrum must be nonempty")
        w = np.sort(w)[::-1]
        w.flags.writeable = False
        object.__setattr__(self, "eigenvalues", w)

    @classmethod
    def from_matrix(cls, a, method="auto"):
        return cls(eigenvalues=eigenvalues_symmetric(a, method=method))

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    def esd(self, x):
        """Empirical spectral distribution F(x) = (1/n) #{eigenvalues <= x}."""
        ascending = self.eigenvalues[::-1]
        return np.searchsorted(ascending, np.asarray(x, dtype=float),
                               side="right") / self.n


def centered_scaled(graph, kernel) -> np.ndarray:
    """Standardize the adjacency entrywise and apply Wigner scaling.

    Off-diagonal entries become (delta_ij - p_ij) / sqrt(p_ij (1 - p_ij)),
    the diagonal stays zero, and the whole matrix is multiplied by
    n**-0.5 so its spectrum is on the semicircle scale.
    """
    labels = graph.labels
    if labels.size and labels.max() >= kernel.k:
        raise DataError("kernel too small for the graph's labels")
    p = kernel.p[labels[:, None], labels[None, :]]
    w = (graph.adjacency.astype(float) - p) / np.sqrt(p * (1.0 - p))
    np.fill_diagonal(w, 0.0)
    return w / math.sqrt(graph.n)


# ---------------------------------------------------------------------------
# Semicircle law


def semicircle_density(s):
    """Density (1 / 2 pi) sqrt(4 - s^2) on [-2, 2], zero outside."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) <= 2.0
    out[inside] = np.sqrt(4.0 - s[inside] ** 2) / (2.0 * math.pi)
    return out if out.ndim else float(out)


def semicircle_cdf(x):
    """Closed-form CDF of the semicircle law."""
    x = np.asarray(x, dtype=float)
    s = np.clip(x, -2.0, 2.0)
    val = 0.5 + s * np.sqrt(4.0 - s * s) / (4.0 * math.pi) + np.arcsin(s / 2.0) / math.pi
    return val if val.ndim else float(val)


def semicircle_moment(order: int) -> float:
    """Exact moment of the semicircle law; odd orders vanish and the even
    moment of order 2k is the Catalan number (2k)! / (k! (k+1)!)."""
    order = int(order)
    if order < 0:
        raise ModelError("moment order must be nonnegative")
    if order % 2 == 1:
        return 0.0
    k = order // 2
    return float(math.factorial(2 * k) // (math.factorial(k) * math.factorial(k + 1)))


@dataclass(frozen=True)
class GofResult:
    distance: float
    threshold: float
    passed: bool


def semicircle_gof(summary: SpectralSummary, threshold=0.05) -> GofResult:
    """Sup distance between the ESD and the semicircle CDF at the jumps."""
    w = np.sort(summary.eigenvalues)
    n = w.size
    cdf = semicircle_cdf(w)
    upper = np.arange(1, n + 1) / n
    lower = np.arange(0, n) / n
    distance = float(max(np.max(np.abs(upper - cdf)), np.max(np.abs(lower - cdf))))
    return GofResult(distance=distance, threshold=float(threshold),
                     passed=distance < float(threshold))


# ---------------------------------------------------------------------------
# Kuratowski subgraphs and planarity with confidence

KURATOWSKI_MAX_CLASSES = 12
BRUTE_FORCE_MAX_VERTICES = 20

_K5_PAIRS = list(combinations(range(5), 2))
# The 10 bipartitions of a 6-set into two unordered triples, as cross pairs.
_K33_SPLITS = []
for _companions in combinations(range(1, 6), 2):
    _left = (0,) + _companions
    _right = tuple(v for v in range(1, 6) if v not in _companions)
    _K33_SPLITS.append([(a, b) for a in _left for b in _right])


def kuratowski_expected_counts(kernel, dist, n: int):
    """Expected numbers of K5 and K3,3 subgraphs in a model graph of size n.

    Classes of the 5 (resp. 6) vertices are integrated out exactly, which
    costs k^5 (resp. k^4) work and is guarded at k <= 12.  For K3,3 every
    6-subset contributes 10 bipartitions, each needing its 9 cross edges.
    """
    if kernel.k != dist.k:
        raise ModelError("kernel and class distribution sizes disagree")
    if kernel.k > KURATOWSKI_MAX_CLASSES:
        raise ComplexityError(
            f"expected-count integration needs k <= {KURATOWSKI_MAX_CLASSES}, got {kernel.k}"
        )
    n = int(n)
    if n < 5:
        raise ModelError(f"need n >= 5 vertices, got {n}")
    q = kernel.p
    pi = dist.pi

    clique = np.einsum(
        "a,b,c,d,e,ab,ac,ad,ae,bc,bd,be,cd,ce,de->",
        pi, pi, pi, pi, pi, q, q, q, q, q, q, q, q, q, q,
        optimize=True,
    )
    e5 = math.comb(n, 5) * float(clique)

    if n >= 6:
        # E over one triple (a,b,c) of the cubed one-side contraction:
        # each right-hand vertex contributes sum_d pi_d q_ad q_bd q_cd.
        t = np.einsum("d,ad,bd,cd->abc", pi, q, q, q, optimize=True)
        cross = np.einsum("a,b,c,abc->", pi, pi, pi, t ** 3, optimize=True)
        e33 = math.comb(n, 6) * 10.0 * float(cross)
    else:
        e33 = 0.0
    return e5, e33


@dataclass(frozen=True)
class ScreenResult:
    """Outcome of the eigenvalue screen over replicated spectra."""

    k5_ruled_out: bool
    k33_ruled_out: bool
    max_eigenvalue: float
    min_eigenvalue: float
    replications: int


def spectral_screen(summaries, k5_bound=4.0, k33_bound=-3.0) -> ScreenResult:
    """Heuristic screen: K5 is flagged ruled out when every replication keeps
    its largest eigenvalue below ``k5_bound`` (the top of the K5 spectrum),
    and K3,3 when every smallest eigenvalue stays above ``k33_bound``.

    Advisory only; it never replaces :func:`planarity_confidence`.
    """
    summaries = list(summaries)
    if not summaries:
        raise DataError("screen needs at least one spectrum")
    top = max(float(s.eigenvalues[0]) for s in summaries)
    bottom = min(float(s.eigenvalues[-1]) for s in summaries)
    return ScreenResult(
        k5_ruled_out=top < k5_bound,
        k33_ruled_out=bottom > k33_bound,
        max_eigenvalue=top,
        min_eigenvalue=bottom,
        replications=len(summaries),
    )


@dataclass(frozen=True)
class PlanarityReport:
    e5: float
    e33: float
    alpha5: float
    alpha33: float
    alpha: float
    verdict: str  # "planar-with-confidence" or "inconclusive"
    screen: ScreenResult = None

    @property
    def confidence(self) -> float:
        return 1.0 - self.alpha


def planarity_confidence(kernel, dist, n: int, alpha: float,
                         screen: ScreenResult = None) -> PlanarityReport:
    """One-sided planarity test from expected Kuratowski counts.

    Markov's inequality turns the expected counts into probability bounds
    alpha5 and alpha33 for containing K5 / K3,3; when their sum is at most
    ``alpha`` the graph is declared planar with confidence 1 - alpha.  The
    bound can never certify non-planarity, so the other verdict is
    "inconclusive".
    """
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ModelError(f"alpha must lie in (0, 1], got {alpha}")
    e5, e33 = kuratowski_expected_counts(kernel, dist, n)
    alpha5 = min(1.0, e5)
    alpha33 = min(1.0, e33)
    verdict = "planar-with-confidence" if alpha5 + alpha33 <= alpha else "inconclusive"
    return PlanarityReport(e5=e5, e33=e33, alpha5=alpha5, alpha33=alpha33,
                           alpha=alpha, verdict=verdict, screen=screen)


def _guard_brute_force(adjacency):
    a = check_adjacency(adjacency)
    if a.shape[0] > BRUTE_FORCE_MAX_VERTICES:
        raise ComplexityError(
            f"brute-force search is limited to n <= {BRUTE_FORCE_MAX_VERTICES}"
        )
    return a


def contains_k5(adjacency) -> bool:
    """Exhaustive check for a K5 subgraph (n <= 20)."""
    a = _guard_brute_force(adjacency)
    n = a.shape[0]
    if n < 5:
        return False
    degrees = a.sum(axis=1)
    candidates = [v for v in range(n) if degrees[v] >= 4]
    for quint in combinations(candidates, 5):
        if all(a[quint[i], quint[j]] for i, j in _K5_PAIRS):
            return True
    return False


def contains_k33(adjacency) -> bool:
    """Exhaustive check for a K3,3 subgraph (n <= 20)."""
    a = _guard_brute_force(adjacency)
    n = a.shape[0]
    if n < 6:
        return False
    degrees = a.sum(axis=1)
    candidates = [v for v in range(n) if degrees[v] >= 3]
    for sextet in combinations(candidates, 6):
        for split in _K33_SPLITS:
            if all(a[sextet[i], sextet[j]] for i, j in split):
                return True
    return False


# ---------------------------------------------------------------------------
# Text output


def write_spectrum(summary: SpectralSummary, path, provenance=None) -> None:
    lines = []
    if provenance:
        lines.append(f"# {provenance}")
    lines.append("index,eigenvalue")
    lines.extend(f"{i},{v!r}" for i, v in enumerate(summary.eigenvalues.tolist()))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def write_planarity_report(report: PlanarityReport, path, provenance=None) -> None:
    lines = []
    if provenance:
        lines.append(f"# {provenance}")
    lines.append(f"e5 {report.e5!r}")
    lines.append(f"e33 {report.e33!r}")
    lines.append(f"alpha5 {report.alpha5!r}")
    lines.append(f"alpha33 {report.alpha33!r}")
    lines.append(f"alpha {report.alpha!r}")
    lines.append(f"confidence {report.confidence!r}")
    lines.append(f"verdict {report.verdict}")
    if report.screen is not None:
        s = report.screen
        lines.append(f"screen-k5-ruled-out {int(s.k5_ruled_out)}")
        lines.append(f"screen-k33-ruled-out {int(s.k33_ruled_out)}")
        lines.append(f"screen-max-eigenvalue {s.max_eigenvalue!r}")
        lines.append(f"screen-min-eigenvalue {s.min_eigenvalue!r}")
        lines.append(f"screen-replications {s.replications}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
