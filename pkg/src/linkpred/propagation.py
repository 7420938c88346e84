"""Fixed-point similarity-propagation solvers.

Two solvers share the same Jacobi iteration skeleton: the classic
structural-similarity recursion (every sweep averages scores over neighbor
pairs, damped by the attenuation coefficient), and the attribute-weighted
variant in which each edge transmits score in proportion to the attribute
similarity of its endpoints.

The weighted sweep updates every off-diagonal pair (a, b) to

    c * sum_{x in N(a), y in N(b)} (w(x,a) + w(y,b)) * s(x, y) / D(a, b)

with D(a, b) = deg(b)*W(a) + deg(a)*W(b), where w is the per-edge
transmission weight and W the per-node weight sum. Since the inner weights
sum to exactly D(a, b), each sweep is c times a convex combination of
previous scores: iterates stay in [0, 1] and the map contracts with factor
c, so the fixed point is unique and init-independent. Pairs with D = 0
(isolated endpoint or all-zero weight sums) score 0; the diagonal is
pinned to 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ._util import mirror_upper, sup_norm_diff
from .errors import ConfigError
from .graph import AttributedGraph
from .similarity import SimilarityMatrix, TransmissionWeights, similarity_matrix, transmission_weights

logger = logging.getLogger(__name__)

INIT_MODES = ("identity", "attrsim")


@dataclass
class PropagationConfig:
    """Solver knobs: damping, stop rule, and score initialization."""

    c: float = 0.8
    tolerance: float = 1e-6
    max_iterations: int = 100
    init_mode: str = "attrsim"

    def __post_init__(self) -> None:
        if not 0.0 < self.c < 1.0:
            raise ConfigError(f"attenuation coefficient c must be in (0, 1), got {self.c}")
        if self.tolerance <= 0.0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.init_mode not in INIT_MODES:
            raise ConfigError(f"init_mode must be one of {INIT_MODES}, got {self.init_mode!r}")


@dataclass
class ScoreMatrix:
    """Symmetric n x n link-score matrix plus iteration metadata.

    Solver outputs guarantee a unit diagonal, entries in [0, 1], and exact
    (bitwise) symmetry. ``deltas`` records the sup-norm change of every
    sweep; ``final_delta`` is its last entry.
    """

    values: np.ndarray
    iterations: int = 0
    converged: bool = True
    final_delta: float = 0.0
    deltas: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def _pair_denominator(graph: AttributedGraph, weights: TransmissionWeights) -> np.ndarray:
    # D[a, b] = deg(b) * W(a) + deg(a) * W(b); symmetric by commutativity.
    d = graph.degrees.astype(np.float64)
    w = weights.node_sum
    return np.multiply.outer(w, d) + np.multiply.outer(d, w)


def _weighted_sweep(scores: np.ndarray, adjacency, edge_prob, denom: np.ndarray, c: float) -> np.ndarray:
    # numerator = W S A + A S W, assembled as C + C^T with C = A (W S)^T
    # so the result is bitwise symmetric before mirroring.
    ws = edge_prob @ scores
    cross = adjacency @ ws.T
    numerator = cross + cross.T
    out = np.zeros_like(scores)
    np.divide(numerator, denom, out=out, where=denom > 0)
    out *= c
    np.fill_diagonal(out, 1.0)
    return mirror_upper(out)


def simrank_classic(graph: AttributedGraph, cfg: PropagationConfig) -> ScoreMatrix:
    """Classic unweighted structural-similarity fixed point.

    Jacobi sweeps of s(a, b) <- c / (deg(a) deg(b)) * sum over neighbor
    pairs of the previous scores, diagonal pinned to 1, pairs with an
    empty neighborhood scoring 0. Starts from the identity matrix.
    ``cfg.init_mode`` does not apply here.
    """
    if graph.n == 0:
        raise ValueError("graph must have at least one node")
    adjacency = graph.adjacency_matrix()
    d = graph.degrees.astype(np.float64)
    denom = np.multiply.outer(d, d)
    scores = np.eye(graph.n)
    deltas: list[float] = []
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        summed = adjacency @ (adjacency @ scores).T  # A S A for symmetric S
        nxt = np.zeros_like(scores)
        np.divide(summed, denom, out=nxt, where=denom > 0)
        nxt *= cfg.c
        np.fill_diagonal(nxt, 1.0)
        mirror_upper(nxt)
        delta = sup_norm_diff(nxt, scores)
        deltas.append(delta)
        scores = nxt
        logger.debug("simrank sweep %d: delta=%.3e", iterations, delta)
        if delta < cfg.tolerance:
            converged = True
            break
    return ScoreMatrix(values=scores, iterations=iterations, converged=converged,
                       final_delta=deltas[-1] if deltas else 0.0, deltas=deltas)


def randwalk_init(graph: AttributedGraph, sim: SimilarityMatrix, mode: str) -> ScoreMatrix:
    """Initial score matrix: identity, or attribute similarity with unit diagonal."""
    if mode not in INIT_MODES:
        raise ConfigError(f"init_mode must be one of {INIT_MODES}, got {mode!r}")
    if mode == "identity":
        values = np.eye(graph.n)
    else:
        values = np.maximum(sim.values, 0.0)
        np.fill_diagonal(values, 1.0)
    return ScoreMatrix(values=values)


def randwalk_step(s_prev: ScoreMatrix, graph: AttributedGraph,
                  weights: TransmissionWeights, c: float) -> ScoreMatrix:
    """One sweep evaluated directly from the per-pair double sum.

    Reference path for the matrix-form fast path; contracts are identical.
    Expects a symmetric ``s_prev`` with unit diagonal.
    """
    scores = s_prev.values
    n = graph.n
    prob = weights.edge_prob
    node_sum = weights.node_sum
    deg = graph.degrees.astype(np.float64)
    out = np.zeros((n, n))
    for a in range(n):
        nbrs_a = graph.neighbors(a)
        if nbrs_a.size == 0:
            continue
        w_a = prob.data[prob.indptr[a]:prob.indptr[a + 1]]
        for b in range(a + 1, n):
            denom = deg[b] * node_sum[a] + deg[a] * node_sum[b]
            if denom <= 0.0:
                continue
            nbrs_b = graph.neighbors(b)
            if nbrs_b.size == 0:
                continue
            w_b = prob.data[prob.indptr[b]:prob.indptr[b + 1]]
            block = scores[np.ix_(nbrs_a, nbrs_b)]
            total = float(((w_a[:, None] + w_b[None, :]) * block).sum())
            out[a, b] = c * total / denom
    out = out + out.T
    np.fill_diagonal(out, 1.0)
    return ScoreMatrix(values=out)


def matrix_form_step(s_prev: ScoreMatrix, graph: AttributedGraph,
                     weights: TransmissionWeights, c: float) -> ScoreMatrix:
    """One sweep via sparse matrix products; equals randwalk_step entrywise."""
    denom = _pair_denominator(graph, weights)
    values = _weighted_sweep(s_prev.values, graph.adjacency_matrix(),
                             weights.edge_prob, denom, c)
    return ScoreMatrix(values=values)


def randwalk_solve(graph: AttributedGraph, cfg: PropagationConfig) -> ScoreMatrix:
    """Iterate the attribute-weighted sweep to its fixed point.

    Builds the similarity matrix and transmission weights, initializes per
    ``cfg.init_mode``, and sweeps until the sup-norm change drops below
    ``cfg.tolerance`` or ``cfg.max_iterations`` is hit (reported via
    ``converged``; the last iterate is returned either way).
    """
    if graph.n == 0:
        raise ValueError("graph must have at least one node")
    sim = similarity_matrix(graph)
    weights = transmission_weights(graph, sim)
    adjacency = graph.adjacency_matrix()
    denom = _pair_denominator(graph, weights)
    scores = randwalk_init(graph, sim, cfg.init_mode).values
    deltas: list[float] = []
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        nxt = _weighted_sweep(scores, adjacency, weights.edge_prob, denom, cfg.c)
        delta = sup_norm_diff(nxt, scores)
        deltas.append(delta)
        scores = nxt
        logger.debug("randwalk sweep %d: delta=%.3e", iterations, delta)
        if delta < cfg.tolerance:
            converged = True
            break
    return ScoreMatrix(values=scores, iterations=iterations, converged=converged,
                       final_delta=deltas[-1] if deltas else 0.0, deltas=deltas)
