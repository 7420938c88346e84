"""Probe splitting, AUC scoring, and the repeated-split experiment runner.

AUC here is the probability that a removed (probe) edge outscores a
non-edge, ties counted half: (n_higher + 0.5 * n_equal) / n_comparisons.
Two routes are provided: Monte-Carlo sampling of (probe, non-edge) pairs
and exact enumeration of all of them. Both share one tie predicate
(|difference| <= 1e-12) so the exact value is the sampling limit.

All randomness derives from integer seeds via numpy Generators; repeated
runs with the same master seed are bit-identical.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .baselines import (LOCAL_INDEX_KINDS, BaselineConfig, _canonical_kind,
                        katz_index, local_index, lp_index)
from .errors import ConfigError, EvaluationError
from .graph import AttributedGraph
from .propagation import PropagationConfig, ScoreMatrix, randwalk_solve

logger = logging.getLogger(__name__)

TIE_TOLERANCE = 1e-12
EXACT_PAIR_LIMIT = 10_000_000

METHOD_NAMES = ("randwalk",) + LOCAL_INDEX_KINDS + ("lp", "katz")


@dataclass(frozen=True)
class ProbeSplit:
    """A train/probe partition of a graph's edges (attributes untouched)."""

    train_graph: AttributedGraph
    probe_edges: np.ndarray  # (k, 2) canonical pairs
    seed: int


@dataclass(frozen=True)
class AucResult:
    auc: float
    n_comparisons: int
    n_higher: int
    n_equal: int
    mode: str


@dataclass
class MethodResult:
    """Per-method aggregate over the experiment's repetitions."""

    method: str
    aucs: list
    auc_mean: float
    auc_std: float
    seconds: float
    converged: bool = True


@dataclass
class EvalReport:
    dataset: str
    results: list
    config: dict
    repetitions: int
    seeds: list = field(default_factory=list)

    @property
    def all_converged(self) -> bool:
        return all(r.converged for r in self.results)


@dataclass
class ExperimentConfig:
    """Everything an evaluation run needs besides the graph and methods."""

    propagation: PropagationConfig = field(default_factory=PropagationConfig)
    baselines: BaselineConfig = field(default_factory=BaselineConfig)
    split_fraction: float = 0.1
    master_seed: int = 12345
    auc_mode: str = "exact"
    auc_samples: int = 200_000

    def __post_init__(self) -> None:
        if not 0.0 < self.split_fraction < 1.0:
            raise ConfigError(f"split fraction must be in (0, 1), got {self.split_fraction}")
        if self.auc_mode not in ("sampled", "exact"):
            raise ConfigError(f"auc mode must be 'sampled' or 'exact', got {self.auc_mode!r}")
        if self.auc_samples < 1:
            raise ConfigError(f"auc_samples must be >= 1, got {self.auc_samples}")


def canonical_method(name: str) -> str:
    key = _canonical_kind(name)
    if key == "kaze":
        key = "katz"
    if key not in METHOD_NAMES:
        raise ConfigError(f"unknown method {name!r}; valid: {', '.join(METHOD_NAMES)}")
    return key


def score_method(name: str, graph: AttributedGraph, cfg: ExperimentConfig) -> ScoreMatrix:
    """Run one scoring method by name on a graph."""
    key = canonical_method(name)
    if key == "randwalk":
        if graph.attr_dim == 0:
            raise ConfigError("method 'randwalk' requires node attributes")
        return randwalk_solve(graph, cfg.propagation)
    if key == "lp":
        return lp_index(graph, cfg.baselines)
    if key == "katz":
        return katz_index(graph, cfg.baselines)
    return local_index(key, graph)


def split_probe(graph: AttributedGraph, fraction: float, seed: int) -> ProbeSplit:
    """Remove a uniform random fraction of edges as the probe set.

    The probe size is round(fraction * m); a size of 0 or m is rejected.
    Deterministic for a given seed.
    """
    m = graph.m_edges
    if m < 1:
        raise ConfigError("cannot split a graph with no edges")
    k = round(fraction * m)
    if k <= 0 or k >= m:
        raise ConfigError(
            f"probe fraction {fraction} keeps {m - k} of {m} edges; need at least one on each side"
        )
    rng = np.random.default_rng(seed)
    chosen = np.sort(rng.choice(m, size=k, replace=False))
    mask = np.zeros(m, dtype=bool)
    mask[chosen] = True
    probe = graph.edges[mask]
    train = AttributedGraph.build(graph.n, graph.edges[~mask], attributes=graph.attributes)
    return ProbeSplit(train_graph=train, probe_edges=probe, seed=seed)


def _forbidden_pairs(train_graph: AttributedGraph, probe: np.ndarray) -> set:
    pairs = set(train_graph.edge_set)
    pairs.update((min(int(a), int(b)), max(int(a), int(b))) for a, b in probe)
    return pairs


def _check_pools(train_graph: AttributedGraph, probe: np.ndarray, forbidden: set) -> None:
    if len(probe) == 0:
        raise EvaluationError("probe set is empty")
    total_pairs = train_graph.n * (train_graph.n - 1) // 2
    if total_pairs - len(forbidden) <= 0:
        raise EvaluationError("no non-edges left to compare against")


def _sample_nonedges(rng, n: int, forbidden: set, count: int) -> tuple[np.ndarray, np.ndarray]:
    # rejection sampling over unordered pairs i < j
    out_i = np.empty(count, dtype=np.int64)
    out_j = np.empty(count, dtype=np.int64)
    filled = 0
    while filled < count:
        batch = max(2 * (count - filled), 16)
        a = rng.integers(0, n, size=batch)
        b = rng.integers(0, n, size=batch)
        keep = a != b
        lo = np.minimum(a[keep], b[keep])
        hi = np.maximum(a[keep], b[keep])
        for u, v in zip(lo.tolist(), hi.tolist()):
            if (u, v) in forbidden:
                continue
            out_i[filled] = u
            out_j[filled] = v
            filled += 1
            if filled == count:
                break
    return out_i, out_j


def auc_sampled(scores: ScoreMatrix, probe: np.ndarray, train_graph: AttributedGraph,
                n: int, seed: int) -> AucResult:
    """AUC from n independent (probe edge, non-edge) comparisons."""
    forbidden = _forbidden_pairs(train_graph, probe)
    _check_pools(train_graph, probe, forbidden)
    rng = np.random.default_rng(seed)
    probe = np.asarray(probe, dtype=np.int64).reshape(-1, 2)
    pick = rng.integers(0, len(probe), size=n)
    ne_i, ne_j = _sample_nonedges(rng, train_graph.n, forbidden, n)
    probe_scores = scores.values[probe[pick, 0], probe[pick, 1]]
    nonedge_scores = scores.values[ne_i, ne_j]
    diff = probe_scores - nonedge_scores
    n_higher = int(np.count_nonzero(diff > TIE_TOLERANCE))
    n_equal = int(np.count_nonzero(np.abs(diff) <= TIE_TOLERANCE))
    return AucResult(auc=(n_higher + 0.5 * n_equal) / n, n_comparisons=n,
                     n_higher=n_higher, n_equal=n_equal, mode="sampled")


def _nonedge_scores(scores: ScoreMatrix, train_graph: AttributedGraph,
                    probe: np.ndarray) -> np.ndarray:
    n = train_graph.n
    excluded = np.zeros((n, n), dtype=bool)
    if train_graph.m_edges:
        excluded[train_graph.edges[:, 0], train_graph.edges[:, 1]] = True
    if len(probe):
        lo = np.minimum(probe[:, 0], probe[:, 1])
        hi = np.maximum(probe[:, 0], probe[:, 1])
        excluded[lo, hi] = True
    upper = np.triu_indices(n, 1)
    keep = ~excluded[upper]
    return scores.values[upper][keep]


def auc_exact(scores: ScoreMatrix, probe: np.ndarray, train_graph: AttributedGraph) -> AucResult:
    """AUC over every (probe edge, non-edge) pair, ties counted half.

    Enumerates the comparison set, so it refuses instances with more than
    10^7 pairs; use the sampled mode there.
    """
    probe = np.asarray(probe, dtype=np.int64).reshape(-1, 2)
    forbidden = _forbidden_pairs(train_graph, probe)
    _check_pools(train_graph, probe, forbidden)
    nonedge_scores = _nonedge_scores(scores, train_graph, probe)
    total = len(probe) * len(nonedge_scores)
    if total > EXACT_PAIR_LIMIT:
        raise EvaluationError(
            f"{len(probe)} probe edges x {len(nonedge_scores)} non-edges = {total} pairs "
            f"exceeds the exact-mode limit of {EXACT_PAIR_LIMIT}; use sampled mode"
        )
    probe_scores = scores.values[probe[:, 0], probe[:, 1]]
    n_higher = 0
    n_equal = 0
    chunk = max(1, 1_000_000 // max(len(probe_scores), 1))
    for start in range(0, len(nonedge_scores), chunk):
        diff = probe_scores[:, None] - nonedge_scores[None, start:start + chunk]
        n_higher += int(np.count_nonzero(diff > TIE_TOLERANCE))
        n_equal += int(np.count_nonzero(np.abs(diff) <= TIE_TOLERANCE))
    return AucResult(auc=(n_higher + 0.5 * n_equal) / total, n_comparisons=total,
                     n_higher=n_higher, n_equal=n_equal, mode="exact")


def run_experiment(graph: AttributedGraph, methods: list, cfg: ExperimentConfig,
                   repetitions: int = 10, dataset: str = "dataset") -> EvalReport:
    """Repeated random-split evaluation of several methods on one graph.

    Every repetition draws a fresh probe split from a seed spawned off the
    master seed, scores each method on the train graph only (the weighted
    walk keeps the full attribute matrix: attributes are node properties,
    not links), and computes AUC on probe vs non-edges. Reports mean and
    population standard deviation per method plus cumulative wall-clock.
    """
    if not methods:
        raise ConfigError("need at least one method to evaluate")
    if repetitions < 1:
        raise ConfigError(f"repetitions must be >= 1, got {repetitions}")
    names = []
    for name in methods:
        key = canonical_method(name)
        if key not in names:
            names.append(key)
    if "randwalk" in names and graph.attr_dim == 0:
        raise ConfigError("method 'randwalk' requires node attributes")

    children = np.random.SeedSequence(cfg.master_seed).spawn(repetitions)
    rep_seeds = [tuple(int(s) for s in child.generate_state(2)) for child in children]

    aucs: dict[str, list] = {name: [] for name in names}
    seconds = {name: 0.0 for name in names}
    converged = {name: True for name in names}
    for rep, (split_seed, auc_seed) in enumerate(rep_seeds):
        split = split_probe(graph, cfg.split_fraction, split_seed)
        for name in names:
            start = time.perf_counter()
            score = score_method(name, split.train_graph, cfg)
            if cfg.auc_mode == "sampled":
                result = auc_sampled(score, split.probe_edges, split.train_graph,
                                     cfg.auc_samples, auc_seed)
            else:
                result = auc_exact(score, split.probe_edges, split.train_graph)
            seconds[name] += time.perf_counter() - start
            aucs[name].append(result.auc)
            converged[name] = converged[name] and score.converged
            logger.info("rep %d method %s: auc=%.4f", rep, name, result.auc)

    results = [
        MethodResult(
            method=name,
            aucs=aucs[name],
            auc_mean=float(np.mean(aucs[name])),
            auc_std=float(np.std(aucs[name])),
            seconds=seconds[name],
            converged=converged[name],
        )
        for name in names
    ]
    echo = {
        "c": cfg.propagation.c,
        "tolerance": cfg.propagation.tolerance,
        "max_iterations": cfg.propagation.max_iterations,
        "init_mode": cfg.propagation.init_mode,
        "lp_epsilon": cfg.baselines.lp_epsilon,
        "katz_beta": cfg.baselines.katz_beta,
        "split_fraction": cfg.split_fraction,
        "master_seed": cfg.master_seed,
        "auc_mode": cfg.auc_mode,
        "auc_samples": cfg.auc_samples,
    }
    return EvalReport(dataset=dataset, results=results, config=echo,
                      repetitions=repetitions, seeds=[s for s, _ in rep_seeds])


def format_report(report: EvalReport, timing: bool = False) -> str:
    """Render a report as a comment block plus CSV records.

    The aligned table and the CSV both carry dataset, method, auc_mean,
    auc_std, seconds. Measured wall-clock is volatile, so the seconds
    column is written as 0.000 unless ``timing`` is set; this keeps
    re-runs with one master seed byte-identical.
    """
    lines = [f"# dataset: {report.dataset}", f"# repetitions: {report.repetitions}"]
    cfg_items = "  ".join(f"{k}: {v}" for k, v in report.config.items())
    lines.append(f"# {cfg_items}")
    if report.seeds:
        lines.append(f"# split_seeds: {' '.join(str(s) for s in report.seeds)}")
    rows = []
    for res in report.results:
        secs = res.seconds if timing else 0.0
        rows.append((res.method, f"{res.auc_mean:.4f}", f"{res.auc_std:.4f}", f"{secs:.3f}"))
    name_w = max(len("method"), max(len(r[0]) for r in rows))
    lines.append(f"# {'method'.ljust(name_w)}  auc_mean  auc_std  seconds")
    for method, mean, std, secs in rows:
        lines.append(f"# {method.ljust(name_w)}  {mean.ljust(8)}  {std.ljust(7)}  {secs}")
    lines.append("dataset,method,auc_mean,auc_std,seconds")
    for res, (method, _, _, secs) in zip(report.results, rows):
        lines.append(
            f"{report.dataset},{method},{format(res.auc_mean, '.12g')},"
            f"{format(res.auc_std, '.12g')},{secs}"
        )
    return "\n".join(lines) + "\n"
