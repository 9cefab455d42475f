"""Structure-agnostic clarification baselines under the same question budget.

All three ask one question per round and run the identical final-generation
step: the accumulated Q&A history is folded into a clarified intent from
which the final specification is generated.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import cosine
from .pool import QA
from .session import InstrumentationRecord
from .spec_model import Spec


@dataclass
class BaselineConfig:
    method: str = "direct"  # direct | best-of-n | self-consistency
    n_questions: int = 5
    cluster_threshold: float = 0.85

    def __post_init__(self):
        if self.method in ("best-of-n", "self-consistency") and self.n_questions < 2:
            raise ValueError("n_questions must be >= 2 for ranked baselines")
        if not 0.0 < self.cluster_threshold < 1.0:
            raise ValueError("cluster_threshold must be in (0, 1)")


def _ask(history, answerer, text, predicate, round_no, trace):
    axis, subject = predicate if predicate is not None else (None, None)
    answer = answerer(text, axis, subject)
    history.append(QA(text, axis, subject, answer, round=round_no))
    trace.append(
        InstrumentationRecord(
            round=round_no,
            pool_size=0,
            disagreement_counts=(0, 0, 0),
            asked_axis=axis.value if axis is not None else None,
            regenerated=False,
        )
    )


def run_direct(intent: str, answerer, k: int, gateway) -> tuple[Spec, list[QA], list]:
    """One LLM-generated question per round, then final generation."""
    history: list[QA] = []
    trace: list[InstrumentationRecord] = []
    for round_no in range(1, k + 1):
        text, predicate = gateway.direct_question(intent, history)
        _ask(history, answerer, text, predicate, round_no, trace)
    spec, _ = gateway.final_generation(intent, history)
    return spec, history, trace


def run_best_of_n(
    intent: str, answerer, k: int, n: int, gateway
) -> tuple[Spec, list[QA], list]:
    """n sampled questions per round; a ranker call picks one by index."""
    history: list[QA] = []
    trace: list[InstrumentationRecord] = []
    for round_no in range(1, k + 1):
        sampled = gateway.sample_questions(intent, history, n)
        idx = gateway.rank_questions(intent, [q for q, _ in sampled])
        if not 0 <= idx < len(sampled):
            idx = 0
        text, predicate = sampled[idx]
        _ask(history, answerer, text, predicate, round_no, trace)
    spec, _ = gateway.final_generation(intent, history)
    return spec, history, trace


def cluster_questions(
    vectors: list[np.ndarray], threshold: float
) -> list[list[int]]:
    """Greedy agglomeration in generation order: a question joins the first
    cluster whose unit-normalized centroid is within the cosine threshold."""
    clusters: list[dict] = []  # {"indices": [...], "sum": vec}
    for i, vec in enumerate(vectors):
        placed = False
        for cluster in clusters:
            centroid = cluster["sum"]
            norm = np.linalg.norm(centroid)
            centroid = centroid / norm if norm > 0 else centroid
            if cosine(centroid, vec) >= threshold:
                cluster["indices"].append(i)
                cluster["sum"] = cluster["sum"] + vec
                placed = True
                break
        if not placed:
            clusters.append({"indices": [i], "sum": vec.copy()})
    return [c["indices"] for c in clusters]


def select_self_consistent(
    questions: list[str], vectors: list[np.ndarray], threshold: float
) -> int:
    """Index of the question closest to the largest cluster's centroid."""
    groups = cluster_questions(vectors, threshold)
    # largest cluster; ties to the earliest-created
    best_group = max(enumerate(groups), key=lambda t: (len(t[1]), -t[0]))[1]
    centroid = np.sum([vectors[i] for i in best_group], axis=0)
    norm = np.linalg.norm(centroid)
    if norm > 0:
        centroid = centroid / norm
    # closest to centroid; ties to the earliest question
    return max(best_group, key=lambda i: (cosine(centroid, vectors[i]), -i))


def run_self_consistency(
    intent: str,
    answerer,
    k: int,
    n: int,
    gateway,
    embedder,
    threshold: float = 0.85,
) -> tuple[Spec, list[QA], list]:
    """n sampled questions per round, embedded and clustered; the question
    nearest the largest cluster's centroid is asked."""
    history: list[QA] = []
    trace: list[InstrumentationRecord] = []
    for round_no in range(1, k + 1):
        sampled = gateway.sample_questions(intent, history, n)
        vectors = [embedder.embed(q) for q, _ in sampled]
        idx = select_self_consistent([q for q, _ in sampled], vectors, threshold)
        text, predicate = sampled[idx]
        _ask(history, answerer, text, predicate, round_no, trace)
    spec, _ = gateway.final_generation(intent, history)
    return spec, history, trace
