"""Evaluation pipeline: resource graphs, anytime graph edit distance,
normalized structure score, canonical attribute serialization, and
embedding-based attribute similarity.

Cost model: node substitutions are free on matching resource types and cost 1
across types; node and edge insertions/deletions each cost 1.  Edges matched
consistently by their endpoints' node mapping cost 0.
"""
from __future__ import annotations

import json
import math
import os
import time
import zlib
from collections import Counter
from dataclasses import dataclass, field

import httpx
import numpy as np

from .errors import EmbedderUnavailable
from .spec_model import Spec, extract_type

EMBED_DIM = 384


@dataclass(frozen=True)
class ResourceGraph:
    nodes: dict  # label -> resource type
    edges: frozenset  # of (src_label, dst_label)


def build_graph(spec: Spec) -> ResourceGraph:
    nodes = {label: extract_type(addr) for label, addr in spec.resources.items()}
    edges = set()
    for label, deps in spec.topology.items():
        for dep in deps:
            edges.add((label, dep))
    return ResourceGraph(nodes=nodes, edges=frozenset(edges))


@dataclass
class EditPath:
    node_matches: list = field(default_factory=list)  # (ref_label, gen_label)
    node_deletions: list = field(default_factory=list)
    node_insertions: list = field(default_factory=list)
    edge_matches: list = field(default_factory=list)
    edge_deletions: list = field(default_factory=list)
    edge_insertions: list = field(default_factory=list)
    total_cost: float = 0.0

    def to_dict(self) -> dict:
        return {
            "node_matches": [list(p) for p in self.node_matches],
            "node_deletions": list(self.node_deletions),
            "node_insertions": list(self.node_insertions),
            "edge_matches": [[list(a), list(b)] for a, b in self.edge_matches],
            "edge_deletions": [list(e) for e in self.edge_deletions],
            "edge_insertions": [list(e) for e in self.edge_insertions],
            "total_cost": self.total_cost,
        }


def path_from_mapping(ref: ResourceGraph, gen: ResourceGraph, mapping: dict) -> EditPath:
    """Expand a node mapping (ref_label -> gen_label or None) to a full edit
    path with cost under the unit-cost model."""
    path = EditPath()
    cost = 0.0
    matched_gen = set()
    for rl in ref.nodes:
        gl = mapping.get(rl)
        if gl is None:
            path.node_deletions.append(rl)
            cost += 1.0
        else:
            path.node_matches.append((rl, gl))
            matched_gen.add(gl)
            if ref.nodes[rl] != gen.nodes[gl]:
                cost += 1.0
    for gl in gen.nodes:
        if gl not in matched_gen:
            path.node_insertions.append(gl)
            cost += 1.0

    matched_gen_edges = set()
    for (u, v) in sorted(ref.edges):
        gu, gv = mapping.get(u), mapping.get(v)
        if gu is not None and gv is not None and (gu, gv) in gen.edges:
            path.edge_matches.append(((u, v), (gu, gv)))
            matched_gen_edges.add((gu, gv))
        else:
            path.edge_deletions.append((u, v))
            cost += 1.0
    for e in sorted(gen.edges):
        if e not in matched_gen_edges:
            path.edge_insertions.append(e)
            cost += 1.0
    path.total_cost = cost
    return path


class _GedSearch:
    """Depth-first branch-and-bound over injective node assignments.

    The first dive reaches a complete solution quickly, so the search is
    anytime: it yields strictly improving complete paths and proves optimality
    when it runs to exhaustion before the deadline.
    """

    def __init__(self, ref: ResourceGraph, gen: ResourceGraph, deadline: float):
        self.ref = ref
        self.gen = gen
        self.deadline = deadline
        # process high-degree nodes first: their edges prune hardest
        deg = Counter()
        for u, v in ref.edges:
            deg[u] += 1
            deg[v] += 1
        self.ref_labels = sorted(ref.nodes, key=lambda l: (-deg[l], l))
        self.gen_labels = sorted(gen.nodes)
        self.best_cost = math.inf
        self.timed_out = False

    def run(self):
        n = len(self.ref_labels)
        mapping: list = [None] * n
        used: set = set()
        yield from self._search(0, mapping, used, 0.0, 0)

    # -- bounds ------------------------------------------------------------

    def _remaining_bound(self, i: int, used: set, matched_edges: int) -> float:
        rem_ref = self.ref_labels[i:]
        rem_gen = [g for g in self.gen_labels if g not in used]
        rt = Counter(self.ref.nodes[l] for l in rem_ref)
        gt = Counter(self.gen.nodes[l] for l in rem_gen)
        overlap = sum((rt & gt).values())
        m = min(len(rem_ref), len(rem_gen))
        node_lb = abs(len(rem_ref) - len(rem_gen)) + max(0, m - overlap)

        decided = set(self.ref_labels[:i])
        ru = sum(1 for (u, v) in self.ref.edges
                 if u not in decided or v not in decided)
        gu = len(self.gen.edges) - matched_edges
        return node_lb + abs(ru - gu)

    # -- search ------------------------------------------------------------

    def _search(self, i, mapping, used, g_cost, matched_edges):
        if time.monotonic() > self.deadline:
            self.timed_out = True
            return
        n = len(self.ref_labels)
        if i == n:
            total = (
                g_cost
                + (len(self.gen.edges) - matched_edges)
                + (len(self.gen_labels) - len(used))
            )
            if total < self.best_cost:
                self.best_cost = total
                yield total, {
                    self.ref_labels[j]: mapping[j] for j in range(n)
                }
            return
        if g_cost + self._remaining_bound(i, used, matched_edges) >= self.best_cost:
            return

        rl = self.ref_labels[i]
        rtype = self.ref.nodes[rl]

        options = []
        for gl in self.gen_labels:
            if gl in used:
                continue
            sub = 0.0 if self.gen.nodes[gl] == rtype else 1.0
            d_cost, d_matched = self._edge_delta(i, mapping, gl)
            options.append((sub + d_cost, sub, gl, d_cost, d_matched))
        options.sort(key=lambda t: (t[0], t[2]))

        for _, sub, gl, d_cost, d_matched in options:
            mapping[i] = gl
            used.add(gl)
            yield from self._search(
                i + 1, mapping, used, g_cost + sub + d_cost,
                matched_edges + d_matched,
            )
            used.discard(gl)
            mapping[i] = None

        # deletion branch: ref edges incident to rl and a decided node die
        del_cost = 1.0 + self._deletion_edge_cost(i, mapping)
        mapping[i] = None
        yield from self._search(i + 1, mapping, used, g_cost + del_cost, matched_edges)

    def _edge_delta(self, i, mapping, gl):
        """Ref-side edge cost of assigning ref node i to gen node gl against
        the decided prefix: matched edges cost 0, broken ref edges cost 1.
        Gen-edge insertions are settled at completion as (total - matched)."""
        cost = 0.0
        matched = 0
        rl = self.ref_labels[i]
        if (rl, rl) in self.ref.edges:
            if (gl, gl) in self.gen.edges:
                matched += 1
            else:
                cost += 1.0
        for j in range(i):
            ol = self.ref_labels[j]
            og = mapping[j]
            for (a, b), (ga, gb) in (((rl, ol), (gl, og)), ((ol, rl), (og, gl))):
                if (a, b) in self.ref.edges:
                    if og is not None and (ga, gb) in self.gen.edges:
                        matched += 1
                    else:
                        cost += 1.0
        return cost, matched

    def _deletion_edge_cost(self, i, mapping):
        cost = 0.0
        rl = self.ref_labels[i]
        if (rl, rl) in self.ref.edges:
            cost += 1.0
        for j in range(i):
            ol = self.ref_labels[j]
            if (rl, ol) in self.ref.edges:
                cost += 1.0
            if (ol, rl) in self.ref.edges:
                cost += 1.0
        return cost


def optimize_edit_paths(ref: ResourceGraph, gen: ResourceGraph, timeout: float = 30.0):
    """Yield strictly improving (cost, EditPath) pairs within the deadline."""
    search = _GedSearch(ref, gen, time.monotonic() + timeout)
    for cost, mapping in search.run():
        yield cost, path_from_mapping(ref, gen, mapping)


def ged(
    ref: ResourceGraph, gen: ResourceGraph, timeout: float = 30.0
) -> tuple[float, EditPath, bool]:
    """Best edit path found within the deadline; exact when search completes."""
    if timeout <= 0:
        raise ValueError("timeout must be positive")
    search = _GedSearch(ref, gen, time.monotonic() + timeout)
    best = None
    for cost, mapping in search.run():
        best = mapping
    if best is None:
        # deadline hit before the first dive completed: fall back to the
        # trivial delete-everything/insert-everything path
        best = {rl: None for rl in ref.nodes}
        search.timed_out = True
    path = path_from_mapping(ref, gen, best)
    return path.total_cost, path, search.timed_out


def structure_score(ref: ResourceGraph, gen: ResourceGraph, ged_cost: float) -> float:
    denom = len(ref.nodes) + len(ref.edges) + len(gen.nodes) + len(gen.edges)
    if denom == 0:
        return 1.0
    return max(0.0, 1.0 - ged_cost / denom)


def serialize_node(rtype: str, attributes: dict) -> str:
    parts = [f"type={rtype}"]
    for key in sorted(attributes):
        parts.append(f"{key}={attributes[key]}")
    return ", ".join(parts)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


class FallbackEmbedder:
    """Hashed character-trigram bag; deterministic and dependency-free.

    Exists so the test suite runs hermetically; not a semantic model.
    """

    dim = EMBED_DIM

    def embed(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dim)
        grams = [text[i:i + 3] for i in range(len(text) - 2)] or [text]
        for gram in grams:
            vec[zlib.crc32(gram.encode("utf-8")) % self.dim] += 1.0
        norm = np.linalg.norm(vec)
        return vec / norm if norm > 0 else vec


class ExternalEmbedder:
    """OpenAI-style /embeddings endpoint client (e.g. a local inference
    server hosting all-MiniLM-L6-v2)."""

    dim = EMBED_DIM

    def __init__(self, base_url: str = "", model: str = "", client=None):
        self.base_url = base_url or os.environ.get("EMBED_BASE_URL", "")
        self.model = model or os.environ.get("EMBED_MODEL", "all-MiniLM-L6-v2")
        self._client = client or httpx.Client(timeout=60.0)
        self._cache: dict[str, np.ndarray] = {}

    def embed(self, text: str) -> np.ndarray:
        if text in self._cache:
            return self._cache[text]
        if not self.base_url:
            raise EmbedderUnavailable("EMBED_BASE_URL is not configured")
        try:
            resp = self._client.post(
                self.base_url.rstrip("/") + "/embeddings",
                json={"model": self.model, "input": text},
            )
            resp.raise_for_status()
            raw = resp.json()["data"][0]["embedding"]
        except Exception as exc:
            raise EmbedderUnavailable(str(exc)) from exc
        vec = np.asarray(raw, dtype=float)
        norm = np.linalg.norm(vec)
        if norm > 0:
            vec = vec / norm
        self._cache[text] = vec
        return vec


def make_embedder(name: str):
    if name == "fallback":
        return FallbackEmbedder()
    if name == "external":
        return ExternalEmbedder()
    raise ValueError(f"unknown embedder {name!r}")


def attribute_score(ref: Spec, gen: Spec, path: EditPath, embedder) -> float:
    """Mean similarity over matched pairs, deletions, and insertions.

    Matched pairs with empty attributes on both sides count 1.0; deletions
    and insertions count 0.  An empty node set scores 1.0 by convention.
    """
    sims: list[float] = []
    ref_types = {l: extract_type(a) for l, a in ref.resources.items()}
    gen_types = {l: extract_type(a) for l, a in gen.resources.items()}
    for rl, gl in path.node_matches:
        ra = ref.attributes.get(rl, {})
        ga = gen.attributes.get(gl, {})
        if not ra and not ga:
            sims.append(1.0)
            continue
        rv = embedder.embed(serialize_node(ref_types[rl], ra))
        gv = embedder.embed(serialize_node(gen_types[gl], ga))
        sims.append(min(1.0, max(0.0, cosine(rv, gv))))
    sims.extend(0.0 for _ in path.node_deletions)
    sims.extend(0.0 for _ in path.node_insertions)
    if not sims:
        return 1.0
    return sum(sims) / len(sims)


@dataclass
class ScoreReport:
    structure_score: float
    attribute_score: float
    ged: float
    edit_path: EditPath
    timed_out: bool

    def to_dict(self) -> dict:
        return {
            "structure_score": self.structure_score,
            "attribute_score": self.attribute_score,
            "ged": self.ged,
            "edit_path": self.edit_path.to_dict(),
            "timed_out": self.timed_out,
        }


def score_pair(
    ref: Spec, gen: Spec, embedder, timeout: float = 30.0
) -> ScoreReport:
    """Full two-stage scoring of a (reference, generated) spec pair."""
    ref_graph = build_graph(ref)
    gen_graph = build_graph(gen)
    cost, path, timed_out = ged(ref_graph, gen_graph, timeout=timeout)
    return ScoreReport(
        structure_score=structure_score(ref_graph, gen_graph, cost),
        attribute_score=attribute_score(ref, gen, path, embedder),
        ged=cost,
        edit_path=path,
        timed_out=timed_out,
    )
