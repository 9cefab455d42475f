"""Symbolic disagreement computation, entropy scoring, and question scheduling.

Disagreements are binary structural predicates on which pool members differ.
Each one partitions the live candidate ids into a yes side and a no side and
carries the Shannon entropy of that split.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateSplit, EmptyPool
from .spec_model import Spec, extract_type


class Axis(Enum):
    RESOURCE = "resource"
    TOPOLOGY = "topology"
    ATTRIBUTE = "attribute"


AXIS_ORDER = (Axis.RESOURCE, Axis.TOPOLOGY, Axis.ATTRIBUTE)


@dataclass(frozen=True)
class Disagreement:
    axis: Axis
    subject: tuple  # resource: (type,); topology: (src, dst); attribute: (type, key, pivot)
    yes_side: frozenset
    no_side: frozenset
    entropy_bits: float

    def subject_key(self) -> tuple:
        return tuple(str(p) for p in self.subject)


def entropy(yes_count: int, no_count: int) -> float:
    """Shannon entropy (bits) of a two-way split."""
    total = yes_count + no_count
    if total == 0:
        raise DegenerateSplit("both counts are zero")
    p = yes_count / total
    bits = 0.0
    for q in (p, 1.0 - p):
        if q > 0.0:
            bits -= q * math.log2(q)
    return bits


def predicate_holds(axis: Axis, subject: tuple, spec: Spec) -> bool:
    """Evaluate one structural predicate against a single spec."""
    if axis is Axis.RESOURCE:
        (rtype,) = subject
        return any(extract_type(a) == rtype for a in spec.resources.values())
    if axis is Axis.TOPOLOGY:
        src, dst = subject
        return (src, dst) in spec.typed_edges()
    rtype, key, pivot = subject
    for label, address in spec.resources.items():
        if extract_type(address) == rtype:
            if spec.attributes.get(label, {}).get(key) == pivot:
                return True
    return False


def _as_spec_lists(pool):
    """Accept (id, Spec) or (id, [Spec, ...]) pool entries uniformly."""
    out = []
    for cid, specs in pool:
        if isinstance(specs, Spec):
            specs = [specs]
        out.append((cid, list(specs)))
    return out


def candidate_holds(axis: Axis, subject: tuple, specs: list[Spec]) -> bool:
    """A candidate satisfies a predicate if any of its specs does.

    Extra specs only exist for structurally identical duplicates, so resource
    and topology predicates agree across them; attribute predicates may not.
    """
    return any(predicate_holds(axis, subject, s) for s in specs)


def compute_disagreements(pool) -> list[Disagreement]:
    """Diff the pool along the three axes and binarize every split.

    ``pool`` is a list of (candidate_id, Spec) or (candidate_id, [Spec, ...])
    pairs; the list form carries attribute alternates of merged duplicates.
    """
    entries = _as_spec_lists(pool)
    if not entries:
        raise EmptyPool("cannot diff an empty pool")
    all_ids = frozenset(cid for cid, _ in entries)
    if len(entries) < 2:
        return []

    out: list[Disagreement] = []

    def emit(axis, subject, yes_ids):
        yes = frozenset(yes_ids)
        no = all_ids - yes
        if yes and no:
            out.append(
                Disagreement(axis, subject, yes, no, entropy(len(yes), len(no)))
            )

    # Resource axis: types present in some candidates, absent from others.
    all_types = set()
    for _, specs in entries:
        for s in specs:
            all_types.update(s.resource_types())
    for rtype in sorted(all_types):
        yes = {cid for cid, specs in entries
               if candidate_holds(Axis.RESOURCE, (rtype,), specs)}
        emit(Axis.RESOURCE, (rtype,), yes)

    # Topology axis: typed edges on which candidates disagree.
    all_edges = set()
    for _, specs in entries:
        for s in specs:
            all_edges.update(s.typed_edges())
    for edge in sorted(all_edges):
        yes = {cid for cid, specs in entries
               if candidate_holds(Axis.TOPOLOGY, edge, specs)}
        emit(Axis.TOPOLOGY, edge, yes)

    # Attribute axis: group by resource type, then per key compare assigned
    # values.  One binarized disagreement per distinct pivot value.
    contexts: dict[tuple[str, str], set[str]] = {}
    for _, specs in entries:
        for s in specs:
            for label, address in s.resources.items():
                rtype = extract_type(address)
                for key, value in s.attributes.get(label, {}).items():
                    contexts.setdefault((rtype, key), set()).add(value)
    for (rtype, key), values in sorted(contexts.items()):
        for pivot in sorted(values):
            subject = (rtype, key, pivot)
            yes = {cid for cid, specs in entries
                   if candidate_holds(Axis.ATTRIBUTE, subject, specs)}
            emit(Axis.ATTRIBUTE, subject, yes)

    return out


@dataclass
class RoundRobinState:
    """Cyclic cursor over the three axes; owned by a single session."""

    cursor: int = 0

    def advance_past(self, axis: Axis) -> None:
        self.cursor = (AXIS_ORDER.index(axis) + 1) % len(AXIS_ORDER)


def rank_and_select(
    disagreements: list[Disagreement],
    rr_state: RoundRobinState,
    rr_enabled: bool = True,
    min_entropy_bits: float = 0.25,
) -> Disagreement | None:
    """Pick the next disagreement to ask about.

    Disagreements below the entropy threshold are discarded.  With round-robin
    enabled the highest-entropy disagreement on the next axis in cyclic order
    is chosen (empty axes are skipped); otherwise the global entropy maximum
    wins.  Ties break by axis order then lexicographic subject.
    """
    surviving = [d for d in disagreements if d.entropy_bits >= min_entropy_bits]
    if not surviving:
        return None

    def pick(cands):
        # max entropy; ties by axis order, then lexicographic subject
        return min(
            cands,
            key=lambda d: (
                -d.entropy_bits,
                AXIS_ORDER.index(d.axis),
                d.subject_key(),
            ),
        )

    if not rr_enabled:
        return pick(surviving)

    by_axis = {axis: [] for axis in AXIS_ORDER}
    for d in surviving:
        by_axis[d.axis].append(d)
    for offset in range(len(AXIS_ORDER)):
        axis = AXIS_ORDER[(rr_state.cursor + offset) % len(AXIS_ORDER)]
        if by_axis[axis]:
            chosen = pick(by_axis[axis])
            rr_state.advance_past(axis)
            return chosen
    return None


def disagreement_counts(disagreements: list[Disagreement]) -> tuple[int, int, int]:
    """Raw (resource, topology, attribute) counts for instrumentation."""
    counts = {axis: 0 for axis in AXIS_ORDER}
    for d in disagreements:
        counts[d.axis] += 1
    return tuple(counts[axis] for axis in AXIS_ORDER)
