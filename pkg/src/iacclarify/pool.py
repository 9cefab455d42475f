"""Live candidate pool: dedup, deterministic pruning, history filtering.

Candidates sharing a fingerprint (type multiset + typed edges) are merged,
bumping multiplicity.  Attribute-level variants of merged duplicates are kept
as shadow specs under the same candidate id so attribute diffing still sees
them; structure always comes from the first-seen spec.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .disagreement import Axis, predicate_holds
from .spec_model import Fingerprint, Spec, fingerprint


@dataclass
class QA:
    """One answered clarification question."""

    question_text: str
    axis: Axis | None  # None for free-form (baseline) questions
    subject: tuple | None
    answer: str  # "yes" | "no"
    round: int


@dataclass
class Candidate:
    id: int
    spec: Spec
    multiplicity: int
    born_round: int
    shadow_specs: list[Spec] = field(default_factory=list)

    def all_specs(self) -> list[Spec]:
        return [self.spec, *self.shadow_specs]


class Pool:
    """Candidate pool owned by exactly one session."""

    def __init__(self):
        self.candidates: list[Candidate] = []
        self._next_id = 0
        self._by_fingerprint: dict[Fingerprint, Candidate] = {}

    def __len__(self):
        return len(self.candidates)

    def entries(self) -> list[tuple[int, list[Spec]]]:
        """Pool view for disagreement computation (shadows included)."""
        return [(c.id, c.all_specs()) for c in self.candidates]

    def fingerprints(self) -> set[Fingerprint]:
        return set(self._by_fingerprint)

    def dedup_insert(self, specs: list[Spec], round: int) -> int:
        """Insert specs, merging structural duplicates.

        Returns the number of new fingerprints added (stall detection input).
        """
        new_fps = 0
        for spec in specs:
            fp = fingerprint(spec)
            existing = self._by_fingerprint.get(fp)
            if existing is not None:
                existing.multiplicity += 1
                if spec.attributes != existing.spec.attributes and all(
                    spec.attributes != s.attributes for s in existing.shadow_specs
                ):
                    existing.shadow_specs.append(spec)
                continue
            cand = Candidate(self._next_id, spec, 1, round)
            self._next_id += 1
            self.candidates.append(cand)
            self._by_fingerprint[fp] = cand
            new_fps += 1
        return new_fps

    def prune(self, qa: QA) -> None:
        """Keep only candidates consistent with the answer.  No LLM calls.

        A candidate survives if any of its specs is consistent; inconsistent
        attribute shadows are dropped so the asked split is fully resolved in
        the surviving pool.
        """
        want = qa.answer == "yes"
        survivors = []
        for c in self.candidates:
            consistent = [
                s for s in c.all_specs()
                if predicate_holds(qa.axis, qa.subject, s) == want
            ]
            if not consistent:
                continue
            c.spec = consistent[0]
            c.shadow_specs = consistent[1:]
            survivors.append(c)
        self.candidates = survivors
        self._by_fingerprint = {fingerprint(c.spec): c for c in survivors}

    def select_best(self) -> Candidate | None:
        """Highest multiplicity, ties to the earliest-generated id."""
        if not self.candidates:
            return None
        return min(self.candidates, key=lambda c: (-c.multiplicity, c.id))


def spec_consistent_with_history(spec: Spec, history: list[QA]) -> bool:
    for qa in history:
        if qa.axis is None:
            continue
        if predicate_holds(qa.axis, qa.subject, spec) != (qa.answer == "yes"):
            return False
    return True


def filter_against_history(specs: list[Spec], history: list[QA]) -> list[Spec]:
    """Drop specs contradicting any answered structural predicate."""
    return [s for s in specs if spec_consistent_with_history(s, history)]
