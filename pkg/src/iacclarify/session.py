"""Clarification session loop: generate, diff, rank, ask, prune, regenerate.

The loop is re-entrant: ``start`` and ``submit_answer`` suspend at the
question boundary, so a service or UI can drive the session interactively;
``run_session`` drives the same machinery with an answer callback.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from .disagreement import (
    Axis,
    Disagreement,
    RoundRobinState,
    compute_disagreements,
    disagreement_counts,
    rank_and_select,
)
from .errors import NoPendingQuestion, SessionFinalized
from .pool import QA, Pool, filter_against_history
from .spec_model import Spec

log = logging.getLogger(__name__)


@dataclass
class SessionConfig:
    budget_k: int = 5
    pool_size: int = 8
    min_entropy_bits: float = 0.25
    rr_enabled: bool = True
    max_regens: int = 8

    def __post_init__(self):
        if self.budget_k < 0:
            raise ValueError("budget_k must be >= 0")
        if not 0.0 <= self.min_entropy_bits < 1.0:
            raise ValueError("min_entropy_bits must be in [0, 1)")


@dataclass
class InstrumentationRecord:
    round: int
    pool_size: int
    disagreement_counts: tuple[int, int, int]
    asked_axis: str | None
    regenerated: bool

    def to_dict(self) -> dict:
        return {
            "round": self.round,
            "pool_size": self.pool_size,
            "disagreement_counts": list(self.disagreement_counts),
            "asked_axis": self.asked_axis,
            "regenerated": self.regenerated,
        }


@dataclass
class NextQuestion:
    text: str
    axis: Axis
    subject: tuple
    round: int


@dataclass
class Finalized:
    spec: Spec
    flagged: bool = False


class Session:
    """State of one clarification dialogue; one logical thread of control."""

    def __init__(self, intent: str, config: SessionConfig, gateway, task_id: str = ""):
        self.task_id = task_id
        self.intent = intent
        self.config = config
        self.gateway = gateway
        self.pool = Pool()
        self.history: list[QA] = []
        self.rr_state = RoundRobinState()
        self.rounds_used = 0
        self.regen_count = 0
        self.trace: list[InstrumentationRecord] = []
        self.status = "active"
        self.final: Finalized | None = None
        self._pending: tuple[Disagreement, tuple[int, int, int], bool] | None = None
        self._pending_text = ""
        self._consecutive_stale_regens = 0

    # -- lifecycle ---------------------------------------------------------

    def start(self) -> NextQuestion | Finalized:
        specs = self.gateway.generate_candidate_specs(
            self.intent, self.history, self.config.pool_size
        )
        self.pool.dedup_insert(specs, round=0)
        return self._advance()

    def submit_answer(self, answer: str) -> NextQuestion | Finalized:
        if self.status == "finalized":
            raise SessionFinalized(f"session {self.task_id!r} already finalized")
        if self._pending is None:
            raise NoPendingQuestion("no question is awaiting an answer")
        if answer not in ("yes", "no"):
            raise ValueError(f"answer must be yes or no, got {answer!r}")
        selected, counts, regenerated = self._pending
        question_text = self._pending_text
        self._pending = None

        qa = QA(question_text, selected.axis, selected.subject, answer,
                round=self.rounds_used + 1)
        self.history.append(qa)
        self.rounds_used += 1
        self.pool.prune(qa)
        self.trace.append(
            InstrumentationRecord(
                round=self.rounds_used,
                pool_size=len(self.pool),
                disagreement_counts=counts,
                asked_axis=selected.axis.value,
                regenerated=regenerated,
            )
        )
        return self._advance()

    def pending_question(self) -> NextQuestion | None:
        if self._pending is None:
            return None
        selected, _, _ = self._pending
        return NextQuestion(
            self._pending_text, selected.axis, selected.subject, self.rounds_used + 1
        )

    # -- loop internals ----------------------------------------------------

    def _advance(self) -> NextQuestion | Finalized:
        regenerated_this_round = False
        while True:
            if self.rounds_used >= self.config.budget_k:
                return self._finalize(regenerated_this_round)

            disagreements = (
                compute_disagreements(self.pool.entries()) if len(self.pool) else []
            )
            selected = rank_and_select(
                disagreements,
                self.rr_state,
                rr_enabled=self.config.rr_enabled,
                min_entropy_bits=self.config.min_entropy_bits,
            )
            if selected is None:
                # Pool exhausted or nothing informative left: regenerate while
                # budget remains, unless regeneration has stalled.
                if (
                    self.regen_count >= self.config.max_regens
                    or self._consecutive_stale_regens >= 2
                ):
                    return self._finalize(regenerated_this_round)
                self._regenerate()
                regenerated_this_round = True
                if self._consecutive_stale_regens >= 2:
                    return self._finalize(regenerated_this_round)
                continue

            counts = disagreement_counts(disagreements)
            self._pending = (selected, counts, regenerated_this_round)
            self._pending_text = self.gateway.phrase_question(selected)
            return NextQuestion(
                self._pending_text, selected.axis, selected.subject,
                self.rounds_used + 1,
            )

    def _regenerate(self) -> None:
        specs = self.gateway.generate_candidate_specs(
            self.intent, self.history, self.config.pool_size
        )
        specs = filter_against_history(specs, self.history)
        new_fps = self.pool.dedup_insert(specs, round=self.rounds_used) if specs else 0
        self.regen_count += 1
        if new_fps == 0:
            self._consecutive_stale_regens += 1
        else:
            self._consecutive_stale_regens = 0
        log.debug(
            "session %s regeneration #%d added %d new fingerprints",
            self.task_id, self.regen_count, new_fps,
        )

    def _finalize(self, regenerated_this_round: bool = False) -> Finalized:
        if regenerated_this_round:
            # terminal record so regenerations without a follow-up question
            # remain visible in the trace
            self.trace.append(
                InstrumentationRecord(
                    round=self.rounds_used,
                    pool_size=len(self.pool),
                    disagreement_counts=(0, 0, 0),
                    asked_axis=None,
                    regenerated=True,
                )
            )
        best = self.pool.select_best()
        if best is not None:
            self.final = Finalized(best.spec, flagged=False)
        else:
            spec, flagged = self.gateway.final_generation(self.intent, self.history)
            self.final = Finalized(spec, flagged)
        self.status = "finalized"
        return self.final

    def trace_json(self) -> list[dict]:
        return [r.to_dict() for r in self.trace]


def run_session(
    intent: str,
    answerer,
    config: SessionConfig,
    gateway,
    task_id: str = "",
) -> tuple[Spec, Session]:
    """Drive a full session with an answer callback.

    ``answerer(question_text, axis, subject)`` must return "yes" or "no".
    """
    session = Session(intent, config, gateway, task_id=task_id)
    outcome = session.start()
    while isinstance(outcome, NextQuestion):
        answer = answerer(outcome.text, outcome.axis, outcome.subject)
        outcome = session.submit_answer(answer)
    return outcome.spec, session
