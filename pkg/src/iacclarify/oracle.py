"""User proxy answering binary questions strictly from a reference spec.

Rule-based mode evaluates the asked structural predicate directly on the
reference; the LLM-proxy mode renders the reference and the question and
parses a yes/no reply.
"""
from __future__ import annotations

from .disagreement import Axis, predicate_holds
from .errors import IacClarifyError
from .gateway import ChatRequest, SYSTEM_PROMPT, render_prompt
from .spec_model import Spec, serialize_spec


class RuleBasedOracle:
    """Deterministic, total: absence of the asked fact means no."""

    def __init__(self, reference: Spec):
        self.reference = reference

    def answer(self, question_text: str, axis: Axis | None, subject: tuple | None) -> str:
        if axis is None:
            raise ValueError("rule-based oracle needs a structural predicate")
        return "yes" if predicate_holds(axis, subject, self.reference) else "no"

    def __call__(self, question_text, axis=None, subject=None):
        return self.answer(question_text, axis, subject)


class LlmProxyOracle:
    """Answers free-text questions from the reference via the LLM gateway.

    A non-yes/no reply is retried once, then defaults to no.
    """

    def __init__(self, reference: Spec, gateway):
        self.reference = reference
        self.gateway = gateway

    def answer(self, question_text: str, axis=None, subject=None) -> str:
        prompt = render_prompt(
            "oracle",
            reference=serialize_spec(self.reference),
            question=question_text,
        )
        request = ChatRequest(SYSTEM_PROMPT, prompt, 0.0, 8)
        for _ in range(2):
            try:
                reply = self.gateway.complete(request, kind="oracle").strip().lower()
            except IacClarifyError:
                continue
            if reply.startswith("yes"):
                return "yes"
            if reply.startswith("no"):
                return "no"
        return "no"

    def __call__(self, question_text, axis=None, subject=None):
        return self.answer(question_text, axis, subject)
