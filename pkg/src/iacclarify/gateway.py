"""Provider abstraction for all generative calls.

Two providers ship: an OpenAI-compatible HTTP client with exponential-backoff
retries, and a scripted mock keyed by (call kind, sequence index) so tests can
script entire sessions deterministically.
"""
from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass
from importlib import resources as importlib_resources
from string import Template

import httpx

from .disagreement import Axis, Disagreement
from .errors import (
    AllCandidatesUnparseable,
    IacClarifyError,
    InvalidJson,
    MalformedResponse,
    ProviderUnavailable,
    SchemaViolation,
)
from .pool import QA
from .spec_model import Spec, normalize_labels, parse_spec

log = logging.getLogger(__name__)

FREE_TEXT = "free_text"
JSON_OBJECT = "json_object"


@dataclass
class ChatRequest:
    system_prompt: str
    user_prompt: str
    temperature: float = 0.2
    max_tokens: int = 2048
    response_format: str = FREE_TEXT

    def __post_init__(self):
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature {self.temperature} out of range")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")


@dataclass
class ProviderConfig:
    base_url: str = ""
    api_key: str = ""
    model_name: str = ""
    timeout: float = 60.0
    max_retries: int = 3

    def __post_init__(self):
        if self.max_retries > 10:
            raise ValueError("max_retries must be <= 10")

    @classmethod
    def from_env(cls) -> "ProviderConfig":
        return cls(
            base_url=os.environ.get("LLM_BASE_URL", ""),
            api_key=os.environ.get("LLM_API_KEY", ""),
            model_name=os.environ.get("LLM_MODEL", ""),
        )


def _check_json(text: str, response_format: str) -> str:
    if response_format == JSON_OBJECT:
        try:
            json.loads(text)
        except (json.JSONDecodeError, TypeError) as exc:
            raise MalformedResponse(f"expected JSON object: {exc}", raw_text=text)
    return text


class HttpProvider:
    """OpenAI-compatible chat-completions client."""

    def __init__(self, config: ProviderConfig, client: httpx.Client | None = None):
        self.config = config
        self._client = client or httpx.Client(timeout=config.timeout)

    def complete(self, request: ChatRequest, kind: str = "generic") -> str:
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        body = {
            "model": self.config.model_name,
            "messages": [
                {"role": "system", "content": request.system_prompt},
                {"role": "user", "content": request.user_prompt},
            ],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        headers = {"Authorization": f"Bearer {self.config.api_key}"}
        delay = 1.0
        last_err = None
        for attempt in range(self.config.max_retries + 1):
            try:
                resp = self._client.post(url, json=body, headers=headers)
                if resp.status_code in (429, 500, 502, 503, 504):
                    raise ProviderUnavailable(f"transient HTTP {resp.status_code}")
                resp.raise_for_status()
                payload = resp.json()
                text = payload["choices"][0]["message"]["content"]
                return _check_json(text, request.response_format)
            except (httpx.TransportError, ProviderUnavailable) as exc:
                last_err = exc
                if attempt < self.config.max_retries:
                    time.sleep(delay)
                    delay *= 2
            except (KeyError, IndexError, TypeError, ValueError) as exc:
                raise MalformedResponse(f"unexpected response shape: {exc}")
        raise ProviderUnavailable(f"exhausted retries: {last_err}")


class MockProvider:
    """Scripted provider keyed by (call kind, sequence index).

    The script maps a kind to an ordered list of canned replies; each call of
    that kind consumes the next entry.  A JSONL script file has one
    {"kind": ..., "response": ...} object per line.
    """

    def __init__(self, script: dict[str, list[str]] | None = None):
        self.script = {k: list(v) for k, v in (script or {}).items()}
        self.cursors: dict[str, int] = {}
        self.calls: list[tuple[str, ChatRequest]] = []

    @classmethod
    def from_jsonl(cls, path) -> "MockProvider":
        script: dict[str, list[str]] = {}
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                obj = json.loads(line)
                script.setdefault(obj["kind"], []).append(obj["response"])
        return cls(script)

    def complete(self, request: ChatRequest, kind: str = "generic") -> str:
        self.calls.append((kind, request))
        idx = self.cursors.get(kind, 0)
        replies = self.script.get(kind, [])
        if idx >= len(replies):
            raise ProviderUnavailable(f"mock script exhausted for kind {kind!r}")
        self.cursors[kind] = idx + 1
        reply = replies[idx]
        if reply == "<unavailable>":
            raise ProviderUnavailable("scripted failure")
        return _check_json(reply, request.response_format)


def load_prompt(name: str) -> str:
    return (
        importlib_resources.files("iacclarify.prompts")
        .joinpath(f"{name}.txt")
        .read_text()
    )


def render_prompt(name: str, **values: str) -> str:
    return Template(load_prompt(name)).safe_substitute(**values)


def render_history(history: list[QA]) -> str:
    lines = []
    for i, qa in enumerate(history, start=1):
        lines.append(f"Q{i}: {qa.question_text}")
        lines.append(f"A{i}: {qa.answer}")
    return "\n".join(lines) if lines else "(none)"


def describe_predicate(d: Disagreement) -> str:
    if d.axis is Axis.RESOURCE:
        return f"the infrastructure includes a {d.subject[0]} resource"
    if d.axis is Axis.TOPOLOGY:
        src, dst = d.subject
        return f"a {src} resource depends on a {dst} resource"
    rtype, key, pivot = d.subject
    return f"{rtype} attribute {key} is set to {pivot}"


def template_question(axis: Axis, subject: tuple) -> str:
    """Deterministic fallback question for a structural predicate."""
    if axis is Axis.RESOURCE:
        return f"Should the infrastructure include a {subject[0]} resource?"
    if axis is Axis.TOPOLOGY:
        src, dst = subject
        return f"Should a {src} resource depend on a {dst} resource?"
    rtype, key, pivot = subject
    return f"Should {rtype} attribute {key} be {pivot}?"


SYSTEM_PROMPT = "You are a precise assistant for cloud infrastructure design."


class Gateway:
    """High-level generative operations over a provider."""

    def __init__(
        self,
        provider,
        candidate_temperature: float = 0.9,
        steer_temperature: float = 0.2,
        max_tokens: int = 2048,
    ):
        self.provider = provider
        self.candidate_temperature = candidate_temperature
        self.steer_temperature = steer_temperature
        self.max_tokens = max_tokens

    def complete(self, request: ChatRequest, kind: str = "generic") -> str:
        return self.provider.complete(request, kind=kind)

    def _spec_completion(self, prompt: str, kind: str, temperature: float) -> Spec:
        """One spec-JSON completion with a single repair round-trip."""
        request = ChatRequest(
            SYSTEM_PROMPT, prompt, temperature, self.max_tokens, JSON_OBJECT
        )
        reply = ""
        try:
            reply = self.provider.complete(request, kind=kind)
            return normalize_labels(parse_spec(reply))
        except MalformedResponse as exc:
            raw = exc.raw_text
        except (InvalidJson, SchemaViolation):
            raw = reply
        repair = ChatRequest(
            SYSTEM_PROMPT,
            render_prompt("repair", reply=raw),
            self.steer_temperature,
            self.max_tokens,
            JSON_OBJECT,
        )
        reply = self.provider.complete(repair, kind="repair")
        return normalize_labels(parse_spec(reply))

    def generate_candidate_specs(
        self,
        intent: str,
        history: list[QA],
        n: int,
        temperature: float | None = None,
    ) -> list[Spec]:
        """Sample n candidate specs; unparseable replies are dropped after one
        repair attempt."""
        temperature = self.candidate_temperature if temperature is None else temperature
        prompt = render_prompt(
            "candidates", intent=intent, history=render_history(history)
        )
        specs: list[Spec] = []
        for _ in range(n):
            try:
                specs.append(self._spec_completion(prompt, "candidates", temperature))
            except (MalformedResponse, InvalidJson, SchemaViolation):
                log.debug("dropping unparseable candidate reply")
        if not specs:
            raise AllCandidatesUnparseable(f"0 of {n} candidate replies parsed")
        return specs

    def phrase_question(self, d: Disagreement) -> str:
        """Natural-language yes/no question whose yes means d's predicate."""
        prompt = render_prompt("question", statement=describe_predicate(d))
        request = ChatRequest(
            SYSTEM_PROMPT, prompt, self.steer_temperature, 256, FREE_TEXT
        )
        try:
            text = self.provider.complete(request, kind="question").strip()
            if text:
                return text
        except IacClarifyError:
            pass
        return template_question(d.axis, d.subject)

    def final_generation(self, intent: str, history: list[QA]) -> tuple[Spec, bool]:
        """Final spec; degrades to (empty spec, flagged=True) on double parse
        failure."""
        prompt = render_prompt("final", intent=intent, history=render_history(history))
        try:
            return self._spec_completion(prompt, "final", self.steer_temperature), False
        except (MalformedResponse, InvalidJson, SchemaViolation):
            return Spec(), True

    # --- baseline question operations -------------------------------------

    def direct_question(self, intent: str, history: list[QA]) -> tuple[str, None]:
        """Free-form clarification question (Direct baseline).  The predicate
        slot is None: only an LLM-proxy oracle can answer these."""
        prompt = render_prompt(
            "direct_question", intent=intent, history=render_history(history)
        )
        request = ChatRequest(
            SYSTEM_PROMPT, prompt, self.candidate_temperature, 256, FREE_TEXT
        )
        return self.provider.complete(request, kind="direct_question").strip(), None

    def sample_questions(self, intent: str, history: list[QA], n: int) -> list[tuple[str, None]]:
        return [self.direct_question(intent, history) for _ in range(n)]

    def rank_questions(self, intent: str, questions: list[str]) -> int:
        """Index (0-based) of the ranker's pick; malformed replies pick 0."""
        numbered = "\n".join(f"{i + 1}. {q}" for i, q in enumerate(questions))
        prompt = render_prompt("ranker", intent=intent, questions=numbered)
        request = ChatRequest(SYSTEM_PROMPT, prompt, self.steer_temperature, 16, FREE_TEXT)
        reply = self.provider.complete(request, kind="ranker").strip()
        try:
            idx = int(reply) - 1
        except ValueError:
            return 0
        return idx if 0 <= idx < len(questions) else 0
