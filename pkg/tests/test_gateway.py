import json

import pytest

from iacclarify.disagreement import Axis, Disagreement
from iacclarify.errors import (
    AllCandidatesUnparseable,
    MalformedResponse,
    ProviderUnavailable,
)
from iacclarify.gateway import (
    ChatRequest,
    Gateway,
    MockProvider,
    render_history,
    template_question,
)
from iacclarify.pool import QA
from iacclarify.spec_model import serialize_spec, Spec

SPEC_JSON = json.dumps(
    {
        "resources": {"main": "aws_vpc.main"},
        "topology": {},
        "attributes": {},
    }
)


def nat_disagreement():
    return Disagreement(
        Axis.RESOURCE, ("aws_nat_gateway",), frozenset({1}), frozenset({2}), 1.0
    )


class TestMockProvider:
    def test_scripted_echo(self):
        provider = MockProvider({"generic": ["yes"]})
        assert provider.complete(ChatRequest("s", "u")) == "yes"

    def test_exhausted_script_is_unavailable(self):
        provider = MockProvider({})
        with pytest.raises(ProviderUnavailable):
            provider.complete(ChatRequest("s", "u"))

    def test_json_format_validates(self):
        provider = MockProvider({"generic": ["not json"]})
        with pytest.raises(MalformedResponse):
            provider.complete(
                ChatRequest("s", "u", response_format="json_object")
            )

    def test_keyed_by_kind_and_sequence(self):
        provider = MockProvider({"a": ["1", "2"], "b": ["3"]})
        req = ChatRequest("s", "u")
        assert provider.complete(req, kind="a") == "1"
        assert provider.complete(req, kind="b") == "3"
        assert provider.complete(req, kind="a") == "2"

    def test_jsonl_script(self, tmp_path):
        path = tmp_path / "script.jsonl"
        path.write_text(
            '{"kind": "question", "response": "Need a NAT?"}\n'
            '{"kind": "question", "response": "Need a VPC?"}\n'
        )
        provider = MockProvider.from_jsonl(path)
        req = ChatRequest("s", "u")
        assert provider.complete(req, kind="question") == "Need a NAT?"
        assert provider.complete(req, kind="question") == "Need a VPC?"


class TestChatRequest:
    def test_temperature_bounds(self):
        with pytest.raises(ValueError):
            ChatRequest("s", "u", temperature=2.5)

    def test_max_tokens_positive(self):
        with pytest.raises(ValueError):
            ChatRequest("s", "u", max_tokens=0)


class TestGenerateCandidates:
    def test_scripted_specs_returned(self):
        provider = MockProvider({"candidates": [SPEC_JSON] * 3})
        gw = Gateway(provider)
        specs = gw.generate_candidate_specs("intent", [], 3)
        assert len(specs) == 3
        assert all(s.resources == {"main": "aws_vpc.main"} for s in specs)

    def test_malformed_after_repair_dropped(self):
        provider = MockProvider(
            {
                "candidates": [SPEC_JSON, "broken", SPEC_JSON],
                "repair": ["still broken"],
            }
        )
        gw = Gateway(provider)
        assert len(gw.generate_candidate_specs("intent", [], 3)) == 2

    def test_repair_rescues(self):
        provider = MockProvider({"candidates": ["broken"], "repair": [SPEC_JSON]})
        gw = Gateway(provider)
        assert len(gw.generate_candidate_specs("intent", [], 1)) == 1

    def test_all_unparseable_raises(self):
        provider = MockProvider(
            {"candidates": ["broken"], "repair": ["nope"]}
        )
        with pytest.raises(AllCandidatesUnparseable):
            Gateway(provider).generate_candidate_specs("intent", [], 1)

    def test_history_rendered_into_prompt(self):
        provider = MockProvider({"candidates": [SPEC_JSON]})
        gw = Gateway(provider)
        history = [QA("Need a NAT gateway?", Axis.RESOURCE, ("aws_nat_gateway",), "yes", 1)]
        gw.generate_candidate_specs("intent", history, 1)
        kind, request = provider.calls[0]
        assert kind == "candidates"
        assert "Q1: Need a NAT gateway?" in request.user_prompt
        assert "A1: yes" in request.user_prompt


class TestPhraseQuestion:
    def test_provider_text_used(self):
        provider = MockProvider({"question": ["Do you want a NAT gateway?"]})
        assert Gateway(provider).phrase_question(nat_disagreement()) == \
            "Do you want a NAT gateway?"

    def test_fallback_template_on_provider_failure(self):
        gw = Gateway(MockProvider({}))
        assert gw.phrase_question(nat_disagreement()) == \
            "Should the infrastructure include a aws_nat_gateway resource?"

    def test_attribute_fallback_template(self):
        d = Disagreement(
            Axis.ATTRIBUTE,
            ("aws_db_instance", "instance_class", "db.t3.micro"),
            frozenset({1}), frozenset({2}), 1.0,
        )
        assert Gateway(MockProvider({})).phrase_question(d) == \
            "Should aws_db_instance attribute instance_class be db.t3.micro?"

    def test_topology_template(self):
        assert template_question(Axis.TOPOLOGY, ("aws_subnet", "aws_vpc")) == \
            "Should a aws_subnet resource depend on a aws_vpc resource?"


class TestFinalGeneration:
    def test_scripted_spec(self):
        gw = Gateway(MockProvider({"final": [SPEC_JSON]}))
        spec, flagged = gw.final_generation("intent", [])
        assert spec.resources == {"main": "aws_vpc.main"}
        assert flagged is False

    def test_double_failure_degrades_to_empty(self):
        gw = Gateway(MockProvider({"final": ["broken"], "repair": ["broken too"]}))
        spec, flagged = gw.final_generation("intent", [])
        assert spec == Spec()
        assert flagged is True

    def test_history_order_in_prompt(self):
        provider = MockProvider({"final": [SPEC_JSON]})
        gw = Gateway(provider)
        history = [
            QA("first?", Axis.RESOURCE, ("a_b",), "yes", 1),
            QA("second?", Axis.RESOURCE, ("c_d",), "no", 2),
        ]
        gw.final_generation("intent", history)
        _, request = provider.calls[0]
        prompt = request.user_prompt
        assert prompt.index("Q1: first?") < prompt.index("A1: yes") \
            < prompt.index("Q2: second?") < prompt.index("A2: no")


class TestDeterminism:
    def test_identical_scripts_identical_outputs(self):
        def run():
            provider = MockProvider(
                {"candidates": [SPEC_JSON] * 2, "final": [SPEC_JSON]}
            )
            gw = Gateway(provider)
            specs = gw.generate_candidate_specs("intent", [], 2)
            final, _ = gw.final_generation("intent", [])
            return [serialize_spec(s) for s in specs] + [serialize_spec(final)]

        assert run() == run()


def test_render_history_empty():
    assert render_history([]) == "(none)"
