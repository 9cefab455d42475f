import json
import random

import pytest
from hypothesis import given, strategies as st

from iacclarify.errors import InvalidJson, MalformedAddress, SchemaViolation
from iacclarify.spec_model import (
    Spec,
    extract_type,
    fingerprint,
    normalize_labels,
    parse_spec,
    serialize_spec,
)

from .conftest import random_spec


class TestExtractType:
    def test_plain_address(self):
        assert extract_type("aws_vpc.main") == "aws_vpc"

    def test_data_source_keeps_prefix(self):
        assert extract_type("data.aws_iam_policy_document.p1") == \
            "data.aws_iam_policy_document"

    def test_type_equal_to_name(self):
        assert extract_type("aws_s3_bucket.aws_s3_bucket") == "aws_s3_bucket"

    def test_no_separator_rejected(self):
        with pytest.raises(MalformedAddress):
            extract_type("aws_vpc")
        with pytest.raises(MalformedAddress):
            extract_type("")


class TestNormalizeLabels:
    def test_suffix_becomes_label(self):
        spec = Spec(resources={"x": "aws_vpc.main"})
        assert normalize_labels(spec).resources == {"main": "aws_vpc.main"}

    def test_collision_uses_full_address(self):
        spec = Spec(resources={"a": "aws_vpc.main", "b": "aws_subnet.main"})
        out = normalize_labels(spec)
        assert set(out.resources) == {"aws_vpc.main", "aws_subnet.main"}

    def test_empty_spec_identity(self):
        assert normalize_labels(Spec()) == Spec()

    def test_topology_and_attributes_rewritten(self, vpc_subnet_spec):
        renamed = Spec(
            resources={"x": "aws_vpc.main", "y": "aws_subnet.public"},
            topology={"y": ["x"]},
            attributes={"x": {"cidr_block": "10.0.0.0/16"}},
        )
        assert normalize_labels(renamed) == vpc_subnet_spec

    def test_idempotent_on_random_specs(self):
        rng = random.Random(7)
        for _ in range(50):
            spec = random_spec(rng)
            once = normalize_labels(spec)
            assert normalize_labels(once) == once


class TestFingerprint:
    def test_single_node(self):
        fp = fingerprint(Spec(resources={"main": "aws_vpc.main"}))
        assert fp.resource_types == ("aws_vpc",)
        assert fp.typed_edges == ()

    def test_attributes_ignored(self, vpc_subnet_spec):
        other = Spec(
            resources=dict(vpc_subnet_spec.resources),
            topology={k: list(v) for k, v in vpc_subnet_spec.topology.items()},
            attributes={"main": {"cidr_block": "172.16.0.0/16"}},
        )
        assert fingerprint(vpc_subnet_spec) == fingerprint(other)

    def test_typed_edge_recorded(self, vpc_subnet_spec):
        assert fingerprint(vpc_subnet_spec).typed_edges == (("aws_subnet", "aws_vpc"),)

    def test_invariant_under_label_renaming(self, vpc_subnet_spec):
        renamed = Spec(
            resources={"a": "aws_vpc.net", "b": "aws_subnet.sub"},
            topology={"b": ["a"]},
            attributes={},
        )
        assert fingerprint(renamed) == fingerprint(vpc_subnet_spec)

    def test_duplicate_types_are_multiset(self):
        two = Spec(resources={"a": "aws_subnet.a", "b": "aws_subnet.b"})
        one = Spec(resources={"a": "aws_subnet.a"})
        assert fingerprint(two) != fingerprint(one)


class TestParseSerialize:
    def test_empty_object(self):
        assert parse_spec('{"resources":{},"topology":{},"attributes":{}}') == Spec()

    def test_missing_keys_default_empty(self):
        assert parse_spec("{}") == Spec()

    def test_unknown_topology_label_rejected(self):
        text = '{"resources":{"a":"aws_vpc.a"},"topology":{"ghost":["a"]}}'
        with pytest.raises(SchemaViolation) as err:
            parse_spec(text)
        assert err.value.label == "ghost"

    def test_unknown_attribute_label_rejected(self):
        text = '{"resources":{},"attributes":{"ghost":{"k":"v"}}}'
        with pytest.raises(SchemaViolation):
            parse_spec(text)

    def test_invalid_json(self):
        with pytest.raises(InvalidJson):
            parse_spec("not json")
        with pytest.raises(InvalidJson):
            parse_spec("[1,2]")

    def test_round_trip_three_resources(self):
        spec = Spec(
            resources={"a": "aws_vpc.a", "b": "aws_subnet.b", "c": "aws_instance.c"},
            topology={"b": ["a"], "c": ["b"]},
            attributes={"c": {"instance_type": "t3.micro"}},
        )
        assert parse_spec(serialize_spec(spec)) == spec

    def test_keys_emitted_sorted(self):
        spec = Spec(resources={"b": "aws_vpc.b", "a": "aws_subnet.a"})
        raw = json.loads(serialize_spec(spec))
        assert list(raw["resources"]) == ["a", "b"]

    def test_attribute_values_canonicalized(self):
        text = json.dumps(
            {
                "resources": {"a": "aws_vpc.a"},
                "attributes": {"a": {"count": 3, "flag": True, "tags": {"b": 1, "a": 2}}},
            }
        )
        spec = parse_spec(text)
        assert spec.attributes["a"] == {
            "count": "3",
            "flag": "true",
            "tags": '{"a":2,"b":1}',
        }

    @given(st.integers(0, 10_000))
    def test_round_trip_property(self, seed):
        spec = random_spec(random.Random(seed))
        assert parse_spec(serialize_spec(spec)) == spec
