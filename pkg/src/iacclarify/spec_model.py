"""Structured infrastructure specification: the (resources, topology, attributes) triple.

A spec maps resource labels to Terraform-style addresses, labels to the
labels they depend on, and labels to key/value attribute maps.  Attribute
values are canonicalized to strings at parse time so diffing and embedding
stay deterministic.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import InvalidJson, MalformedAddress, SchemaViolation


def extract_type(address: str) -> str:
    """Resource type prefix of a Terraform-style address.

    ``aws_vpc.main`` -> ``aws_vpc``; for data sources the ``data.`` prefix is
    kept: ``data.aws_iam_policy_document.p1`` -> ``data.aws_iam_policy_document``.
    """
    if not address or "." not in address:
        raise MalformedAddress(f"address {address!r} has no '.' separator")
    parts = address.split(".")
    if parts[0] == "data" and len(parts) >= 2:
        return "data." + parts[1]
    return parts[0]


def canonical_value(value) -> str:
    """Render an attribute value as a canonical string."""
    if isinstance(value, str):
        return value
    return json.dumps(value, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class Spec:
    """One candidate or reference configuration.

    Treat instances as immutable values; all operations return new specs.
    """

    resources: dict[str, str] = field(default_factory=dict)
    topology: dict[str, list[str]] = field(default_factory=dict)
    attributes: dict[str, dict[str, str]] = field(default_factory=dict)

    def validate(self) -> None:
        for label, deps in self.topology.items():
            if label not in self.resources:
                raise SchemaViolation(
                    f"topology references unknown label {label!r}", label=label
                )
            for dep in deps:
                if dep not in self.resources:
                    raise SchemaViolation(
                        f"topology dependency references unknown label {dep!r}",
                        label=dep,
                    )
        for label in self.attributes:
            if label not in self.resources:
                raise SchemaViolation(
                    f"attributes reference unknown label {label!r}", label=label
                )

    def resource_types(self) -> list[str]:
        """Multiset of resource types, sorted."""
        return sorted(extract_type(a) for a in self.resources.values())

    def typed_edges(self) -> set[tuple[str, str]]:
        edges = set()
        for label, deps in self.topology.items():
            src = extract_type(self.resources[label])
            for dep in deps:
                edges.add((src, extract_type(self.resources[dep])))
        return edges

    def is_empty(self) -> bool:
        return not self.resources


@dataclass(frozen=True)
class Fingerprint:
    """Structural dedup key: type multiset plus typed edge set."""

    resource_types: tuple[str, ...]
    typed_edges: tuple[tuple[str, str], ...]


def fingerprint(spec: Spec) -> Fingerprint:
    return Fingerprint(
        resource_types=tuple(spec.resource_types()),
        typed_edges=tuple(sorted(spec.typed_edges())),
    )


def normalize_labels(spec: Spec) -> Spec:
    """Rewrite labels to the instance-name suffix of each address.

    On suffix collision the full address is used for every colliding entry;
    if that still collides the original label disambiguates.  Topology and
    attribute keys are rewritten consistently.
    """
    suffixes = {}
    for label, address in spec.resources.items():
        suffixes.setdefault(address.split(".")[-1], []).append(label)

    rename: dict[str, str] = {}
    taken: set[str] = set()
    for suffix, labels in suffixes.items():
        if len(labels) == 1:
            rename[labels[0]] = suffix
            taken.add(suffix)
    for suffix, labels in suffixes.items():
        if len(labels) == 1:
            continue
        for label in labels:
            new = spec.resources[label]
            if new in taken:
                new = f"{new}#{label}"
            rename[label] = new
            taken.add(new)

    return Spec(
        resources={rename[l]: a for l, a in spec.resources.items()},
        topology={
            rename[l]: [rename[d] for d in deps] for l, deps in spec.topology.items()
        },
        attributes={rename[l]: dict(kv) for l, kv in spec.attributes.items()},
    )


def parse_spec(json_text: str) -> Spec:
    """Parse the canonical JSON interchange format.

    Missing top-level keys default to empty maps; attribute values are
    canonicalized to strings.
    """
    try:
        raw = json.loads(json_text)
    except (json.JSONDecodeError, TypeError) as exc:
        raise InvalidJson(str(exc)) from exc
    if not isinstance(raw, dict):
        raise InvalidJson("top level must be a JSON object")

    resources = raw.get("resources") or {}
    topology = raw.get("topology") or {}
    attributes = raw.get("attributes") or {}
    if not isinstance(resources, dict) or not isinstance(topology, dict) \
            or not isinstance(attributes, dict):
        raise InvalidJson("resources/topology/attributes must be objects")

    spec = Spec(
        resources={str(k): str(v) for k, v in resources.items()},
        topology={str(k): [str(d) for d in v] for k, v in topology.items()},
        attributes={
            str(k): {str(ak): canonical_value(av) for ak, av in kv.items()}
            for k, kv in attributes.items()
        },
    )
    spec.validate()
    for address in spec.resources.values():
        extract_type(address)  # raises MalformedAddress early
    return spec


def serialize_spec(spec: Spec) -> str:
    """Stable JSON rendering; map keys in sorted order."""
    return json.dumps(
        {
            "resources": spec.resources,
            "topology": spec.topology,
            "attributes": spec.attributes,
        },
        sort_keys=True,
        separators=(", ", ": "),
    )


def spec_to_dict(spec: Spec) -> dict:
    return json.loads(serialize_spec(spec))
