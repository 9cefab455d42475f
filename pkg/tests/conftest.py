import random

import pytest

from iacclarify.spec_model import Spec, normalize_labels


@pytest.fixture
def vpc_subnet_spec():
    spec = Spec(
        resources={"main": "aws_vpc.main", "public": "aws_subnet.public"},
        topology={"public": ["main"]},
        attributes={"main": {"cidr_block": "10.0.0.0/16"}},
    )
    spec.validate()
    return spec


TYPES = ["aws_vpc", "aws_subnet", "aws_instance", "aws_db_instance"]


def random_spec(rng: random.Random, max_nodes: int = 5) -> Spec:
    n = rng.randint(0, max_nodes)
    resources = {}
    for i in range(n):
        rtype = rng.choice(TYPES)
        resources[f"r{i}"] = f"{rtype}.r{i}"
    labels = list(resources)
    topology = {}
    for src in labels:
        deps = [d for d in labels if d != src and rng.random() < 0.3]
        if deps:
            topology[src] = deps
    attributes = {}
    for label in labels:
        if rng.random() < 0.5:
            attributes[label] = {
                rng.choice(["size", "tier", "zone"]): rng.choice(["a", "b", "c"])
            }
    return normalize_labels(Spec(resources, topology, attributes))
