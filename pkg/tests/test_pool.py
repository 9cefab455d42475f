import random

from iacclarify.disagreement import Axis, compute_disagreements
from iacclarify.pool import QA, Pool, filter_against_history
from iacclarify.spec_model import Spec

from .conftest import random_spec


def spec(types, attrs=None):
    resources = {f"{t.split('_', 1)[-1]}{i}": f"{t}.x{i}" for i, t in enumerate(types)}
    return Spec(resources=resources, attributes=attrs or {})


VPC = Spec(resources={"main": "aws_vpc.main"})
VPC_ALT = Spec(
    resources={"main": "aws_vpc.main"},
    attributes={"main": {"cidr_block": "172.16.0.0/16"}},
)
NAT = Spec(resources={"main": "aws_vpc.main", "nat": "aws_nat_gateway.nat"})


class TestDedupInsert:
    def test_identical_specs_merge(self):
        pool = Pool()
        added = pool.dedup_insert([VPC, VPC], round=0)
        assert added == 1
        assert len(pool) == 1
        assert pool.candidates[0].multiplicity == 2
        assert pool.candidates[0].shadow_specs == []

    def test_attribute_variant_kept_as_shadow(self):
        pool = Pool()
        pool.dedup_insert([VPC, VPC_ALT], round=0)
        cand = pool.candidates[0]
        assert cand.multiplicity == 2
        assert cand.shadow_specs == [VPC_ALT]
        # the attribute diff is still discoverable
        ds = compute_disagreements([*pool.entries(), (99, VPC)])
        assert any(d.axis is Axis.ATTRIBUTE for d in ds)

    def test_distinct_fingerprints_stay_separate(self):
        pool = Pool()
        added = pool.dedup_insert([VPC, NAT], round=0)
        assert added == 2
        assert len(pool) == 2

    def test_ids_monotonic(self):
        pool = Pool()
        pool.dedup_insert([VPC], round=0)
        pool.dedup_insert([NAT], round=1)
        ids = [c.id for c in pool.candidates]
        assert ids == sorted(ids) == list(set(ids))


class TestPrune:
    def nat_qa(self, answer):
        return QA("nat?", Axis.RESOURCE, ("aws_nat_gateway",), answer, round=1)

    def test_yes_removes_no_side(self):
        pool = Pool()
        pool.dedup_insert([VPC, NAT], round=0)
        pool.prune(self.nat_qa("yes"))
        assert [c.spec for c in pool.candidates] == [NAT]

    def test_no_on_universally_false_predicate_keeps_all(self):
        pool = Pool()
        pool.dedup_insert([VPC, VPC_ALT], round=0)
        pool.prune(self.nat_qa("no"))
        assert len(pool) == 1 and pool.candidates[0].multiplicity == 2

    def test_minority_answer_leaves_one(self):
        micro = Spec(
            resources={"db": "aws_db_instance.db"},
            attributes={"db": {"instance_class": "db.t3.micro"}},
        )
        large = Spec(
            resources={"db": "aws_db_instance.db", "x": "aws_vpc.x"},
            attributes={"db": {"instance_class": "db.r5.large"}},
        )
        pool = Pool()
        pool.dedup_insert([micro, micro, micro, large], round=0)
        qa = QA(
            "class?", Axis.ATTRIBUTE,
            ("aws_db_instance", "instance_class", "db.r5.large"), "yes", round=1,
        )
        pool.prune(qa)
        assert len(pool) == 1
        assert pool.candidates[0].spec == large

    def test_prune_is_idempotent(self):
        rng = random.Random(3)
        pool = Pool()
        pool.dedup_insert([random_spec(rng) for _ in range(6)], round=0)
        qa = self.nat_qa("no")
        pool.prune(qa)
        before = [(c.id, c.spec, tuple(c.shadow_specs)) for c in pool.candidates]
        pool.prune(qa)
        assert [(c.id, c.spec, tuple(c.shadow_specs)) for c in pool.candidates] == before

    def test_prune_resolves_asked_split(self):
        pool = Pool()
        pool.dedup_insert([VPC, VPC_ALT, NAT], round=0)
        qa = QA(
            "cidr?", Axis.ATTRIBUTE,
            ("aws_vpc", "cidr_block", "172.16.0.0/16"), "no", round=1,
        )
        pool.prune(qa)
        ds = compute_disagreements(pool.entries()) if len(pool) > 1 else []
        assert not any(
            d.axis is Axis.ATTRIBUTE and d.subject == qa.subject for d in ds
        )


class TestFilterAgainstHistory:
    def test_contradiction_dropped(self):
        history = [QA("nat?", Axis.RESOURCE, ("aws_nat_gateway",), "yes", 1)]
        assert filter_against_history([VPC], history) == []
        assert filter_against_history([NAT], history) == [NAT]

    def test_empty_history_identity(self):
        assert filter_against_history([VPC, NAT], []) == [VPC, NAT]

    def test_consistent_with_three_predicates(self):
        spec = Spec(
            resources={"main": "aws_vpc.main", "s": "aws_subnet.s"},
            topology={"s": ["main"]},
            attributes={"main": {"cidr_block": "10.0.0.0/16"}},
        )
        history = [
            QA("q1", Axis.RESOURCE, ("aws_subnet",), "yes", 1),
            QA("q2", Axis.TOPOLOGY, ("aws_subnet", "aws_vpc"), "yes", 2),
            QA("q3", Axis.ATTRIBUTE, ("aws_vpc", "cidr_block", "172.16.0.0/16"), "no", 3),
        ]
        assert filter_against_history([spec], history) == [spec]

    def test_composes_over_concatenation(self):
        rng = random.Random(11)
        specs = [random_spec(rng) for _ in range(20)]
        h1 = [QA("q", Axis.RESOURCE, ("aws_vpc",), "yes", 1)]
        h2 = [QA("q", Axis.RESOURCE, ("aws_db_instance",), "no", 2)]
        assert filter_against_history(specs, h1 + h2) == filter_against_history(
            filter_against_history(specs, h1), h2
        )

    def test_free_form_questions_ignored(self):
        history = [QA("anything else?", None, None, "no", 1)]
        assert filter_against_history([VPC], history) == [VPC]


class TestSelectBest:
    def test_multiplicity_wins(self):
        pool = Pool()
        pool.dedup_insert([NAT, VPC, VPC, VPC], round=0)
        assert pool.select_best().spec == VPC

    def test_tie_goes_to_earliest(self):
        pool = Pool()
        pool.dedup_insert([NAT, VPC], round=0)
        assert pool.select_best().spec == NAT

    def test_singleton(self):
        pool = Pool()
        pool.dedup_insert([VPC], round=0)
        assert pool.select_best().spec == VPC

    def test_empty_pool_none(self):
        assert Pool().select_best() is None
