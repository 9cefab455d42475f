"""Benchmark harness: task loading, experiment runner, aggregation.

Ships a 10-task synthetic planted-target suite plus a seeded stochastic mock
generator, so the full pipeline runs hermetically without an LLM provider.
"""
from __future__ import annotations

import csv
import json
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baselines import run_best_of_n, run_direct, run_self_consistency
from .disagreement import Axis
from .errors import EmptyResults, IacClarifyError, InvalidTaskFile
from .gateway import template_question
from .metrics import make_embedder, score_pair
from .oracle import LlmProxyOracle, RuleBasedOracle
from .pool import QA, spec_consistent_with_history
from .session import SessionConfig, run_session
from .spec_model import (
    Spec,
    extract_type,
    normalize_labels,
    parse_spec,
    spec_to_dict,
)


@dataclass
class Task:
    id: str
    ambiguous_prompt: str
    reference_spec: Spec
    original_prompt: str = ""


@dataclass
class RunResult:
    task_id: str
    method: str
    budget_k: int
    structure_score: float = 0.0
    attribute_score: float = 0.0
    rounds_used: int = 0
    regen_count: int = 0
    records: list = field(default_factory=list)
    wall_time: float = 0.0
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "method": self.method,
            "budget_k": self.budget_k,
            "structure_score": self.structure_score,
            "attribute_score": self.attribute_score,
            "rounds_used": self.rounds_used,
            "regen_count": self.regen_count,
            "records": self.records,
            "wall_time": self.wall_time,
            "error": self.error,
        }


def load_tasks(path) -> list[Task]:
    """Parse a JSONL task file; reports the offending line on failure."""
    tasks = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InvalidTaskFile(lineno, f"invalid JSON: {exc}")
            if not isinstance(obj, dict) or "id" not in obj:
                raise InvalidTaskFile(lineno, "task object must have an 'id'")
            if "reference_spec" not in obj:
                raise InvalidTaskFile(lineno, "missing reference_spec")
            try:
                spec = normalize_labels(parse_spec(json.dumps(obj["reference_spec"])))
            except IacClarifyError as exc:
                raise InvalidTaskFile(lineno, f"bad reference_spec: {exc}")
            tasks.append(
                Task(
                    id=str(obj["id"]),
                    ambiguous_prompt=str(obj.get("ambiguous_prompt", "")),
                    reference_spec=spec,
                    original_prompt=str(obj.get("original_prompt", "")),
                )
            )
    return tasks


def save_tasks(tasks: list[Task], path) -> None:
    with open(path, "w") as fh:
        for task in tasks:
            fh.write(
                json.dumps(
                    {
                        "id": task.id,
                        "ambiguous_prompt": task.ambiguous_prompt,
                        "original_prompt": task.original_prompt,
                        "reference_spec": spec_to_dict(task.reference_spec),
                    },
                    sort_keys=True,
                )
                + "\n"
            )


# --- synthetic planted-target suite ---------------------------------------

# resource type -> attribute key -> plausible values (first is the default)
VOCAB: dict[str, dict[str, list[str]]] = {
    "aws_vpc": {"cidr_block": ["10.0.0.0/16", "172.16.0.0/16"]},
    "aws_subnet": {"cidr_block": ["10.0.1.0/24", "10.0.2.0/24"]},
    "aws_internet_gateway": {},
    "aws_nat_gateway": {},
    "aws_route_table": {},
    "aws_security_group": {"name": ["web", "internal"]},
    "aws_instance": {"instance_type": ["t3.micro", "m5.large"]},
    "aws_lb": {"load_balancer_type": ["application", "network"]},
    "aws_autoscaling_group": {"max_size": ["2", "8"]},
    "aws_db_instance": {
        "instance_class": ["db.t3.micro", "db.r5.large"],
        "engine": ["postgres", "mysql"],
    },
    "aws_elasticache_cluster": {"engine": ["redis", "memcached"]},
    "aws_s3_bucket": {"acl": ["private", "public-read"]},
    "aws_cloudfront_distribution": {},
    "aws_lambda_function": {"runtime": ["python3.12", "nodejs20.x"]},
    "aws_api_gateway_rest_api": {},
    "aws_sqs_queue": {"fifo_queue": ["false", "true"]},
    "aws_sns_topic": {},
    "aws_dynamodb_table": {"billing_mode": ["PAY_PER_REQUEST", "PROVISIONED"]},
    "aws_ecs_cluster": {},
    "aws_iam_role": {},
}


def _ref(resources, topology=None, attributes=None) -> Spec:
    spec = Spec(
        resources=dict(resources),
        topology={k: list(v) for k, v in (topology or {}).items()},
        attributes={k: dict(v) for k, v in (attributes or {}).items()},
    )
    spec.validate()
    return normalize_labels(spec)


def synthetic_tasks() -> list[Task]:
    """Ten planted-target tasks spanning resource, topology, and attribute
    ambiguity."""
    tasks = []

    def add(tid, prompt, resources, topology=None, attributes=None):
        tasks.append(Task(tid, prompt, _ref(resources, topology, attributes)))

    add(
        "web-basic",
        "I need a small public web server on AWS.",
        {
            "main": "aws_vpc.main",
            "public": "aws_subnet.public",
            "igw": "aws_internet_gateway.igw",
            "web": "aws_instance.web",
        },
        {"public": ["main"], "igw": ["main"], "web": ["public"]},
        {
            "main": {"cidr_block": "10.0.0.0/16"},
            "web": {"instance_type": "t3.micro"},
        },
    )
    add(
        "private-egress",
        "Our internal workers need outbound internet access but must stay private.",
        {
            "main": "aws_vpc.main",
            "private": "aws_subnet.private",
            "nat": "aws_nat_gateway.nat",
            "rt": "aws_route_table.rt",
            "worker": "aws_instance.worker",
        },
        {"private": ["main"], "nat": ["main"], "rt": ["nat"], "worker": ["private"]},
        {"worker": {"instance_type": "m5.large"}},
    )
    add(
        "db-tier",
        "Add persistent storage for our app; it is getting slow.",
        {
            "main": "aws_vpc.main",
            "app": "aws_subnet.app",
            "db": "aws_db_instance.db",
            "sg": "aws_security_group.sg",
        },
        {"app": ["main"], "db": ["app", "sg"], "sg": ["main"]},
        {
            "db": {"engine": "postgres", "instance_class": "db.t3.micro"},
            "sg": {"name": "internal"},
        },
    )
    add(
        "static-site",
        "Host our marketing site cheaply.",
        {
            "site": "aws_s3_bucket.site",
            "cdn": "aws_cloudfront_distribution.cdn",
        },
        {"cdn": ["site"]},
        {"site": {"acl": "private"}},
    )
    add(
        "serverless-api",
        "We want an API without managing servers.",
        {
            "api": "aws_api_gateway_rest_api.api",
            "fn": "aws_lambda_function.fn",
            "role": "aws_iam_role.role",
            "table": "aws_dynamodb_table.table",
        },
        {"api": ["fn"], "fn": ["role", "table"]},
        {
            "fn": {"runtime": "python3.12"},
            "table": {"billing_mode": "PAY_PER_REQUEST"},
        },
    )
    add(
        "scaling-web",
        "Traffic spikes are killing the site; make it scale.",
        {
            "main": "aws_vpc.main",
            "lb": "aws_lb.lb",
            "asg": "aws_autoscaling_group.asg",
            "web": "aws_subnet.web",
        },
        {"lb": ["main"], "asg": ["lb", "web"], "web": ["main"]},
        {"lb": {"load_balancer_type": "application"}, "asg": {"max_size": "8"}},
    )
    add(
        "queue-worker",
        "Decouple our background jobs from the web tier.",
        {
            "jobs": "aws_sqs_queue.jobs",
            "worker": "aws_lambda_function.worker",
            "alerts": "aws_sns_topic.alerts",
        },
        {"worker": ["jobs"], "alerts": ["worker"]},
        {"jobs": {"fifo_queue": "false"}, "worker": {"runtime": "nodejs20.x"}},
    )
    add(
        "cache-layer",
        "Reads are hammering the database; speed them up.",
        {
            "main": "aws_vpc.main",
            "cache": "aws_elasticache_cluster.cache",
            "db": "aws_db_instance.db",
            "app": "aws_subnet.app",
        },
        {"cache": ["app"], "db": ["app"], "app": ["main"]},
        {
            "cache": {"engine": "redis"},
            "db": {"engine": "mysql", "instance_class": "db.r5.large"},
        },
    )
    add(
        "container-platform",
        "We are moving to containers; set up the platform.",
        {
            "main": "aws_vpc.main",
            "cluster": "aws_ecs_cluster.cluster",
            "lb": "aws_lb.lb",
            "role": "aws_iam_role.role",
            "app": "aws_subnet.app",
        },
        {"cluster": ["app", "role"], "lb": ["main"], "app": ["main"]},
        {"lb": {"load_balancer_type": "network"}},
    )
    add(
        "secure-upload",
        "Customers need to upload files securely for processing.",
        {
            "uploads": "aws_s3_bucket.uploads",
            "fn": "aws_lambda_function.fn",
            "queue": "aws_sqs_queue.queue",
            "role": "aws_iam_role.role",
        },
        {"fn": ["uploads", "role"], "queue": ["fn"]},
        {
            "uploads": {"acl": "private"},
            "fn": {"runtime": "python3.12"},
            "queue": {"fifo_queue": "true"},
        },
    )
    return tasks


class SyntheticGateway:
    """Stochastic mock generator planted on a task's reference spec.

    Candidates are noisy perturbations of the reference; regeneration and
    final generation additionally enforce the answered predicates, mirroring
    an LLM conditioning on the interaction history.
    """

    def __init__(self, reference: Spec, rng: random.Random):
        self.reference = reference
        self.rng = rng
        self._extra_counter = 0
        self._question_space: list[tuple[Axis, tuple]] | None = None

    # -- spec perturbation -------------------------------------------------

    def _mutable(self, spec: Spec):
        return (
            dict(spec.resources),
            {k: list(v) for k, v in spec.topology.items()},
            {k: dict(v) for k, v in spec.attributes.items()},
        )

    def _freeze(self, resources, topology, attributes) -> Spec:
        topology = {
            k: [d for d in v if d in resources]
            for k, v in topology.items()
            if k in resources and v
        }
        topology = {k: v for k, v in topology.items() if v}
        attributes = {k: v for k, v in attributes.items() if k in resources and v}
        return Spec(resources, topology, attributes)

    def _fresh_label(self, resources, rtype: str) -> str:
        self._extra_counter += 1
        label = f"extra{self._extra_counter}"
        while label in resources:
            self._extra_counter += 1
            label = f"extra{self._extra_counter}"
        return label

    def _perturb(self, spec: Spec) -> Spec:
        rng = self.rng
        resources, topology, attributes = self._mutable(spec)
        n_ops = rng.choices([0, 1, 2, 3, 4], weights=[12, 28, 28, 20, 12])[0]
        for _ in range(n_ops):
            op = rng.choice(["drop", "add", "edge", "attr"])
            labels = sorted(resources)
            if op == "drop" and len(labels) > 1:
                victim = rng.choice(labels)
                del resources[victim]
            elif op == "add":
                rtype = rng.choice(sorted(VOCAB))
                label = self._fresh_label(resources, rtype)
                resources[label] = f"{rtype}.{label}"
                if labels and rng.random() < 0.5:
                    topology[label] = [rng.choice(labels)]
                opts = VOCAB[rtype]
                if opts and rng.random() < 0.5:
                    key = rng.choice(sorted(opts))
                    attributes[label] = {key: rng.choice(opts[key])}
            elif op == "edge" and len(labels) >= 2:
                src, dst = rng.sample(labels, 2)
                deps = topology.setdefault(src, [])
                if dst in deps:
                    deps.remove(dst)
                else:
                    deps.append(dst)
            elif op == "attr":
                typed = [
                    (l, VOCAB.get(extract_type(a), {}))
                    for l, a in sorted(resources.items())
                ]
                typed = [(l, o) for l, o in typed if o]
                if typed:
                    label, opts = rng.choice(typed)
                    key = rng.choice(sorted(opts))
                    attributes.setdefault(label, {})[key] = rng.choice(opts[key])
        return self._freeze(resources, topology, attributes)

    # -- history enforcement ----------------------------------------------

    def _labels_of_type(self, resources, rtype):
        return [l for l, a in sorted(resources.items()) if extract_type(a) == rtype]

    def _enforce(self, spec: Spec, history: list[QA]) -> Spec:
        resources, topology, attributes = self._mutable(spec)
        for qa in history:
            if qa.axis is None:
                continue
            want = qa.answer == "yes"
            if qa.axis is Axis.RESOURCE:
                (rtype,) = qa.subject
                have = self._labels_of_type(resources, rtype)
                if want and not have:
                    label = self._fresh_label(resources, rtype)
                    resources[label] = f"{rtype}.{label}"
                elif not want:
                    for label in have:
                        del resources[label]
            elif qa.axis is Axis.TOPOLOGY:
                src_t, dst_t = qa.subject
                if want:
                    srcs = self._labels_of_type(resources, src_t)
                    dsts = self._labels_of_type(resources, dst_t)
                    if not srcs:
                        label = self._fresh_label(resources, src_t)
                        resources[label] = f"{src_t}.{label}"
                        srcs = [label]
                    if not dsts:
                        label = self._fresh_label(resources, dst_t)
                        resources[label] = f"{dst_t}.{label}"
                        dsts = [label]
                    deps = topology.setdefault(srcs[0], [])
                    if dsts[0] not in deps:
                        deps.append(dsts[0])
                else:
                    for src, deps in list(topology.items()):
                        if src not in resources:
                            continue
                        if extract_type(resources[src]) != src_t:
                            continue
                        topology[src] = [
                            d for d in deps
                            if d not in resources
                            or extract_type(resources[d]) != dst_t
                        ]
            else:
                rtype, key, pivot = qa.subject
                have = self._labels_of_type(resources, rtype)
                if want:
                    if not have:
                        label = self._fresh_label(resources, rtype)
                        resources[label] = f"{rtype}.{label}"
                        have = [label]
                    attributes.setdefault(have[0], {})[key] = pivot
                else:
                    alternatives = [
                        v for v in VOCAB.get(rtype, {}).get(key, []) if v != pivot
                    ]
                    for label in have:
                        if attributes.get(label, {}).get(key) == pivot:
                            if alternatives:
                                attributes[label][key] = alternatives[0]
                            else:
                                del attributes[label][key]
        return self._freeze(resources, topology, attributes)

    # -- gateway interface -------------------------------------------------

    def generate_candidate_specs(self, intent, history, n, temperature=None):
        specs = []
        for _ in range(n):
            spec = self._perturb(self.reference)
            if history:
                spec = self._enforce(spec, history)
                if not spec_consistent_with_history(spec, history):
                    spec = self._enforce(spec, history)
            specs.append(spec)
        return specs

    def phrase_question(self, d) -> str:
        return template_question(d.axis, d.subject)

    def final_generation(self, intent, history) -> tuple[Spec, bool]:
        spec = self._perturb(self.reference)
        if history:
            spec = self._enforce(spec, history)
        return spec, False

    def _build_question_space(self):
        space: list[tuple[Axis, tuple]] = []
        for rtype in sorted(VOCAB):
            space.append((Axis.RESOURCE, (rtype,)))
        space.extend((Axis.TOPOLOGY, edge)
                     for edge in sorted(self.reference.typed_edges()))
        types = sorted(VOCAB)
        for i in range(0, len(types) - 1, 2):
            space.append((Axis.TOPOLOGY, (types[i], types[i + 1])))
        for rtype, opts in sorted(VOCAB.items()):
            for key, values in sorted(opts.items()):
                for value in values:
                    space.append((Axis.ATTRIBUTE, (rtype, key, value)))
        self.rng.shuffle(space)
        return space

    def direct_question(self, intent, history):
        """Uninformed question: a random predicate from a fixed space, never
        repeated within one run."""
        if self._question_space is None:
            self._question_space = self._build_question_space()
        asked = {(qa.axis, qa.subject) for qa in history}
        while self._question_space:
            axis, subject = self._question_space.pop()
            if (axis, subject) not in asked:
                return template_question(axis, subject), (axis, subject)
        return "Should the infrastructure stay as simple as possible?", (
            Axis.RESOURCE,
            ("aws_vpc",),
        )

    def sample_questions(self, intent, history, n):
        return [self.direct_question(intent, history) for _ in range(n)]

    def rank_questions(self, intent, questions) -> int:
        return self.rng.randrange(len(questions))


# --- experiment runner ----------------------------------------------------

METHODS = ("ours", "direct", "best-of-n", "self-consistency")


@dataclass
class HarnessConfig:
    provider: str = "mock"  # mock | http
    oracle: str = "rule"  # rule | llm
    pool_size: int = 8
    rr_enabled: bool = True
    min_entropy_bits: float = 0.25
    max_regens: int = 8
    n_questions: int = 5
    cluster_threshold: float = 0.85
    embedder: str = "fallback"
    ged_timeout: float = 30.0
    seed: int = 0
    concurrency: int = 4


def _make_gateway(task: Task, config: HarnessConfig, seed_tag: str):
    if config.provider == "mock":
        rng = random.Random(f"{config.seed}:{seed_tag}:{task.id}")
        return SyntheticGateway(task.reference_spec, rng)
    from .gateway import Gateway, HttpProvider, ProviderConfig

    return Gateway(HttpProvider(ProviderConfig.from_env()))


def _make_answerer(task: Task, config: HarnessConfig, gateway):
    if config.oracle == "rule":
        return RuleBasedOracle(task.reference_spec)
    return LlmProxyOracle(task.reference_spec, gateway)


def run_one(task: Task, method: str, k: int, config: HarnessConfig,
            embedder) -> RunResult:
    result = RunResult(task_id=task.id, method=method, budget_k=k)
    started = time.monotonic()
    try:
        gateway = _make_gateway(task, config, method)
        answerer = _make_answerer(task, config, gateway)
        if method == "ours":
            session_config = SessionConfig(
                budget_k=k,
                pool_size=config.pool_size,
                min_entropy_bits=config.min_entropy_bits,
                rr_enabled=config.rr_enabled,
                max_regens=config.max_regens,
            )
            final, session = run_session(
                task.ambiguous_prompt, answerer, session_config, gateway,
                task_id=task.id,
            )
            result.rounds_used = session.rounds_used
            result.regen_count = session.regen_count
            result.records = session.trace_json()
        elif method == "direct":
            final, history, trace = run_direct(
                task.ambiguous_prompt, answerer, k, gateway
            )
            result.rounds_used = len(history)
            result.records = [r.to_dict() for r in trace]
        elif method == "best-of-n":
            final, history, trace = run_best_of_n(
                task.ambiguous_prompt, answerer, k, config.n_questions, gateway
            )
            result.rounds_used = len(history)
            result.records = [r.to_dict() for r in trace]
        elif method == "self-consistency":
            final, history, trace = run_self_consistency(
                task.ambiguous_prompt, answerer, k, config.n_questions,
                gateway, embedder, config.cluster_threshold,
            )
            result.rounds_used = len(history)
            result.records = [r.to_dict() for r in trace]
        else:
            raise ValueError(f"unknown method {method!r}")
        report = score_pair(
            task.reference_spec, normalize_labels(final), embedder,
            timeout=config.ged_timeout,
        )
        result.structure_score = report.structure_score
        result.attribute_score = report.attribute_score
    except Exception as exc:  # per-task failures are recorded, not fatal
        result.error = f"{type(exc).__name__}: {exc}"
    result.wall_time = time.monotonic() - started
    return result


def run_experiment(
    tasks: list[Task], method: str, k: int, config: HarnessConfig
) -> list[RunResult]:
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    embedder = make_embedder(config.embedder)
    with ThreadPoolExecutor(max_workers=max(1, config.concurrency)) as pool:
        results = list(
            pool.map(lambda t: run_one(t, method, k, config, embedder), tasks)
        )
    return results


# --- aggregation ----------------------------------------------------------

def _pearson(xs, ys):
    if len(xs) < 2:
        return None
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if np.std(x) == 0.0 or np.std(y) == 0.0:
        return None
    return float(np.corrcoef(x, y)[0, 1])


def aggregate(results: list[RunResult], reference_method: str = "ours") -> dict:
    """Per-method means, deltas against a reference method, per-round
    dynamics, regeneration histogram, and regen/score correlation."""
    ok = [r for r in results if r.error is None]
    if not results:
        raise EmptyResults("no results to aggregate")

    groups: dict[tuple[str, int], list[RunResult]] = {}
    for r in ok:
        groups.setdefault((r.method, r.budget_k), []).append(r)

    methods = {}
    for (method, k), rs in sorted(groups.items()):
        methods[f"{method}@k{k}"] = {
            "method": method,
            "budget_k": k,
            "n_tasks": len(rs),
            "mean_structure": sum(r.structure_score for r in rs) / len(rs),
            "mean_attribute": sum(r.attribute_score for r in rs) / len(rs),
            "mean_rounds_used": sum(r.rounds_used for r in rs) / len(rs),
            "mean_regen_count": sum(r.regen_count for r in rs) / len(rs),
        }

    ref_rows = {
        k: row for k, row in methods.items() if row["method"] == reference_method
    }
    for row in methods.values():
        ref = next(
            (r for r in ref_rows.values() if r["budget_k"] == row["budget_k"]), None
        )
        if ref is not None:
            row["delta_structure_vs_reference"] = (
                row["mean_structure"] - ref["mean_structure"]
            )
            row["delta_attribute_vs_reference"] = (
                row["mean_attribute"] - ref["mean_attribute"]
            )

    per_round: dict[int, dict] = {}
    for r in ok:
        for rec in r.records:
            if rec.get("asked_axis") is None and not rec.get("regenerated"):
                continue
            slot = per_round.setdefault(
                rec["round"], {"pool": [], "res": [], "topo": [], "attr": []}
            )
            slot["pool"].append(rec["pool_size"])
            counts = rec.get("disagreement_counts", [0, 0, 0])
            slot["res"].append(counts[0])
            slot["topo"].append(counts[1])
            slot["attr"].append(counts[2])
    rounds = {
        str(rnd): {
            "mean_pool_size": sum(s["pool"]) / len(s["pool"]),
            "mean_resource_disagreements": sum(s["res"]) / len(s["res"]),
            "mean_topology_disagreements": sum(s["topo"]) / len(s["topo"]),
            "mean_attribute_disagreements": sum(s["attr"]) / len(s["attr"]),
        }
        for rnd, s in sorted(per_round.items())
    }

    regen_hist: dict[str, int] = {}
    for r in ok:
        key = str(r.regen_count)
        regen_hist[key] = regen_hist.get(key, 0) + 1

    correlation = {
        "structure": _pearson(
            [r.regen_count for r in ok], [r.structure_score for r in ok]
        ),
        "attribute": _pearson(
            [r.regen_count for r in ok], [r.attribute_score for r in ok]
        ),
    }

    return {
        "reference_method": reference_method,
        "methods": methods,
        "per_round": rounds,
        "regen_histogram": dict(sorted(regen_hist.items(), key=lambda t: int(t[0]))),
        "regen_score_correlation": correlation,
        "n_results": len(results),
        "n_failures": len(results) - len(ok),
    }


def write_outputs(results: list[RunResult], summary: dict, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "results.jsonl", "w") as fh:
        for r in results:
            fh.write(json.dumps(r.to_dict(), sort_keys=True) + "\n")
    with open(out / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(out / "rounds.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["round", "mean_pool_size", "mean_resource_disagreements",
             "mean_topology_disagreements", "mean_attribute_disagreements"]
        )
        for rnd, row in summary["per_round"].items():
            writer.writerow(
                [rnd, row["mean_pool_size"], row["mean_resource_disagreements"],
                 row["mean_topology_disagreements"],
                 row["mean_attribute_disagreements"]]
            )
    with open(out / "regen.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["regen_count", "n_tasks"])
        for count, n in summary["regen_histogram"].items():
            writer.writerow([count, n])


def summary_table(summary: dict) -> str:
    """Aligned text table of the per-method means."""
    header = f"{'method':<18} {'k':>3} {'struct%':>8} {'attr%':>8} {'rounds':>7} {'regens':>7}"
    lines = [header, "-" * len(header)]
    for row in summary["methods"].values():
        lines.append(
            f"{row['method']:<18} {row['budget_k']:>3} "
            f"{100 * row['mean_structure']:>8.2f} "
            f"{100 * row['mean_attribute']:>8.2f} "
            f"{row['mean_rounds_used']:>7.2f} {row['mean_regen_count']:>7.2f}"
        )
    return "\n".join(lines)
