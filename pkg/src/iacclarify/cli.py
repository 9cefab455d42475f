"""Command-line entry points: eval, run, serve, gen-tasks."""
from __future__ import annotations

import json
import sys

import click

from .metrics import make_embedder, score_pair
from .spec_model import normalize_labels, parse_spec


@click.group()
def main():
    """Disagreement-driven interactive IaC clarification."""


@main.command("eval")
@click.option("--ref", "ref_path", required=True, type=click.Path(exists=True))
@click.option("--gen", "gen_path", required=True, type=click.Path(exists=True))
@click.option("--timeout-secs", default=30.0, show_default=True)
@click.option("--embedder", default="fallback", show_default=True,
              type=click.Choice(["external", "fallback"]))
def eval_cmd(ref_path, gen_path, timeout_secs, embedder):
    """Score a generated spec against a reference; ScoreReport JSON on stdout."""
    with open(ref_path) as fh:
        ref = normalize_labels(parse_spec(fh.read()))
    with open(gen_path) as fh:
        gen = normalize_labels(parse_spec(fh.read()))
    report = score_pair(ref, gen, make_embedder(embedder), timeout=timeout_secs)
    json.dump(report.to_dict(), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


@main.command("run")
@click.option("--tasks", "tasks_path", required=True, type=click.Path(exists=True))
@click.option("--method", required=True,
              type=click.Choice(["ours", "direct", "best-of-n", "self-consistency"]))
@click.option("--budget", "budget_k", default=5, show_default=True)
@click.option("--pool-size", default=8, show_default=True)
@click.option("--provider", default="mock", show_default=True,
              type=click.Choice(["mock", "http"]))
@click.option("--oracle", default="rule", show_default=True,
              type=click.Choice(["rule", "llm"]))
@click.option("--rr", default="on", show_default=True, type=click.Choice(["on", "off"]))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--embedder", default="fallback", show_default=True,
              type=click.Choice(["external", "fallback"]))
@click.option("--out", "out_dir", required=True, type=click.Path())
def run_cmd(tasks_path, method, budget_k, pool_size, provider, oracle, rr, seed,
            embedder, out_dir):
    """Run one method over a task file and write results + summary."""
    from .harness import (
        HarnessConfig,
        aggregate,
        load_tasks,
        run_experiment,
        summary_table,
        write_outputs,
    )

    tasks = load_tasks(tasks_path)
    config = HarnessConfig(
        provider=provider,
        oracle=oracle,
        pool_size=pool_size,
        rr_enabled=(rr == "on"),
        seed=seed,
        embedder=embedder,
    )
    results = run_experiment(tasks, method, budget_k, config)
    summary = aggregate(results, reference_method=method)
    write_outputs(results, summary, out_dir)
    click.echo(summary_table(summary))


@main.command("serve")
@click.option("--port", default=8787, show_default=True, type=int)
@click.option("--provider", default="mock", show_default=True,
              type=click.Choice(["mock", "http"]))
@click.option("--oracle-mode", default="off", show_default=True,
              type=click.Choice(["off", "rule"]))
@click.option("--host", default="127.0.0.1", show_default=True)
def serve_cmd(port, provider, oracle_mode, host):
    """Start the local clarification service for the web UI."""
    import uvicorn

    from .service import create_app, demo_gateway_factory

    if provider == "mock":
        gateway_factory = demo_gateway_factory
    else:
        from .gateway import Gateway, HttpProvider, ProviderConfig

        def gateway_factory(intent, seed):
            return Gateway(HttpProvider(ProviderConfig.from_env()))

    auto_answerer_factory = None
    if oracle_mode == "rule":
        from .harness import synthetic_tasks
        from .oracle import RuleBasedOracle

        def auto_answerer_factory(body):
            tasks = synthetic_tasks()
            idx = sum(str(body.get("intent", "")).encode("utf-8")) % len(tasks)
            return RuleBasedOracle(tasks[idx].reference_spec)

    app = create_app(gateway_factory, auto_answerer_factory=auto_answerer_factory)
    uvicorn.run(app, host=host, port=port)


@main.command("gen-tasks")
@click.option("--out", "out_path", required=True, type=click.Path())
def gen_tasks_cmd(out_path):
    """Write the shipped 10-task synthetic planted-target suite as JSONL."""
    from .harness import save_tasks, synthetic_tasks

    tasks = synthetic_tasks()
    save_tasks(tasks, out_path)
    click.echo(f"wrote {len(tasks)} tasks to {out_path}")


if __name__ == "__main__":
    main()
