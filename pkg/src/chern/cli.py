"""Command-line entry point ``chern``."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .errors import ChernError
from .jobs import Job, corpus_run, load_job, run_job
from .parser import format_polynomial, parse_polynomial
from .poly import FieldSpec, PolyRing
from .theorems import CHECKS


def _fail(ex: ChernError):
    click.echo(f"error [{ex.code}]: {ex}", err=True)
    sys.exit(ex.exit_code)


def _summary_line(report) -> str:
    d = report.data
    status = d["status"]
    if status["outcome"] == "error":
        return f"{d['job'].get('name', '?')}: error {status['error']['code']}: {status['error']['message']}"
    h = d["hilbert"]["M"]
    parts = [f"{d['job']['name']}: d={h['d']} h={h['h']} e={h['e']}"]
    if "v" in d:
        parts.append(f"v={d['v']}")
    parts.append(status["outcome"])
    return " ".join(parts)


@click.group()
@click.version_option(package_name="artifact", prog_name="chern")
def main():
    """Exact Hilbert coefficients of good filtrations, with theorem checks."""


@main.command()
@click.argument("job_path", type=click.Path(dir_okay=False))
@click.option("--json", "json_out", type=click.Path(dir_okay=False), help="Write the report here.")
@click.option("--seed", type=int, help="Seed for the superficial-element search.")
@click.option("--max-index", type=click.IntRange(min=1), help="Largest filtration index computed.")
@click.option("--window", type=click.IntRange(min=1), help="Certification window (all windows).")
@click.option("--checks", help="Comma-separated check ids (default: all).")
def analyze(job_path, json_out, seed, max_index, window, checks):
    """Analyze one job file and print a summary table."""
    try:
        job: Job = load_job(job_path)
    except ChernError as ex:
        _fail(ex)
    if seed is not None:
        job.seed = seed
    if max_index is not None:
        job.max_index = max_index
    if window is not None:
        job.windows = {k: window for k in job.windows}
    if checks:
        ids = [c.strip() for c in checks.split(",") if c.strip()]
        unknown = [c for c in ids if c not in CHECKS]
        if unknown:
            click.echo(f"error [E_CHECKS]: unknown check id(s): {', '.join(unknown)}", err=True)
            sys.exit(2)
        job.checks = ids
    report = run_job(job)
    if json_out:
        Path(json_out).write_text(report.to_json())
    click.echo(_summary_line(report))
    for t in report.data.get("theorems", []):
        click.echo(f"  {t['id']:<24} {t['verdict']}")
    if report.data["status"]["outcome"] == "error":
        err = report.data["status"]["error"]
        click.echo(f"error [{err['code']}]: {err['message']}", err=True)
    sys.exit(report.exit_code)


@main.command()
@click.argument("directory", type=click.Path(file_okay=False))
@click.option("--jobs", "n_jobs", type=click.IntRange(min=1), default=1, show_default=True,
              help="Worker processes.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Write reports here.")
@click.option("--update-snapshots", is_flag=True, help="Rewrite <name>.expected.json files.")
@click.option("--json", "json_out", type=click.Path(dir_okay=False), help="Write the summary here.")
def corpus(directory, n_jobs, out_dir, update_snapshots, json_out):
    """Run every job file in DIRECTORY and compare against snapshots."""
    try:
        summary = corpus_run(directory, n_jobs, out_dir, update_snapshots)
    except ChernError as ex:
        _fail(ex)
    for w in summary.warnings:
        click.echo(f"warning: {w}", err=True)
    for r in summary.results:
        click.echo(f"{r['job']:<32} exit={r['exit_code']} snapshot={r['snapshot']:<7} "
                   f"{'ok' if r['ok'] else 'FAIL'}")
    click.echo(f"{len(summary.results)} jobs, {'all passed' if summary.passed else 'FAILURES'} "
               f"({summary.elapsed:.1f}s)")
    if json_out:
        Path(json_out).write_text(json.dumps(summary.as_dict(), indent=2) + "\n")
    sys.exit(0 if summary.passed else 4)


@main.command()
@click.argument("expr")
@click.option("--job", "job_path", required=True, type=click.Path(dir_okay=False),
              help="Job file supplying the variables and field.")
def parse(expr, job_path):
    """Parse EXPR in the ring of a job and print its canonical form."""
    try:
        job = load_job(job_path)
        ring = PolyRing(tuple(job.variables), FieldSpec(job.field))
        f = parse_polynomial(expr, ring)
    except ChernError as ex:
        _fail(ex)
    click.echo(format_polynomial(f))


if __name__ == "__main__":
    main()
