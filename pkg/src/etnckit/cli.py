"""Batch driver: run the jobs of a JSON verification file and write one report per job."""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .suites import CHECKS, DEFAULT_BUDGET, CheckResult, run_check

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class Job:
    check: str
    params: dict
    seed: int
    budget_terms: int
    budget_ms: float | None


def _env_budget() -> int:
    raw = os.environ.get("ETNCKIT_BUDGET_TERMS")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(float(raw))
    except ValueError as exc:
        raise SpecError(f"ETNCKIT_BUDGET_TERMS is not a number: {raw!r}") from exc


def parse_spec(text: str, seed_override: int | None = None) -> list[Job]:
    """Jobs from a JSON document; whitespace-only input means no jobs."""
    if not text.strip():
        return []
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if isinstance(doc, list):
        raw_jobs = doc
    elif isinstance(doc, dict):
        raw_jobs = doc.get("jobs", [])
    else:
        raise SpecError("top level must be an object with a 'jobs' list or a list of jobs")
    if not isinstance(raw_jobs, list):
        raise SpecError("'jobs' must be a list")
    default_terms = _env_budget()
    jobs = []
    for i, raw in enumerate(raw_jobs):
        if not isinstance(raw, dict) or "check" not in raw:
            raise SpecError(f"job {i}: expected an object with a 'check' field")
        name = raw["check"]
        if name not in CHECKS:
            raise SpecError(f"job {i}: unknown check {name!r}")
        params = raw.get("params", {})
        if not isinstance(params, dict):
            raise SpecError(f"job {i}: 'params' must be an object")
        budget = raw.get("budget", {}) or {}
        if not isinstance(budget, dict):
            raise SpecError(f"job {i}: 'budget' must be an object")
        seed = raw.get("seed", 0)
        if seed_override is not None:
            seed = seed_override
        if not isinstance(seed, int):
            raise SpecError(f"job {i}: 'seed' must be an integer")
        terms = int(budget.get("terms", default_terms))
        ms = budget.get("ms")
        jobs.append(Job(name, params, seed, terms, float(ms) if ms is not None else None))
    return jobs


def execute(job: Job) -> CheckResult:
    start = time.perf_counter()
    result = run_check(job.check, job.params, job.seed, job.budget_terms)
    elapsed_ms = (time.perf_counter() - start) * 1000
    if job.budget_ms is not None and elapsed_ms > job.budget_ms and result.status != "fail":
        return CheckResult(job.check, job.seed, "skipped: budget",
                           {"reason": f"time budget of {job.budget_ms:g} ms exceeded"})
    return result


def report_names(results: list[CheckResult]) -> list[str]:
    """<check>-<seed>, with a numeric suffix when the same pair repeats."""
    seen: dict[str, int] = {}
    names = []
    for r in results:
        stem = f"{r.check}-{r.seed}"
        k = seen.get(stem, 0)
        seen[stem] = k + 1
        names.append(stem if k == 0 else f"{stem}-{k}")
    return names


def _flatten(prefix: str, value, rows: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], rows)
    elif isinstance(value, list):
        for i, item in enumerate(value):
            _flatten(f"{prefix}[{i}]", item, rows)
    else:
        rows.append((prefix, value if isinstance(value, str) else json.dumps(value)))


def emit_report(results: list[CheckResult], out_dir: Path, fmt: str = "json") -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, result in zip(report_names(results), results):
        if fmt == "json":
            path = out_dir / f"{name}.json"
            path.write_text(json.dumps(result.to_json(), indent=2, sort_keys=True) + "\n")
        else:
            path = out_dir / f"{name}.csv"
            rows: list[tuple[str, str]] = []
            _flatten("", result.to_json(), rows)
            with path.open("w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["field", "value"])
                writer.writerows(rows)
        paths.append(path)
    return paths


def summary_table(results: list[CheckResult]) -> str:
    header = ("check", "seed", "status")
    rows = [header] + [(r.check, str(r.seed), r.status) for r in results]
    widths = [max(len(row[i]) for row in rows) for i in range(3)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    passed = sum(r.passed for r in results)
    skipped = sum(r.status.startswith("skipped") for r in results)
    lines.append(f"{passed} passed, {len(results) - passed - skipped} failed, {skipped} skipped")
    return "\n".join(lines)


def exit_code(results: list[CheckResult], strict: bool) -> int:
    for r in results:
        if r.status == "fail" or (strict and r.status != "pass"):
            return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="etnckit", description=__doc__)
    parser.add_argument("--spec", type=Path, help="JSON verification file")
    parser.add_argument("--out", type=Path, default=Path("reports"), help="report directory")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes")
    parser.add_argument("--strict", action="store_true", help="treat budget skips as failures")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--list-checks", action="store_true", help="print check names and exit")
    parser.add_argument("--seed-override", type=int, default=None)
    return parser


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.list_checks:
        print("\n".join(CHECKS))
        return EXIT_OK
    if args.spec is None:
        print("error: --spec is required unless --list-checks is given", file=sys.stderr)
        return EXIT_PARSE
    try:
        text = args.spec.read_text()
    except OSError as exc:
        print(f"error: cannot read {args.spec}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        jobs = parse_spec(text, args.seed_override)
    except SpecError as exc:
        print(f"error: {args.spec}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(execute, jobs))
    else:
        results = [execute(job) for job in jobs]
    emit_report(results, args.out, args.format)
    print(summary_table(results))
    return exit_code(results, args.strict)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
