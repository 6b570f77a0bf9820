"""Suite runner: every (claim, instance) pair of a suite, merged into one ledger.

Entries are computed independently, possibly in worker processes, and merged
by ``(claim, instance)`` so the ledger bytes never depend on scheduling.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from ..errors import GradextError
from .claims import BUDGET, CLAIMS, SANITY, ClaimParams, ClaimVerdict, registry_coverage, run_claim
from .documents import dumps

LEDGER_FORMAT = "gradext-ledger/1"

EXIT_OK, EXIT_VIOLATED, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3


class UnknownSuite(GradextError):
    pass


def suites() -> dict[str, list[tuple[str, str]]]:
    paper = [(c.id, f) for c in CLAIMS.values() for f in c.fixtures]
    sanity = [(c.id, f) for c in SANITY.values() for f in c.fixtures]
    return {"paper-claims": paper, "finite-type-sanity": sanity, "all": paper + sanity}


def suite_jobs(name: str) -> list[tuple[str, str]]:
    table = suites()
    if name not in table:
        raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(sorted(table))}")
    return sorted(set(table[name]))


def _run(job: tuple[str, str, ClaimParams]) -> ClaimVerdict:
    return run_claim(*job)


def run_entries(name: str, params: ClaimParams | None = None, jobs: int = 1) -> list[ClaimVerdict]:
    params = params or ClaimParams()
    issues = registry_coverage()
    if issues:
        raise GradextError("registry self-test failed: " + "; ".join(issues))
    work = [(c, i, params) for c, i in suite_jobs(name)]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run, work))
    else:
        results = [_run(w) for w in work]
    return sorted(results, key=lambda v: (v.claim, v.instance))


def summarize(entries: list[ClaimVerdict]) -> dict:
    counts: dict[str, int] = {}
    for e in entries:
        counts[e.verdict] = counts.get(e.verdict, 0) + 1
    return {"entries": len(entries), "verdicts": dict(sorted(counts.items())),
            "budget_exceeded": sum(e.reason == BUDGET for e in entries)}


def exit_code(entries: list[ClaimVerdict]) -> int:
    # an incomplete ledger outranks a refutation
    if any(e.reason == BUDGET for e in entries):
        return EXIT_BUDGET
    if any(e.verdict == "violated" for e in entries):
        return EXIT_VIOLATED
    return EXIT_OK


def ledger(name: str, params: ClaimParams, entries: list[ClaimVerdict]) -> dict:
    return {"format": LEDGER_FORMAT, "suite": name, "params": params.to_json(),
            "summary": summarize(entries), "entries": [e.to_json() for e in entries]}


def run_suite(name: str, output: str | Path | None = None, params: ClaimParams | None = None,
              jobs: int = 1, runtimes: str | Path | None = None) -> tuple[int, dict]:
    """Run a suite; write the canonical ledger (and optionally a runtime sidecar)."""
    params = params or ClaimParams()
    entries = run_entries(name, params, jobs)
    doc = ledger(name, params, entries)
    if output is not None:
        Path(output).write_text(dumps(doc), encoding="utf-8")
    if runtimes is not None:
        side = {f"{e.claim}/{e.instance}": round(e.runtime, 3) for e in entries}
        Path(runtimes).write_text(json.dumps(side, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return exit_code(entries), doc
