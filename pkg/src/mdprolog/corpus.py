"""Executable example corpus: programs plus expected-outcome case files.

Each case is a YAML file naming program files, a query, and expectations
(ordered solutions, output-sink lines, an expected error, or a hazard
marker for queries that may repeat solutions or blow an inference
budget).  Cases run on a fresh engine and double as documentation.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import yaml

from .engine import Engine
from .errors import BudgetExceeded, PrologThrow
from .render import render


@dataclass
class CorpusCase:
    name: str
    topic: str
    programs: list
    query: str
    setup: list = field(default_factory=list)
    budget: int = None
    max_solutions: int = None
    expect: dict = field(default_factory=dict)
    source: str = None


@dataclass
class CaseResult:
    case: CorpusCase
    passed: bool
    details: str = ""


def _packaged_root():
    return resources.files("mdprolog").joinpath("corpus")


def load_case(path):
    data = yaml.safe_load(Path(path).read_text())
    return CorpusCase(
        name=data["name"],
        topic=data.get("topic", ""),
        programs=data.get("programs", []),
        query=data["query"],
        setup=data.get("setup", []),
        budget=data.get("budget"),
        max_solutions=data.get("max_solutions"),
        expect=data.get("expect", {}),
        source=str(path),
    )


def load_cases(directory=None):
    """Cases from a directory, or the packaged set, sorted by file name."""
    if directory is None:
        root = _packaged_root().joinpath("cases")
        paths = sorted(root.iterdir(), key=lambda p: p.name)
    else:
        paths = sorted(Path(directory).glob("*.yaml"))
    return [load_case(p) for p in paths if p.name.endswith(".yaml")]


def _program_text(name, directory=None):
    if directory is not None:
        local = Path(directory) / name
        if local.exists():
            return local.read_text()
    return _packaged_root().joinpath("programs").joinpath(name).read_text()


def _solution_line(sol):
    return sol.text().replace("\n", " ")


def run_case(case, programs_dir=None):
    engine = Engine(budget=case.budget)
    sink = io.StringIO()
    engine.out = sink
    try:
        for name in case.programs:
            engine.consult_text(_program_text(name, programs_dir), name)
        for goal in case.setup:
            if not engine.query(goal, max_solutions=1):
                return CaseResult(case, False, "setup goal failed: %s" % goal)
        expect = case.expect

        if expect.get("hazard"):
            try:
                sols = engine.query(case.query,
                                    max_solutions=case.max_solutions)
            except BudgetExceeded:
                return CaseResult(case, True, "budget exhausted")
            lines = [_solution_line(s) for s in sols]
            if len(set(lines)) < len(lines):
                return CaseResult(case, True,
                                  "duplicate solutions: %s" % lines)
            return CaseResult(
                case, False, "no duplicates and budget survived: %s" % lines)

        if "error" in expect:
            try:
                engine.query(case.query, max_solutions=case.max_solutions)
            except PrologThrow as exc:
                text = render(exc.ball, None, engine.kb.optable, quoted=False)
                if expect["error"] in text:
                    return CaseResult(case, True)
                return CaseResult(case, False, "wrong error: %s" % text)
            return CaseResult(case, False, "expected an error, got none")

        sols = engine.query(case.query, max_solutions=case.max_solutions)
        lines = [_solution_line(s) for s in sols]
        if "solutions" in expect and lines != expect["solutions"]:
            return CaseResult(
                case, False,
                "solutions %r != expected %r" % (lines, expect["solutions"]))
        if "output" in expect:
            got = sink.getvalue().splitlines()
            if got != expect["output"]:
                return CaseResult(
                    case, False,
                    "output %r != expected %r" % (got, expect["output"]))
        return CaseResult(case, True)
    except BudgetExceeded as exc:
        return CaseResult(case, False, "budget exhausted: %s" % exc)
    except PrologThrow as exc:
        text = render(exc.ball, None, engine.kb.optable, quoted=False)
        return CaseResult(case, False, "uncaught error: %s" % text)


def run_all(directory=None, report=None):
    """Run every case; returns (passed_count, results)."""
    cases = load_cases(directory)
    results = [run_case(c, programs_dir=directory) for c in cases]
    if report is not None:
        for r in results:
            status = "ok" if r.passed else "FAIL"
            line = "%-4s %s" % (status, r.case.name)
            if not r.passed and r.details:
                line += "  (%s)" % r.details
            report.write(line + "\n")
        report.write("%d/%d cases passed\n"
                     % (sum(r.passed for r in results), len(results)))
    return sum(r.passed for r in results), results
