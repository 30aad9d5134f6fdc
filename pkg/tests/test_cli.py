import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "mdprolog.cli"]

GRAPH = """
edge(a, b). edge(b, c).
[] # path(A, B) :- edge(A, B).
[] # path(A, C) :- edge(A, B), ? path(B, C).
"""


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "graph.mdp"
    path.write_text(GRAPH)
    return str(path)


def run_cli(*args, stdin=""):
    return subprocess.run(CLI + list(args), input=stdin,
                          capture_output=True, text=True, timeout=60)


class TestGoalMode:
    def test_solutions_are_printed_and_exit_zero(self, graph_file):
        proc = run_cli(graph_file, "-g", "? path(a, X)")
        assert proc.returncode == 0
        assert proc.stdout == "X = b ;\nX = c.\n"

    def test_failure_exits_one(self, graph_file):
        proc = run_cli(graph_file, "-g", "? path(c, X)")
        assert proc.returncode == 1

    def test_errors_exit_two(self, graph_file):
        proc = run_cli(graph_file, "-g", "? nothing(1)")
        assert proc.returncode == 2
        assert "existence_error" in proc.stderr

    def test_missing_file_exits_two(self):
        proc = run_cli("/no/such/file.mdp", "-g", "true")
        assert proc.returncode == 2
        assert proc.stderr.strip()

    def test_syntax_error_in_file_exits_two(self, tmp_path):
        bad = tmp_path / "bad.mdp"
        bad.write_text("p(a.\n")
        proc = run_cli(str(bad), "-g", "true")
        assert proc.returncode == 2


class TestRepl:
    def test_session_transcript(self, graph_file):
        proc = run_cli(graph_file, stdin="?- ? path(a, X).\n;\nhalt.\n")
        assert proc.returncode == 0
        assert "X = b" in proc.stdout and "X = c" in proc.stdout

    def test_no_solution_prints_false(self, graph_file):
        proc = run_cli(graph_file, stdin="?- edge(z, _).\nhalt.\n")
        assert "false." in proc.stdout

    def test_survives_a_syntax_error(self, graph_file):
        proc = run_cli(graph_file, stdin="?- p(.\n?- edge(a, X).\nhalt.\n")
        assert proc.returncode == 0
        assert "X = b" in proc.stdout


class TestFlags:
    def test_trace_dispatch_logs_to_stderr(self, graph_file):
        proc = run_cli("--trace-dispatch", graph_file, "-g", "? path(a, b)")
        assert proc.returncode == 0
        assert "path" in proc.stderr

    def test_dump_expansion_shows_generated_clauses(self, graph_file):
        proc = run_cli("--dump-expansion", graph_file, "-g", "true")
        assert "$impl$path/2" in proc.stdout
        assert "$dispatch" in proc.stdout

    def test_no_prelude_drops_the_object_protocol(self):
        proc = run_cli("--no-prelude", "-g", "new_oid(O), O ! write(a, 1)")
        assert proc.returncode == 2

    def test_budget_limits_runaway_queries(self, tmp_path):
        loop = tmp_path / "loop.mdp"
        loop.write_text("loop :- loop.\n")
        proc = run_cli("--budget", "1000", str(loop), "-g", "loop")
        assert proc.returncode == 2
        assert "budget" in proc.stderr.lower()


class TestTestSubcommand:
    def test_packaged_corpus_passes(self):
        proc = run_cli("test")
        assert proc.returncode == 0
        assert "cases passed" in proc.stdout

    def test_missing_directory_fails(self):
        proc = run_cli("test", "/no/such/corpus")
        assert proc.returncode != 0
