import io

from mdprolog.corpus import load_cases, run_all, run_case


class TestCorpusSuite:
    def test_every_case_passes(self):
        report = io.StringIO()
        passed, results = run_all(report=report)
        failures = [r for r in results if not r.passed]
        assert not failures, "\n".join(
            "%s: %s" % (r.case.name, r.details) for r in failures)
        assert passed == len(results) == len(load_cases())
        assert "%d/%d cases passed" % (passed, passed) in report.getvalue()

    def test_runs_are_deterministic(self):
        for case in load_cases():
            first = run_case(case)
            second = run_case(case)
            assert (first.passed, first.details) == (second.passed, second.details), \
                case.name

    def test_cases_cover_the_feature_areas(self):
        topics = {case.topic for case in load_cases()}
        for topic in ("graph search", "memoization", "objects", "debugging"):
            assert topic in topics, "no corpus case covers %r" % topic
