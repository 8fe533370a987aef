import pytest

from tacs.generate import GenConfig
from tacs.suites import SUITE_NAMES, UnknownSuite, run_suite


@pytest.mark.parametrize("name", SUITE_NAMES)
def test_suite_passes(name):
    report = run_suite(name, GenConfig(seed=7, count=60))
    assert report.passed, [v.to_obj() for v in report.violations[:3]]
    assert report.cases == 60 and report.checks > 0


def test_suite_reports_are_reproducible():
    a = run_suite("coincidence-strong", GenConfig(seed=3, count=30)).to_obj()
    b = run_suite("coincidence-strong", GenConfig(seed=3, count=30)).to_obj()
    a.pop("wall_time"), b.pop("wall_time")
    assert a == b


def test_skipped_pairs_are_counted():
    report = run_suite("coincidence-naive", GenConfig(seed=7, count=40, size_budget=20), limit=5)
    assert report.skipped > 0 and report.passed


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("nope")


def test_injected_faults_are_caught(monkeypatch):
    import tacs.suites as suites
    from tacs.semantics import TYPE2, clock_successors

    def idle(t, sem):
        # spurious type-2 self-loop on every process that can tick
        out = clock_successors(t, sem)
        return out | {t} if sem == TYPE2 and out else out

    monkeypatch.setattr(suites, "clock_successors", idle)
    assert "coherence" in {v.property for v in run_suite("coherence", GenConfig(seed=7, count=60)).violations}
    monkeypatch.undo()

    monkeypatch.setattr(suites, "urgent_set", lambda t: frozenset())
    report = run_suite("sos-laws", GenConfig(seed=7, count=60))
    assert {v.property for v in report.violations} >= {"maximal-progress-1", "maximal-progress-2"}
