import time

import pytest


def pytest_runtest_logreport(report):
    """One pass/fail line per acceptance criterion."""
    if report.when != "call":
        return
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    outcome = "PASS" if report.passed else "FAIL"
    print(f"\nACCEPTANCE {name}: {outcome}")


@pytest.fixture(scope="session")
def timed_oracle_cache():
    """Shared oracle verdicts keyed by corpus name, with total time spent."""
    from medianforge import medianness_oracle

    cache = {}
    state = {"elapsed": 0.0}

    def run(name, graph):
        if name not in cache:
            t0 = time.monotonic()
            cache[name] = medianness_oracle(graph)
            state["elapsed"] += time.monotonic() - t0
        return cache[name]

    run.elapsed = lambda: state["elapsed"]
    return run
