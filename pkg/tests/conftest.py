import pytest

from mesc.coloring import to_set_cover
from mesc.core import SetSystem
from mesc.generators import paper_example_graph


@pytest.fixture(scope="session")
def paper_graph():
    return paper_example_graph()


@pytest.fixture(scope="session")
def paper_system(paper_graph):
    return to_set_cover(paper_graph)


@pytest.fixture
def two_sets():
    # A = {1,2,3}, B = {3,4}
    return SetSystem(4, [(1, 2, 3), (3, 4)])


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call_failed = rep.failed
    elif not hasattr(item, "rep_call_failed"):
        item.rep_call_failed = rep.failed


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = next((m for name, m in list(sys.modules.items()) if name.endswith("test_acceptance")), None)
    RESULTS = getattr(mod, "RESULTS", {})
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, detail = RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
