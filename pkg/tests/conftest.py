import pytest

from ethplan.fileformat import bundled_path, load_bundled
from ethplan.ltlf import parse_formula


@pytest.fixture(scope="session")
def hospital():
    return load_bundled("hospital.epd")


@pytest.fixture(scope="session")
def hospital_path():
    return str(bundled_path("hospital.epd"))


@pytest.fixture(scope="session")
def theory(hospital):
    return hospital.theory()


@pytest.fixture(scope="session")
def hv():
    """The hospital values and desires by name."""
    return {
        "no_danger": parse_formula("G !dangerous"),
        "no_annoy": parse_formula("G !annoyed"),
        "reach": parse_formula("F destination"),
        "reach_fast": parse_formula("F (destination & !waited)"),
    }


@pytest.fixture(scope="session")
def omega1(hv):
    return frozenset({hv["no_danger"], hv["no_annoy"], hv["reach"]})


@pytest.fixture(scope="session")
def omega2(hv):
    return frozenset({hv["no_danger"], hv["reach"], hv["reach_fast"]})


PI1 = ("ask", "move")
PI2 = ("horn", "move")


# Acceptance results, printed in the terminal summary (one line each).
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def record(request):
    """Yields a dict for notes; stores a pass/fail line for the criterion."""
    number = request.node.get_closest_marker("criterion").args[0]
    notes = {}
    yield notes
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    detail = notes.get("detail", "")
    ACCEPTANCE_LINES[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
    print("\n" + ACCEPTANCE_LINES[number])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
