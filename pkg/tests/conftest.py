import pytest

from menon.ideals import make_field, parse_field

FIELD_NAMES = ["Q", "Q(sqrt -1)", "Q(sqrt -3)", "Q(sqrt -5)", "Q(sqrt 2)", "Q(sqrt 5)"]


@pytest.fixture
def QQ():
    return make_field("rational")


@pytest.fixture
def Qi():
    return parse_field("Q(sqrt -1)")


@pytest.fixture(params=FIELD_NAMES)
def any_field(request):
    return parse_field(request.param)


ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    store = request.config.stash.setdefault(ACCEPTANCE_KEY, {})

    def record(number: int, title: str, ok: bool, detail: str) -> None:
        store[number] = (title, ok, detail)
        print(f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(ACCEPTANCE_KEY, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria (exact, tolerance 0)")
    for number in sorted(store):
        title, ok, detail = store[number]
        terminalreporter.write_line(f"{number}. {'PASS' if ok else 'FAIL'}  {title} -- {detail}")
