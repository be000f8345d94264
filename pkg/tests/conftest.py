import time
from pathlib import Path

import pytest

from kitemorph import io
from kitemorph.pipeline import morph

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"


def corpus_names():
    return sorted(p.name[:-7] for p in CORPUS.glob("*_a.json"))


@pytest.fixture(scope="session")
def corpus_pairs():
    return {name: (io.read_drawing(CORPUS / f"{name}_a.json"), io.read_drawing(CORPUS / f"{name}_b.json"))
            for name in corpus_names()}


@pytest.fixture(scope="session")
def corpus_morphs(corpus_pairs):
    """In-process morphs, with their construction trace."""
    out = {}
    for name, (a, b) in corpus_pairs.items():
        out[name] = morph(a, b)
    return out


# --- one summary line per acceptance criterion -------------------------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    num, title = mark.args
    ok, _, seconds = _criteria.get(num, (True, title, 0.0))
    seconds += rep.duration
    if rep.when == "setup" and not rep.passed:
        ok = False
    if rep.when == "call":
        ok = ok and rep.passed
    _criteria[num] = (ok, title, seconds)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        ok, title, seconds = _criteria[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {title}  ({seconds:.1f}s)")


@pytest.fixture
def stopwatch():
    start = time.perf_counter()
    yield lambda: time.perf_counter() - start
