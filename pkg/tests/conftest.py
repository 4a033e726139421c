from pathlib import Path

import pytest

from oruga import CORPUS_DIR
from oruga.dsl import load_files, parse_document

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

CORE_FILES = [CORPUS_DIR / n for n in ("arith.oruga", "dots.oruga", "plusjoin.oruga")]
FLAGSHIP_FILES = CORE_FILES + [CORPUS_DIR / "numerals.oruga"]
GAUSS_FILES = [CORPUS_DIR / "dots.oruga", CORPUS_DIR / "gauss.oruga"]
ALL_FILES = CORE_FILES + [CORPUS_DIR / "pattern.oruga", CORPUS_DIR / "numerals.oruga"]


@pytest.fixture(scope="session")
def core_doc():
    return load_files(CORE_FILES)


@pytest.fixture(scope="session")
def corpus_doc():
    return load_files(ALL_FILES)


@pytest.fixture(scope="session")
def gauss_doc():
    return load_files(GAUSS_FILES)


@pytest.fixture(scope="session")
def arith(corpus_doc):
    return corpus_doc.space("arith")


@pytest.fixture(scope="session")
def dots(corpus_doc):
    return corpus_doc.space("dotDiagrams")


@pytest.fixture(scope="session")
def con(corpus_doc):
    return corpus_doc.construction("con").construction


def doc_from(*texts):
    return parse_document("\n".join(texts))


_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[n] = (title, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, verdict = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {verdict}  {title}")
