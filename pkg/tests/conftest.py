from pathlib import Path

import pytest

from cowordmap.wos_ingest import Corpus, Record

FIXTURES = Path(__file__).parent / "fixtures"

# Keyword sets of the six-document mini corpus used throughout the suite.
M6_DOCS = [
    ["ai", "journalism"],
    ["ai", "journalism", "ethics"],
    ["ai", "ethics"],
    ["chatgpt", "generative ai"],
    ["chatgpt", "generative ai", "ai"],
    ["journalism", "ethics"],
]
M6_YEARS = [2022, 2022, 2023, 2023, 2024, 2024]


def corpus_from_keywords(docs, years=None) -> Corpus:
    years = years or [None] * len(docs)
    return Corpus(
        tuple(
            Record(title=f"D{i}", author_keywords=tuple(kws), pub_year=y, accession_id=f"WOS:{i}")
            for i, (kws, y) in enumerate(zip(docs, years), start=1)
        )
    )


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture
def m6() -> Corpus:
    return corpus_from_keywords(M6_DOCS, M6_YEARS)


# -- acceptance summary -------------------------------------------------------

_acceptance: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(name): exit criterion reported in the summary")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            item.user_properties.append(("acceptance", mark.args[0]))


def pytest_runtest_logreport(report):
    name = dict(report.user_properties).get("acceptance")
    if name is None:
        return
    if report.failed:
        _acceptance[name] = "FAIL"
    elif report.when == "call" and _acceptance.get(name) != "FAIL":
        _acceptance[name] = "PASS"


def pytest_terminal_summary(terminalreporter):
    if _acceptance:
        terminalreporter.section("acceptance criteria")
        for name, outcome in _acceptance.items():
            terminalreporter.write_line(f"{outcome}  {name}")
