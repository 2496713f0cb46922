import pytest
from hypothesis import settings

from autotext.dataio import load_dataset
from autotext.synthetic import noisy_corpus

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def small_corpus():
    return noisy_corpus(30, 0.2, seed=5)


@pytest.fixture(scope="session")
def bundled_corpus(pytestconfig):
    return load_dataset(pytestconfig.rootpath / "data" / "noisy_corpus.jsonl")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
