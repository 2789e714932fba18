import json
from pathlib import Path

import pytest

from pipestudio.registry import Registry, load_manifest

FIXTURES = Path(__file__).parent / "fixtures"
PACKAGE_DATA = Path(__file__).parent.parent / "src" / "pipestudio" / "data"


@pytest.fixture(scope="session")
def registry() -> Registry:
    return load_manifest()


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def datasets_dir() -> Path:
    return PACKAGE_DATA / "datasets"


@pytest.fixture(scope="session")
def seed_corpus_path() -> Path:
    return PACKAGE_DATA / "seed_corpus.jsonl"


@pytest.fixture(scope="session")
def task_rows() -> list[dict]:
    return json.loads((FIXTURES / "task_rows.json").read_text())["rows"]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion, with runtime."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, elapsed in RESULTS:
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {name} ({elapsed:.2f}s)")
