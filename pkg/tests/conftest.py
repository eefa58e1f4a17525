import json
import sys
from pathlib import Path

import pytest

from seamless_adl.adl import load_file
from seamless_adl.metamodel import ElementKind, LinkKind

ROOT = Path(__file__).resolve().parent.parent
M0_PATH = ROOT / "m0.adl"
GOLDEN = Path(__file__).resolve().parent / "golden"

sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture(scope="session")
def m0_text() -> str:
    return M0_PATH.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def m0():
    model, diagnostics = load_file(M0_PATH)
    assert diagnostics == []
    return model


@pytest.fixture(scope="session")
def manifest():
    return json.loads((GOLDEN / "m0_manifest.json").read_text())


def drop_statement(text: str, statement: str) -> str:
    assert statement in text
    return text.replace(statement, "", 1)


def golden_triples() -> set:
    triples = set()
    for line in (GOLDEN / "allowed_links.txt").read_text().splitlines():
        if line and not line.startswith("#"):
            src, link, dst = line.split()
            triples.add((ElementKind(src), LinkKind(link), ElementKind(dst)))
    return triples


# One verdict line per acceptance criterion, echoed at the end of the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
