import os
import pathlib
import sys

import pytest

from milinkpred import canonical_fixture, load_edge_list

HERE = pathlib.Path(__file__).parent
DATA = HERE / "data"
sys.path.insert(0, str(HERE))


@pytest.fixture
def gstar():
    return canonical_fixture()


@pytest.fixture
def triangle():
    return load_edge_list("a b\nb c\nc a\n")


def dataset_path(*names):
    """First existing file among ``names`` in $LINKPRED_DATA_DIR or tests/data/datasets."""
    roots = [os.environ.get("LINKPRED_DATA_DIR"), DATA / "datasets"]
    for root in roots:
        if not root:
            continue
        for name in names:
            p = pathlib.Path(root) / name
            if p.exists():
                return p
    return None


# acceptance verdicts, printed once at the end of the session
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
