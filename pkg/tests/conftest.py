import json
import pathlib
from collections import Counter
from functools import lru_cache

import pytest

from centgraph.constructions import as_table, named_group
from centgraph.fpclass2 import Class2Group

FROZEN_PATH = pathlib.Path(__file__).parent / "oracle" / "frozen.json"


@lru_cache(maxsize=None)
def frozen() -> dict:
    return json.loads(FROZEN_PATH.read_text())


@lru_cache(maxsize=None)
def group(name: str):
    return named_group(name)


@lru_cache(maxsize=None)
def table(name: str):
    return as_table(named_group(name))


def profile(reports):
    return sorted([len(c.vertices), c.diameter] for c in reports)


def status_counts(statuses):
    return dict(Counter(s.kind for s in statuses))


@pytest.fixture
def frozen_values():
    return frozen()


def class2_names():
    return sorted(frozen()["class2"])


def table_names():
    return sorted(frozen()["tables"])


def is_class2(name: str) -> bool:
    return isinstance(group(name), Class2Group)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
