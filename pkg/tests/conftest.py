import json
from functools import lru_cache
from pathlib import Path

import pytest

from hclf.io import curve_from_spec

DATA = Path(__file__).parent / "data"


@lru_cache(maxsize=None)
def corpus_specs():
    return tuple(json.loads((DATA / "corpus.json").read_text()))


@lru_cache(maxsize=None)
def load(label):
    spec = next(s for s in corpus_specs() if s["label"] == label)
    return curve_from_spec(spec)


def labels(group):
    return [s["label"] for s in corpus_specs() if s["group"] == group]


@lru_cache(maxsize=None)
def example_curves():
    """The searched F_3 example curves and their isomorphism families."""
    from hclf.recovery import isomorphism_families, search_f3_example
    found = search_f3_example()
    fams = isomorphism_families([e.model for e in found])
    return found, fams


@pytest.fixture
def example():
    found, _ = example_curves()
    return found[0]


@pytest.fixture
def cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv("HCLF_CACHE_DIR", str(tmp_path / "cache"))
    return tmp_path / "cache"


CRITERIA: dict = {}


def record_criterion(number, passed, detail=""):
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}".rstrip()
    CRITERIA[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[k])
