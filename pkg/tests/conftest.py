from functools import lru_cache

import numpy as np
import pytest

from polarlift.bundle import build_bar_model, make_symmetric_pair, metric_gs, split_isotropy
from polarlift.classical import named_isotropy
from polarlift.corpus import default_corpus_path, load_corpus, resolve_k


@lru_cache(maxsize=None)
def corpus_entries(name: str = "classical"):
    return {e.id: e for e in load_corpus(default_corpus_path(name))}


@lru_cache(maxsize=None)
def entry_split(entry_id: str, corpus: str = "classical"):
    e = corpus_entries(corpus)[entry_id]
    iso = named_isotropy(e.family, e.h_spec, e.params)
    pair = make_symmetric_pair(iso.g, iso.h_generators)
    table = {**iso.factors, **iso.extra}
    names = resolve_k(e, iso.factors, iso.extra)
    gens = np.hstack([table[n] for n in names]) if names else np.zeros((iso.g.dim, 0))
    return split_isotropy(pair, gens)


@lru_cache(maxsize=None)
def entry_model(entry_id: str, s: float, corpus: str = "classical"):
    split = entry_split(entry_id, corpus)
    bar = build_bar_model(split, s)
    return split, bar, metric_gs(split, s, bar)


def simple_entries():
    return [e.id for e in corpus_entries().values() if not e.skip and e.simple]


def runnable_entries():
    return [e.id for e in corpus_entries().values() if not e.skip]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
