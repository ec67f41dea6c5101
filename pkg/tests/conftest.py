import itertools
import random
from pathlib import Path

import pytest

from kmsgraph import DirectedMultigraph, parse_graph

DATA = Path(__file__).parent / "data"

CORPUS_SEED = 20250810
CORPUS_CAP = 500


def load_fixture(name: str) -> DirectedMultigraph:
    return parse_graph((DATA / name).read_text())


@pytest.fixture(scope="session")
def ex61() -> DirectedMultigraph:
    return load_fixture("ex61.graph")


@pytest.fixture(scope="session")
def ex62() -> DirectedMultigraph:
    return load_fixture("ex62.graph")


@pytest.fixture(scope="session")
def bratteli_pair() -> tuple[DirectedMultigraph, DirectedMultigraph]:
    return load_fixture("bratteli_a.graph"), load_fixture("bratteli_b.graph")


def _graph_from_slots(names, mults) -> DirectedMultigraph:
    nv = len(names)
    edges = []
    for slot, k in enumerate(mults):
        if k:
            edges.append((names[slot // nv], names[slot % nv], k))
    return DirectedMultigraph(names, edges)


def small_graph_corpus(
    cap: int = CORPUS_CAP, max_total: int = 6, seed: int = CORPUS_SEED
) -> list[DirectedMultigraph]:
    """Digraphs with <= 4 vertices and total multiplicity <= max_total.

    Exhaustive for 1 and 2 vertices; the 3- and 4-vertex part is a seeded
    random sample, so the corpus is deterministic across runs.
    """
    names4 = ("a", "b", "c", "d")
    graphs = []
    for nv in (1, 2):
        names = names4[:nv]
        slots = nv * nv
        for mults in itertools.product(range(max_total + 1), repeat=slots):
            if sum(mults) <= max_total:
                graphs.append(_graph_from_slots(names, mults))
    rng = random.Random(seed)
    while len(graphs) < cap:
        nv = rng.choice((3, 4))
        names = names4[:nv]
        total = rng.randint(0, max_total)
        mults = [0] * (nv * nv)
        for _ in range(total):
            mults[rng.randrange(nv * nv)] += 1
        graphs.append(_graph_from_slots(names, mults))
    return graphs[:cap]


@pytest.fixture(scope="session")
def corpus() -> list[DirectedMultigraph]:
    return small_graph_corpus()
