import itertools

import numpy as np
import pytest

from bisectsdp import BisectionInstance, Graph, gen_gnp


def enumerate_min_cut(inst):
    """Independent exact oracle: direct subset enumeration, no shared code."""
    g = inst.graph
    best = None
    best_set = None
    for subset in itertools.combinations(range(g.n), inst.m1):
        member = [False] * g.n
        for v in subset:
            member[v] = True
        cut = 0.0
        for i, j, w in g.edges:
            if member[i] != member[j]:
                cut += w
        # first minimizer kept: combinations are lexicographic
        if best is None or cut < best - 1e-12:
            best = cut
            best_set = subset
    return best, best_set


@pytest.fixture
def star4():
    return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def star31(star4):
    return BisectionInstance(star4, 3, 1, name="star31")


@pytest.fixture
def gnp8():
    return BisectionInstance(gen_gnp(8, 0.5, 3), 5, 3, name="gnp8")


def random_instance(rng, n_low=6, n_high=12, p_choices=(0.3, 0.5, 0.7)):
    n = int(rng.integers(n_low, n_high + 1))
    p = float(rng.choice(p_choices))
    m1 = int(rng.integers(n // 2 + 1, n))
    seed = int(rng.integers(0, 10**6))
    g = gen_gnp(n, p, seed)
    return BisectionInstance(g, m1, n - m1, name=f"gnp{n}-{seed}")
