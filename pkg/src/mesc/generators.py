"""Seeded instance and graph generators plus the worked-example fixture.

All randomness comes from numpy's PCG64 bit generator seeded with the
64-bit ``seed`` (``numpy.random.Generator(PCG64(seed))``).  The stream is
stable across platforms, so generated files are reproducible byte for byte.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .coloring import Graph
from .core import DomainError, SetSystem


@dataclass(frozen=True)
class GenSpec:
    n: int
    m: int
    target_f: float
    seed: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise DomainError("GenSpec needs n >= 1 and m >= 1")
        if not 1 <= self.target_f <= self.m:
            raise DomainError(f"target_f must lie in [1, m={self.m}], got {self.target_f!r}")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_set_system(spec: GenSpec) -> SetSystem:
    """Independent memberships with probability ``target_f / m``.

    Elements left uncovered are then put into one uniformly chosen set each
    (ascending element order), which can only raise the realized ``f``.
    """
    rng = rng_for(spec.seed)
    p = spec.target_f / spec.m
    member = rng.random((spec.n, spec.m)) < p
    for u in range(spec.n):
        if not member[u].any():
            member[u, rng.integers(spec.m)] = True
    sets = tuple(tuple(int(u) + 1 for u in np.flatnonzero(member[:, i])) for i in range(spec.m))
    return SetSystem(spec.n, sets)


def random_graph(n: int, p: float, seed: int) -> Graph:
    """G(n, p): each of the ``n(n-1)/2`` pairs is an edge independently."""
    if not 0 <= p <= 1:
        raise DomainError(f"edge probability must lie in [0, 1], got {p!r}")
    rng = rng_for(seed)
    pairs = list(combinations(range(1, n + 1), 2))
    keep = rng.random(len(pairs)) < p
    return Graph(n, frozenset(e for e, k in zip(pairs, keep) if k))


def random_suite(count: int, seed: int, n_max: int = 10, m_max: int = 6, f_max: float = 4.0) -> list[tuple[GenSpec, SetSystem]]:
    """``count`` small instances with ``n <= n_max``, ``m <= m_max`` and
    ``target_f`` drawn uniformly from ``[1, min(f_max, m)]``."""
    rng = rng_for(seed)
    suite = []
    for _ in range(count):
        n = int(rng.integers(1, n_max + 1))
        m = int(rng.integers(1, m_max + 1))
        target_f = float(rng.uniform(1.0, min(f_max, m)))
        spec = GenSpec(n, m, target_f, int(rng.integers(2**63)))
        suite.append((spec, random_set_system(spec)))
    return suite


# complement edges of the 8-vertex worked example
PAPER_FIG1_COMPLEMENT = frozenset(
    {(1, 2), (1, 3), (2, 3), (6, 7), (6, 8), (7, 8), (3, 6), (4, 6), (3, 4), (4, 5)}
)


def paper_example_graph() -> Graph:
    """8-vertex graph whose complement is three triangles and the edge 45."""
    return Graph(8, PAPER_FIG1_COMPLEMENT).complement()


FIXTURES = {"paper-fig1": paper_example_graph}
