"""Minimum entropy coloring as an implicit set cover over maximal independent sets."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable

import numpy as np

from .core import (
    CapExceeded,
    DomainError,
    InstanceFormatError,
    SetSystem,
    avg_frequency,
    entropy_from_sizes,
)

DEFAULT_CAP = 100_000
GRAPH_MAGIC = "GRAPH 1"


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``1..n``; edges stored as ``(u, v)`` with ``u < v``."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        norm = set()
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise DomainError(f"edge {u}-{v} has an endpoint outside 1..{self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    def adjacency(self) -> list[int]:
        """Neighbour bitmasks; bit ``v`` of entry ``u`` is set iff ``uv`` is an edge (index 0 unused)."""
        adj = [0] * (self.n + 1)
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    @property
    def max_degree(self) -> int:
        adj = self.adjacency()
        return max((bin(a).count("1") for a in adj[1:]), default=0)

    def complement(self) -> "Graph":
        return complement(self)

    def is_independent(self, vertices: Iterable[int]) -> bool:
        adj = self.adjacency()
        mask = _mask(vertices)
        return all(not (adj[v] & mask) for v in _bits(mask))


def _mask(vertices: Iterable[int]) -> int:
    out = 0
    for v in vertices:
        out |= 1 << v
    return out


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(combinations(range(1, n + 1), 2)))


def empty_graph(n: int) -> Graph:
    return Graph(n, frozenset())


def complement(g: Graph) -> Graph:
    return Graph(g.n, frozenset(e for e in combinations(range(1, g.n + 1), 2) if e not in g.edges))


# --------------------------------------------------------------------------
# independent sets


def maximal_independent_sets(g: Graph, cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
    """All inclusion-maximal independent sets, each sorted, in lexicographic order.

    Runs pivoting Bron-Kerbosch for maximal cliques of the complement.
    Raises :class:`CapExceeded` once more than ``cap`` sets are found.
    """
    adj = g.adjacency()
    full = _mask(range(1, g.n + 1))
    # neighbourhoods in the complement
    nbr = [0] + [full & ~adj[v] & ~(1 << v) for v in range(1, g.n + 1)]
    found: list[tuple[int, ...]] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            found.append(tuple(_bits(r)))
            if len(found) > cap:
                raise CapExceeded(f"more than {cap} maximal independent sets")
            return
        pivot = max(_bits(p | x), key=lambda u: bin(p & nbr[u]).count("1"))
        for v in _bits(p & ~nbr[pivot]):
            expand(r | (1 << v), p & nbr[v], x & nbr[v])
            p &= ~(1 << v)
            x |= 1 << v

    if g.n:
        expand(0, full, 0)
    return sorted(found)


def independence_exceeds(g: Graph, k: int) -> bool:
    """True iff some independent set has ``k + 1`` vertices (stops at the first one)."""
    adj = g.adjacency()
    for combo in combinations(range(1, g.n + 1), k + 1):
        mask = _mask(combo)
        if all(not (adj[v] & mask) for v in combo):
            return True
    return False


def maximum_independent_sets(g: Graph, cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
    mis = maximal_independent_sets(g, cap)
    size = max(len(s) for s in mis)
    return [s for s in mis if len(s) == size]


def to_set_cover(g: Graph, cap: int = DEFAULT_CAP) -> SetSystem:
    """The implicit set cover: one set per maximal independent set."""
    return SetSystem(g.n, tuple(maximal_independent_sets(g, cap)))


@dataclass(frozen=True)
class Alpha3Stats:
    I: int
    M: int
    T: int
    f: float


def f_alpha3(g: Graph) -> Alpha3Stats:
    """Average frequency from complement counts, valid when alpha(G) <= 3.

    With no independent 4-set, the maximal independent sets are exactly the
    complement's triangles, triangle-free edges and isolated vertices.
    """
    if independence_exceeds(g, 3):
        raise DomainError("independence number exceeds 3")
    comp = complement(g)
    cadj = comp.adjacency()
    isolated = sum(1 for v in range(1, g.n + 1) if not cadj[v])
    triangles = sum(bin(cadj[u] & cadj[v] & ~((1 << (v + 1)) - 1)).count("1") for u, v in comp.edges)
    lonely = sum(1 for u, v in comp.edges if not (cadj[u] & cadj[v]))
    return Alpha3Stats(isolated, lonely, triangles, (isolated + 2 * lonely + 3 * triangles) / g.n)


# --------------------------------------------------------------------------
# colorings


@dataclass(frozen=True)
class Coloring:
    color: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "color", tuple(int(c) for c in self.color))

    @classmethod
    def from_classes(cls, classes: Iterable[Iterable[int]], n: int) -> "Coloring":
        color = [0] * n
        for k, cls_ in enumerate(classes):
            for v in cls_:
                color[v - 1] = k
        return cls(tuple(color))

    @property
    def classes(self) -> list[tuple[int, ...]]:
        """Vertex classes ordered by color id."""
        groups: dict[int, list[int]] = {}
        for v, c in enumerate(self.color, start=1):
            groups.setdefault(c, []).append(v)
        return [tuple(groups[c]) for c in sorted(groups)]

    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def entropy(self) -> float:
        return entropy_from_sizes(self.sizes(), len(self.color))

    def is_proper(self, g: Graph) -> bool:
        return all(self.color[u - 1] != self.color[v - 1] for u, v in g.edges)


def biased_coloring(g: Graph, delta: float = 1.0, cap: int = DEFAULT_CAP, seed: int | None = None) -> Coloring:
    """Color vertex ``v`` with the maximal independent set that covers it.

    Deterministic by default (BiasedGreedy tie rules).  With ``seed`` the
    Light vertices instead draw uniformly among their largest containing
    sets.
    """
    from .solvers import biased_greedy, split_light_heavy

    system = to_set_cover(g, cap)
    cover, _ = biased_greedy(system, delta)
    color = [i - 1 for i in cover.assignment]
    if seed is not None:
        rng = np.random.Generator(np.random.PCG64(seed))
        sizes = system.sizes
        for v in sorted(split_light_heavy(system, delta).light):
            options = [i for i in range(system.m) if v in system.sets[i]]
            top = max(sizes[i] for i in options)
            options = [i for i in options if sizes[i] == top]
            color[v - 1] = options[int(rng.integers(len(options)))]
    return Coloring(tuple(color))


def _xlogx(x: int) -> float:
    return x * math.log2(x) if x > 0 else 0.0


def heuristic_merge_colors(g: Graph, c: Coloring) -> Coloring:
    """Collapse pairs of color classes while their union stays independent.

    Each round applies the legal merge with the largest entropy drop
    (ties: lowest pair of color ids); the merged class keeps the smaller id.
    """
    adj = g.adjacency()
    groups = {k: _mask(vs) for k, vs in zip(sorted(set(c.color)), c.classes)}

    def independent(mask: int) -> bool:
        return all(not (adj[v] & mask) for v in _bits(mask))

    while True:
        best = None
        ids = sorted(groups)
        for a, b in combinations(ids, 2):
            union = groups[a] | groups[b]
            if not independent(union):
                continue
            sa, sb = bin(groups[a]).count("1"), bin(groups[b]).count("1")
            gain = _xlogx(sa + sb) - _xlogx(sa) - _xlogx(sb)
            if best is None or gain > best[0]:
                best = (gain, a, b)
        if best is None:
            break
        _, a, b = best
        groups[a] |= groups.pop(b)
    color = list(c.color)
    for k, mask in groups.items():
        for v in _bits(mask):
            color[v - 1] = k
    return Coloring(tuple(color))


def heuristic_largest_is_first(g: Graph, c: Coloring, cap: int = DEFAULT_CAP) -> Coloring:
    """Give one maximum independent set a fresh common color if that lowers entropy.

    Every maximum independent set is tried; the lowest resulting entropy
    wins (ties: lexicographically first set).  The input is returned
    unchanged when no candidate is strictly better.
    """
    if g.n == 0:
        return c
    current = c.entropy()
    fresh = max(c.color) + 1
    best = None
    for s in maximum_independent_sets(g, cap):
        color = list(c.color)
        for v in s:
            color[v - 1] = fresh
        cand = Coloring(tuple(color))
        ent = cand.entropy()
        if best is None or ent < best[0]:
            best = (ent, cand)
    if best is not None and best[0] < current - 1e-12:
        return best[1]
    return c


def apply_heuristics(g: Graph, c: Coloring, cap: int = DEFAULT_CAP) -> Coloring:
    return heuristic_merge_colors(g, heuristic_largest_is_first(g, c, cap))


def exact_coloring(g: Graph, cap: int = DEFAULT_CAP, budget: int | None = None):
    """Minimum entropy coloring via the exact set-cover oracle.

    Returns ``(coloring, entropy, certified)``.
    """
    from .solvers import DEFAULT_BUDGET, exact_min_entropy_cover

    res = exact_min_entropy_cover(to_set_cover(g, cap), budget or DEFAULT_BUDGET)
    return Coloring(tuple(i - 1 for i in res.cover.assignment)), res.entropy, res.certified


@dataclass(frozen=True)
class DegreeBound:
    rhs: float
    max_degree: int
    f: float
    below_optimum: bool  # rhs < ent_opt: the formula cannot hold on this graph


def degree_corollary_bound(g: Graph, ent_opt: float, f: float | None = None, cap: int = DEFAULT_CAP) -> DegreeBound:
    """``ent_opt + log2(Delta + 2) + log2(f / 3)`` for the Biased coloring."""
    if f is None:
        f = avg_frequency(to_set_cover(g, cap))
    delta_max = g.max_degree
    rhs = ent_opt + math.log2(delta_max + 2) + math.log2(f / 3)
    return DegreeBound(rhs, delta_max, f, rhs < ent_opt)


def approx_oracle_bound(eta: float, base_rhs: float) -> float:
    """Widen a bound by ``log2(eta)`` when independent sets are only eta-approximately maximum."""
    if not eta >= 1:
        raise DomainError(f"eta must be >= 1, got {eta!r}")
    return base_rhs + math.log2(eta)


# --------------------------------------------------------------------------
# file format


def format_graph(g: Graph) -> str:
    lines = [GRAPH_MAGIC, f"{g.n} {len(g.edges)}"]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    lines = [line for line in text.split("\n")]
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].strip() != GRAPH_MAGIC:
        raise InstanceFormatError(f"expected magic line {GRAPH_MAGIC!r}")
    try:
        n, e = (int(tok) for tok in lines[1].split())
    except (IndexError, ValueError):
        raise InstanceFormatError("line 2 must be '<n> <e>'") from None
    body = lines[2:]
    if len(body) != e:
        raise InstanceFormatError(f"expected {e} edge lines, found {len(body)}")
    edges = []
    seen = set()
    for k, line in enumerate(body, start=3):
        try:
            u, v = (int(tok) for tok in line.split())
        except ValueError:
            raise InstanceFormatError(f"line {k}: expected 'u v'") from None
        if not u < v:
            raise InstanceFormatError(f"line {k}: need u < v")
        if not (1 <= u and v <= n):
            raise InstanceFormatError(f"line {k}: endpoint outside 1..{n}")
        if (u, v) in seen:
            raise InstanceFormatError(f"line {k}: duplicate edge")
        seen.add((u, v))
        edges.append((u, v))
    return Graph(n, frozenset(edges))


def read_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text())


def write_graph(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_graph(g), newline="\n")
