"""BiasedGreedy(delta), the exact minimum-entropy oracle and bound certificates."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .core import (
    LOG2E,
    CoverAssignment,
    Distribution,
    DomainError,
    SetSystem,
    avg_frequency,
    entropy_of_cover,
    kl_divergence,
    require_valid,
)

#: default node budget for :func:`exact_min_entropy_cover`
DEFAULT_BUDGET = 50_000_000

# score-space tolerance for calling two covers tied (score = sum c log2 c)
_SCORE_TOL = 1e-10


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not 0.0 <= delta <= 1.0 or math.isnan(delta):
        raise DomainError(f"delta must lie in [0, 1], got {delta!r}")
    return delta


def light_count(delta: float, n: int) -> int:
    """``ceil(delta * n)``, robust to products like ``0.3 * 10``."""
    return int(math.ceil(round(delta * n, 9)))


@dataclass(frozen=True)
class SplitReport:
    delta: float
    light: frozenset[int]
    heavy: frozenset[int]
    frequency_order: tuple[int, ...]


def split_light_heavy(system: SetSystem, delta: float) -> SplitReport:
    """The ``ceil(delta n)`` least frequent elements are Light, the rest Heavy.

    Frequency ties are broken by ascending element index.
    """
    delta = _check_delta(delta)
    freq = system.frequencies()
    order = np.argsort(freq, kind="stable") + 1
    k = light_count(delta, system.n)
    return SplitReport(
        delta=delta,
        light=frozenset(int(u) for u in order[:k]),
        heavy=frozenset(int(u) for u in order[k:]),
        frequency_order=tuple(int(u) for u in order),
    )


class TraceRecord(NamedTuple):
    element: int
    phase: str  # "biased" | "greedy"
    chosen_set: int
    a_v: int
    current_size: int


@dataclass(frozen=True)
class AlgorithmTrace:
    records: tuple[TraceRecord, ...]

    @property
    def order(self) -> tuple[int, ...]:
        return tuple(r.element for r in self.records)

    def a_values(self) -> dict[int, int]:
        return {r.element: r.a_v for r in self.records}


def biased_greedy(system: SetSystem, delta: float) -> tuple[CoverAssignment, AlgorithmTrace]:
    """Run BiasedGreedy(delta).

    Light elements are each covered by a containing set of maximum original
    cardinality.  Heavy elements are then covered by the classic greedy rule
    on the residual instance (sets stripped of Light elements): the set with
    the most uncovered Heavy elements covers all of them, repeat.  Set-choice
    ties go to the smallest set index.
    """
    require_valid(system)
    split = split_light_heavy(system, delta)
    light = np.zeros(system.n, dtype=np.bool_)
    for u in split.light:
        light[u - 1] = True
    chosen, a_v, current, order = _kernels.biased_greedy_kernel(system.membership(), system.sizes, light)
    cover = CoverAssignment.from_assignment(chosen + 1, system.m)
    records = tuple(
        TraceRecord(
            int(u) + 1,
            "biased" if light[u] else "greedy",
            int(chosen[u]) + 1,
            int(a_v[u]),
            int(current[u]),
        )
        for u in order
    )
    return cover, AlgorithmTrace(records)


def greedy(system: SetSystem) -> tuple[CoverAssignment, AlgorithmTrace]:
    return biased_greedy(system, 0.0)


def biased(system: SetSystem) -> tuple[CoverAssignment, AlgorithmTrace]:
    return biased_greedy(system, 1.0)


# --------------------------------------------------------------------------
# exact oracle


@dataclass(frozen=True)
class ExactResult:
    cover: CoverAssignment
    entropy: float
    certified: bool
    nodes: int

    def __iter__(self):
        # allows ``cover, ent = exact_min_entropy_cover(...)``
        return iter((self.cover, self.entropy))


def _candidates(system: SetSystem) -> tuple[np.ndarray, np.ndarray]:
    member = system.membership()
    indptr = np.zeros(system.n + 1, dtype=np.int64)
    cand = []
    for u in range(system.n):
        row = np.flatnonzero(member[u])
        cand.extend(row.tolist())
        indptr[u + 1] = indptr[u] + len(row)
    return indptr, np.asarray(cand, dtype=np.int64)


def exact_min_entropy_cover(system: SetSystem, budget: int = DEFAULT_BUDGET) -> ExactResult:
    """Minimum-entropy cover by branch and bound.

    Among optimal covers the lexicographically smallest assignment vector is
    returned.  If ``budget`` search nodes are exhausted the best cover found
    so far comes back with ``certified=False`` (the Biased cover when the
    search had not reached a leaf yet).
    """
    require_valid(system)
    if budget < 1:
        raise DomainError("budget must be positive")
    indptr, cand = _candidates(system)
    table = _kernels.xlogx_table(system.n)
    best, _, nodes, complete = _kernels.bnb_search_kernel(
        indptr, cand, system.n, system.m, table, int(budget), _SCORE_TOL
    )
    if best[0] < 0:
        cover, _ = biased(system)
    else:
        cover = CoverAssignment.from_assignment(best + 1, system.m)
    return ExactResult(cover, entropy_of_cover(cover), bool(complete), int(nodes))


def enumerate_min_entropy_cover(system: SetSystem, limit: int = 10**6) -> tuple[CoverAssignment, float]:
    """Unpruned reference: score every cover, keep the lexicographically first minimum.

    Independent of the branch-and-bound kernel; meant for small instances
    (``prod freq(u) <= limit``).
    """
    require_valid(system)
    choices = [system.containing(u) for u in range(1, system.n + 1)]
    total = math.prod(len(c) for c in choices)
    if total > limit:
        raise DomainError(f"{total} covers exceed the enumeration limit {limit}")
    combos = np.array(list(itertools.product(*choices)), dtype=np.int64).reshape(total, system.n)
    counts = np.zeros((total, system.m), dtype=np.float64)
    rows = np.repeat(np.arange(total), system.n)
    np.add.at(counts, (rows, combos.ravel() - 1), 1.0)
    p = counts / system.n
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(p), 0.0)
    ent = -terms.sum(axis=1)
    idx = int(np.flatnonzero(ent <= ent.min() + 1e-12)[0])
    cover = CoverAssignment.from_assignment(combos[idx], system.m)
    return cover, entropy_of_cover(cover)


# --------------------------------------------------------------------------
# bounds and certificates


def heavy_fraction(delta: float, n: int) -> float:
    """``(n - ceil(delta n)) / n``: the share of Heavy elements."""
    return (n - light_count(delta, n)) / n


def _beta_term(beta: float) -> float:
    # -beta * log2(beta / e), zero at beta = 0
    if beta == 0:
        return 0.0
    return -beta * math.log2(beta) + beta * LOG2E


def theorem_bound(ent_opt: float, f: float, delta: float, n: int) -> tuple[float, float]:
    """Finite-n upper bound on Ent(BiasedGreedy(delta)); returns ``(rhs, beta)``.

    ``rhs = ent_opt + log2 f - beta log2(beta / e)`` with
    ``beta = (n - ceil(delta n)) / n``.  At ``delta = 1`` this is
    ``ent_opt + log2 f``.
    """
    delta = _check_delta(delta)
    if f < 1 or n < 1 or ent_opt < 0:
        raise DomainError("theorem_bound needs f >= 1, n >= 1, ent_opt >= 0")
    beta = heavy_fraction(delta, n)
    return ent_opt + math.log2(f) + _beta_term(beta), beta


@dataclass(frozen=True)
class BoundCertificate:
    ent_alg: float
    ent_opt: float
    f: float
    delta: float
    beta: float
    rhs: float
    slack: float
    holds: bool
    certified: bool = True
    # proof terms dropped on the way to rhs (both >= 0)
    divergence_alg: float = 0.0
    divergence_heavy: float = 0.0


def heavy_divergence(opt: CoverAssignment, heavy: frozenset[int]) -> float:
    """``beta * D(ybar || xbar)`` where x/y are optimum class sizes overall / on Heavy."""
    n = opt.n
    if not heavy:
        return 0.0
    x = np.asarray(opt.class_sizes, dtype=np.float64)
    y = np.zeros(opt.m)
    for u in heavy:
        y[opt.assignment[u - 1] - 1] += 1
    beta = len(heavy) / n
    return beta * kl_divergence(Distribution.from_counts(y), Distribution.from_counts(x))


def certify(system: SetSystem, delta: float, budget: int = DEFAULT_BUDGET, exact: ExactResult | None = None) -> BoundCertificate:
    """Run BiasedGreedy(delta) and the exact oracle, and check the finite-n bound."""
    delta = _check_delta(delta)
    cover, _ = biased_greedy(system, delta)
    if exact is None:
        exact = exact_min_entropy_cover(system, budget)
    f = avg_frequency(system)
    ent_alg = entropy_of_cover(cover)
    rhs, beta = theorem_bound(exact.entropy, f, delta, system.n)
    slack = rhs - ent_alg

    sizes = system.sizes.astype(np.float64)
    p_flat = Distribution.from_counts(cover.class_sizes)
    div_alg = kl_divergence(p_flat, Distribution.from_counts(sizes))
    heavy = split_light_heavy(system, delta).heavy
    return BoundCertificate(
        ent_alg=ent_alg,
        ent_opt=exact.entropy,
        f=f,
        delta=delta,
        beta=beta,
        rhs=rhs,
        slack=slack,
        holds=slack >= -1e-9,
        certified=exact.certified,
        divergence_alg=div_alg,
        divergence_heavy=heavy_divergence(exact.cover, heavy),
    )


class BestDelta(NamedTuple):
    delta: int
    tie: bool


def best_delta(f: float) -> BestDelta:
    """Pick the pure strategy with the smaller additive guarantee.

    Biased guarantees ``log2 f``, Greedy ``log2 e``; so ``delta = 1`` below
    ``f = e`` and ``delta = 0`` above.  Within 1e-12 of ``e`` the tie flag
    is set and ``delta = 1`` is reported.
    """
    if f < 1:
        raise DomainError(f"average frequency must be >= 1, got {f!r}")
    if abs(f - math.e) <= 1e-12:
        return BestDelta(1, True)
    return BestDelta(1 if f < math.e else 0, False)
