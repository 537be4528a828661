"""Instance and cover data model, entropy and divergence utilities.

Elements are 1-based indices ``1..n``; sets are referenced by 1-based index
``1..m``.  All entropies are in bits and use the convention ``0 * log2(0) = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

LOG2E = math.log2(math.e)

#: absolute tolerance for derived identities
IDENTITY_TOL = 1e-9
#: absolute tolerance for distribution normalization
NORM_TOL = 1e-12

MAGIC = "MESC 1"


class MescError(Exception):
    """Base class for library errors."""


class DomainError(MescError, ValueError):
    """An argument lies outside the domain of an operation."""


class InvalidInstanceError(MescError, ValueError):
    """A set system violates its invariants."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class InstanceFormatError(MescError, ValueError):
    """An instance or graph file could not be parsed."""


class CapExceeded(MescError):
    """An enumeration produced more objects than allowed."""


# --------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class SetSystem:
    """A MESC instance: ground set ``1..n`` and an ordered family of subsets.

    The constructor stores the sets as given (converted to tuples) so that
    :func:`validate` can report malformed input; use :func:`require_valid`
    before handing a system to an algorithm.
    """

    n: int
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "sets", tuple(tuple(int(u) for u in s) for s in self.sets))

    @property
    def m(self) -> int:
        return len(self.sets)

    @property
    def sizes(self) -> np.ndarray:
        return np.array([len(s) for s in self.sets], dtype=np.int64)

    def membership(self) -> np.ndarray:
        """Boolean ``(n, m)`` incidence matrix; row ``u-1`` is element ``u``."""
        mat = np.zeros((self.n, self.m), dtype=np.bool_)
        for i, s in enumerate(self.sets):
            for u in s:
                mat[u - 1, i] = True
        return mat

    def frequencies(self) -> np.ndarray:
        return self.membership().sum(axis=1).astype(np.int64)

    def containing(self, u: int) -> list[int]:
        """1-based indices of the sets containing element ``u``, ascending."""
        return [i + 1 for i, s in enumerate(self.sets) if u in s]


@dataclass(frozen=True)
class CoverAssignment:
    """A cover ``g``: ``assignment[u-1]`` is the 1-based set covering ``u``."""

    assignment: tuple[int, ...]
    class_sizes: tuple[int, ...]

    @classmethod
    def from_assignment(cls, assignment: Iterable[int], m: int) -> "CoverAssignment":
        assignment = tuple(int(i) for i in assignment)
        if any(i < 1 or i > m for i in assignment):
            raise DomainError(f"set index outside 1..{m} in assignment")
        counts = np.bincount(np.asarray(assignment, dtype=np.int64) - 1, minlength=m) if assignment else np.zeros(m, dtype=np.int64)
        return cls(assignment, tuple(int(c) for c in counts))

    @property
    def n(self) -> int:
        return len(self.assignment)

    @property
    def m(self) -> int:
        return len(self.class_sizes)

    def classes(self) -> list[list[int]]:
        """Element lists per set index (index ``i-1`` holds ``g^-1(i)``)."""
        out: list[list[int]] = [[] for _ in range(self.m)]
        for u, i in enumerate(self.assignment, start=1):
            out[i - 1].append(u)
        return out


@dataclass(frozen=True)
class Distribution:
    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if any(x < 0 or not math.isfinite(x) for x in w):
            raise DomainError("distribution weights must be finite and nonnegative")
        if abs(math.fsum(w) - 1.0) > NORM_TOL:
            raise DomainError(f"distribution weights sum to {math.fsum(w)!r}, not 1")
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_counts(cls, counts: Sequence[float]) -> "Distribution":
        total = math.fsum(counts)
        if total <= 0:
            raise DomainError("cannot normalize an all-zero count vector")
        return cls(tuple(c / total for c in counts))

    def __len__(self):
        return len(self.weights)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=np.float64)


@dataclass(frozen=True)
class EntropyDecomposition:
    """Cover entropy split as ``size_term - divergence_term + mass_term``."""

    size_term: float
    divergence_term: float
    mass_term: float
    total: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total", self.size_term - self.divergence_term + self.mass_term)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


# --------------------------------------------------------------------------
# operations


def validate(system: SetSystem) -> ValidationReport:
    """Check a set system's invariants; never raises."""
    problems: list[str] = []
    n = system.n
    if n < 1:
        problems.append(f"ground set size must be >= 1, got {n}")
    if system.m < 1:
        problems.append("the family must contain at least one set")
    covered = set()
    for i, s in enumerate(system.sets, start=1):
        for u in s:
            if u < 1 or u > n:
                problems.append(f"set {i}: index {u} out of range 1..{n}")
        if len(set(s)) != len(s):
            problems.append(f"set {i}: duplicate elements")
        elif any(a >= b for a, b in zip(s, s[1:])):
            problems.append(f"set {i}: indices not ascending")
        covered.update(u for u in s if 1 <= u <= n)
    missing = [u for u in range(1, n + 1) if u not in covered]
    for u in missing:
        problems.append(f"element {u} uncovered")
    return ValidationReport(tuple(problems))


def require_valid(system: SetSystem) -> None:
    report = validate(system)
    if not report.ok:
        raise InvalidInstanceError(report.violations)


def element_frequency(system: SetSystem, u: int) -> int:
    if not 1 <= u <= system.n:
        raise DomainError(f"element {u} outside 1..{system.n}")
    return sum(1 for s in system.sets if u in s)


def avg_frequency(system: SetSystem) -> float:
    """Average number of sets containing an element: ``sum |P_i| / n``."""
    return sum(len(s) for s in system.sets) / system.n


def entropy_from_sizes(sizes: Sequence[int] | np.ndarray, n: int | None = None) -> float:
    """Entropy in bits of the class-size histogram ``sizes``."""
    c = np.asarray(sizes, dtype=np.float64)
    total = float(c.sum()) if n is None else float(n)
    if total <= 0:
        return 0.0
    p = c[c > 0] / total
    h = float(-(p * np.log2(p)).sum())
    # -0.0 and rounding noise below zero for single-class histograms
    return h if h > 0 else 0.0


def entropy_of_cover(cover: CoverAssignment, n: int | None = None) -> float:
    return entropy_from_sizes(cover.class_sizes, cover.n if n is None else n)


def _as_weights(d) -> np.ndarray:
    if isinstance(d, Distribution):
        return d.as_array()
    return Distribution(tuple(d)).as_array()


def kl_divergence(p, q) -> float:
    """``D(p || q)`` in bits.  Raises :class:`DomainError` on a support violation."""
    pa, qa = _as_weights(p), _as_weights(q)
    if pa.shape != qa.shape:
        raise DomainError("distributions have different lengths")
    support = pa > 0
    if np.any(qa[support] == 0):
        raise DomainError("p has mass where q has none")
    d = float((pa[support] * np.log2(pa[support] / qa[support])).sum())
    return d if d > 0 else 0.0


def check_cover(system: SetSystem, cover: CoverAssignment) -> None:
    if cover.n != system.n or cover.m != system.m:
        raise DomainError("cover shape does not match the system")
    for u, i in enumerate(cover.assignment, start=1):
        if u not in system.sets[i - 1]:
            raise DomainError(f"element {u} is not a member of its covering set {i}")


def entropy_decomposition(system: SetSystem, cover: CoverAssignment) -> EntropyDecomposition:
    """Split ``Ent(cover)`` into its set-size, divergence and total-mass terms."""
    check_cover(system, cover)
    sizes = system.sizes.astype(np.float64)
    p_flat = np.asarray(cover.class_sizes, dtype=np.float64) / system.n
    used = p_flat > 0
    size_term = float(-(p_flat[used] * np.log2(sizes[used])).sum())
    mass = float(sizes.sum())
    divergence = kl_divergence(Distribution(tuple(p_flat)), Distribution(tuple(sizes / mass)))
    return EntropyDecomposition(size_term, divergence, math.log2(mass))


# --------------------------------------------------------------------------
# file format


def format_instance(system: SetSystem) -> str:
    lines = [MAGIC, f"{system.n} {system.m}"]
    lines.extend(" ".join(str(u) for u in s) for s in system.sets)
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> SetSystem:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].strip() != MAGIC:
        raise InstanceFormatError(f"expected magic line {MAGIC!r}")
    try:
        n, m = (int(tok) for tok in lines[1].split())
    except (IndexError, ValueError):
        raise InstanceFormatError("line 2 must be '<n> <m>'") from None
    body = lines[2:]
    if len(body) < m:
        # trailing empty sets may have lost their newline
        body += [""] * (m - len(body))
    if len(body) > m and any(line.strip() for line in body[m:]):
        raise InstanceFormatError(f"found more than {m} set lines")
    sets = []
    for k, line in enumerate(body[:m], start=3):
        try:
            sets.append(tuple(int(tok) for tok in line.split()))
        except ValueError:
            raise InstanceFormatError(f"line {k}: non-integer token") from None
    system = SetSystem(n, tuple(sets))
    report = validate(system)
    if not report.ok:
        raise InstanceFormatError("; ".join(report.violations))
    return system


def read_instance(path: str | Path) -> SetSystem:
    return parse_instance(Path(path).read_text())


def write_instance(system: SetSystem, path: str | Path) -> None:
    Path(path).write_text(format_instance(system), newline="\n")
