"""Command-line entry point: ``mesc <command> [flags]``.

Exit codes: 0 success, 2 input/domain error, 3 resource/budget error.
Errors are echoed to stderr as one JSON line ``{"error": kind, "message": ...}``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Optional

from . import coloring as col
from .core import (
    LOG2E,
    CapExceeded,
    MescError,
    SetSystem,
    avg_frequency,
    entropy_of_cover,
    format_instance,
    read_instance,
)
from .generators import FIXTURES, GenSpec, random_graph, random_set_system
from .solvers import (
    DEFAULT_BUDGET,
    best_delta,
    biased_greedy,
    certify,
    exact_min_entropy_cover,
    theorem_bound,
)

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE = 0, 2, 3


class BudgetExceeded(MescError):
    pass


def fmt(x) -> str:
    """Reals with 7 significant digits; None becomes an empty field."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.7g}"
    return str(x)


@dataclass
class SweepRecord:
    instance_id: str
    n: int
    m: int
    f: float
    delta: Optional[float]
    algorithm: str
    ent_alg: float
    ent_opt: Optional[float] = None
    rhs: Optional[float] = None
    slack: Optional[float] = None
    holds: object = None
    seed: Optional[int] = None


CSV_HEADER = [f.name for f in fields(SweepRecord)]


def write_records(records, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([fmt(v) for v in astuple(r)])


def _emit_csv(records, path: Optional[str]) -> None:
    if path in (None, "-"):
        write_records(records, sys.stdout)
    else:
        with open(path, "w", newline="") as fh:
            write_records(records, fh)


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` inclusive of ``stop`` (within 1e-12); a bare number is a one-point grid."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise col.DomainError(f"bad grid {text!r}; expected start:stop:step") from None
    if step <= 0 or stop < start:
        raise col.DomainError(f"bad grid {text!r}; need step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-12)) + 1
    return [round(start + k * step, 12) for k in range(count)]


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("MESC_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    items = list(items)
    threads = _threads()
    if threads == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def load_instance(spec: str) -> tuple[str, SetSystem]:
    if spec in FIXTURES:
        return spec, col.to_set_cover(FIXTURES[spec]())
    return Path(spec).stem, read_instance(spec)


def load_graph(spec: str) -> tuple[str, col.Graph]:
    if spec in FIXTURES:
        return spec, FIXTURES[spec]()
    return Path(spec).stem, col.read_graph(spec)


# --------------------------------------------------------------------------
# commands


def cmd_solve(args) -> int:
    name, system = load_instance(args.input)
    f = avg_frequency(system)
    if args.algorithm == "exact":
        res = exact_min_entropy_cover(system, args.budget)
        cover, certified = res.cover, res.certified
    else:
        delta = {"greedy": 0.0, "biased": 1.0}.get(args.algorithm, args.delta)
        cover, _ = biased_greedy(system, delta)
        certified = True
    ent = entropy_of_cover(cover)
    print(f"instance: {name}")
    print(f"algorithm: {args.algorithm}")
    print(f"n: {system.n}  m: {system.m}  f: {fmt(f)}")
    print("cover: " + " ".join(str(i) for i in cover.assignment))
    print("class_sizes: " + " ".join(str(c) for c in cover.class_sizes))
    print(f"entropy: {fmt(ent)}")
    if args.output:
        delta = None if args.algorithm == "exact" else {"greedy": 0.0, "biased": 1.0}.get(args.algorithm, args.delta)
        _emit_csv([SweepRecord(name, system.n, system.m, f, delta, args.algorithm, ent, seed=None)], args.output)
    if not certified:
        raise BudgetExceeded(f"node budget {args.budget} exhausted; cover is best-so-far, not certified optimal")
    return EXIT_OK


def _certificate_record(name, system, delta, exact, seed=None) -> SweepRecord:
    cert = certify(system, delta, exact=exact)
    if not cert.certified:
        return SweepRecord(name, system.n, system.m, cert.f, delta, "biased-greedy", cert.ent_alg, holds="budget_exceeded", seed=seed)
    return SweepRecord(name, system.n, system.m, cert.f, delta, "biased-greedy", cert.ent_alg, cert.ent_opt, cert.rhs, cert.slack, cert.holds, seed)


def cmd_certify(args) -> int:
    name, system = load_instance(args.input)
    exact = exact_min_entropy_cover(system, args.budget)
    records = [_certificate_record(name, system, d, exact) for d in parse_grid(args.delta_grid)]
    _emit_csv(records, args.output)
    if not exact.certified:
        raise BudgetExceeded("exact oracle exhausted its node budget; rows flagged budget_exceeded")
    return EXIT_OK


def cmd_sweep(args) -> int:
    deltas = parse_grid(args.delta_grid)
    seeds = range(args.seed, args.seed + args.seeds)

    def run(seed):
        spec = GenSpec(args.n, args.m, args.target_f, seed)
        system = random_set_system(spec)
        name = f"rand-n{args.n}-m{args.m}-s{seed}"
        if args.exact:
            exact = exact_min_entropy_cover(system, args.budget)
            return [_certificate_record(name, system, d, exact, seed) for d in deltas]
        out = []
        for d in deltas:
            cover, _ = biased_greedy(system, d)
            out.append(SweepRecord(name, system.n, system.m, avg_frequency(system), d, "biased-greedy", entropy_of_cover(cover), seed=seed))
        return out

    rows = [r for chunk in _pmap(run, seeds) for r in chunk]
    _emit_csv(rows, args.output)
    return EXIT_OK


PHASE_HEADER = [
    "f", "log2_f", "log2_e", "guarantee_diff", "best_delta", "tie",
    "mean_ent_greedy", "mean_ent_biased", "mean_realized_f", "n", "m", "seeds",
]


def phase_transition_rows(n: int, m: int, f_grid: list[float], seeds: int, base_seed: int = 0) -> list[dict]:
    """Mean Greedy/Biased entropies per target f, next to the two additive guarantees."""
    def run(f):
        greedy_e, biased_e, realized = [], [], []
        for k in range(seeds):
            system = random_set_system(GenSpec(n, m, f, base_seed + k))
            realized.append(avg_frequency(system))
            greedy_e.append(entropy_of_cover(biased_greedy(system, 0.0)[0]))
            biased_e.append(entropy_of_cover(biased_greedy(system, 1.0)[0]))
        bd = best_delta(f)
        return {
            "f": f,
            "log2_f": math.log2(f),
            "log2_e": LOG2E,
            "guarantee_diff": math.log2(f) - LOG2E,
            "best_delta": bd.delta,
            "tie": bd.tie,
            "mean_ent_greedy": sum(greedy_e) / seeds,
            "mean_ent_biased": sum(biased_e) / seeds,
            "mean_realized_f": sum(realized) / seeds,
            "n": n,
            "m": m,
            "seeds": seeds,
        }

    return _pmap(run, f_grid)


def write_phase_svg(rows: list[dict], path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    f = [r["f"] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(f, [r["log2_f"] for r in rows], label="Biased guarantee log2 f")
    ax.plot(f, [r["log2_e"] for r in rows], label="Greedy guarantee log2 e")
    ax.plot(f, [r["mean_ent_greedy"] for r in rows], "o--", label="mean Ent(Greedy)")
    ax.plot(f, [r["mean_ent_biased"] for r in rows], "s--", label="mean Ent(Biased)")
    ax.axvline(math.e, color="grey", lw=0.8)
    ax.set_xlabel("average frequency f")
    ax.set_ylabel("bits")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def cmd_phase_transition(args) -> int:
    grid = parse_grid(args.f_grid)
    if any(f < 1 or f > args.m for f in grid):
        raise col.DomainError(f"every grid value must lie in [1, m={args.m}]")
    rows = phase_transition_rows(args.n, args.m, grid, args.seeds, args.seed)
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(PHASE_HEADER)
    for r in rows:
        w.writerow([fmt(r[k]) for k in PHASE_HEADER])
    if args.output in (None, "-"):
        sys.stdout.write(out.getvalue())
    else:
        Path(args.output).write_text(out.getvalue(), newline="\n")
    if args.svg:
        write_phase_svg(rows, args.svg)
    return EXIT_OK


def cmd_color(args) -> int:
    name, g = load_graph(args.graph)
    if args.f_alpha3:
        stats = col.f_alpha3(g)
        f = stats.f
    else:
        stats = None
        f = avg_frequency(col.to_set_cover(g, args.cap))
    coloring = col.biased_coloring(g, args.delta, args.cap)
    if args.heuristics == "on":
        coloring = col.apply_heuristics(g, coloring, args.cap)
    ent = coloring.entropy()
    _, ent_opt, certified = col.exact_coloring(g, args.cap, args.budget)
    print(f"graph: {name}")
    print(f"n: {g.n}  edges: {len(g.edges)}  max_degree: {g.max_degree}")
    if stats is not None:
        print(f"I: {stats.I}  M: {stats.M}  T: {stats.T}")
    print(f"f: {fmt(f)}")
    for k, cls in enumerate(coloring.classes, start=1):
        print(f"class {k}: " + " ".join(str(v) for v in cls))
    print(f"entropy: {fmt(ent)}")
    rhs = None
    if certified:
        bound = col.degree_corollary_bound(g, ent_opt, f)
        rhs, _ = theorem_bound(ent_opt, f, 1.0, g.n)
        print(f"ent_opt: {fmt(ent_opt)}")
        print(f"corollary_rhs: {fmt(rhs)}")
        print(f"degree_rhs: {fmt(bound.rhs)}" + ("  (below optimum: formula cannot hold here)" if bound.below_optimum else ""))
    else:
        print("ent_opt: unknown (budget exhausted)")
    if args.output:
        rec = SweepRecord(
            name, g.n, len(coloring.classes), f, args.delta, "biased-coloring", ent,
            ent_opt if certified else None, rhs,
            None if rhs is None else rhs - ent,
            None if rhs is None else (rhs - ent >= -1e-9),
        )
        _emit_csv([rec], args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.emit:
        if args.emit not in FIXTURES:
            raise col.DomainError(f"unknown fixture {args.emit!r}; known: {sorted(FIXTURES)}")
        text = col.format_graph(FIXTURES[args.emit]())
    elif args.kind == "graph":
        text = col.format_graph(random_graph(args.n, args.p, args.seed))
    else:
        text = format_instance(random_set_system(GenSpec(args.n, args.m, args.target_f, args.seed)))
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, newline="\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mesc", description="Minimum entropy set cover solvers and experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one instance")
    s.add_argument("--input", required=True, help="instance file or fixture id (paper-fig1)")
    s.add_argument("--algorithm", choices=["greedy", "biased", "biased-greedy", "exact"], default="biased-greedy")
    s.add_argument("--delta", type=float, default=1.0)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--output", help="also write a CSV row here")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("certify", help="bound certificates over a delta grid")
    s.add_argument("--input", required=True)
    s.add_argument("--delta-grid", default="0:1:0.25")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--output")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("sweep", help="random instances x delta grid")
    s.add_argument("--n", type=int, default=10)
    s.add_argument("--m", type=int, default=6)
    s.add_argument("--target-f", type=float, default=2.0)
    s.add_argument("--seeds", type=int, default=10)
    s.add_argument("--seed", type=int, default=0, help="first seed")
    s.add_argument("--delta-grid", default="0:1:0.25")
    s.add_argument("--exact", action="store_true", help="also run the exact oracle and certify")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--output")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("phase-transition", help="Greedy vs Biased guarantees and means across f")
    s.add_argument("--n", type=int, default=60)
    s.add_argument("--m", type=int, default=8)
    s.add_argument("--f-grid", default="1.5:4.0:0.25")
    s.add_argument("--seeds", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--output")
    s.add_argument("--svg")
    s.set_defaults(func=cmd_phase_transition)

    s = sub.add_parser("color", help="minimum entropy coloring with Biased")
    s.add_argument("--graph", required=True, help="graph file or fixture id (paper-fig1)")
    s.add_argument("--delta", type=float, default=1.0)
    s.add_argument("--heuristics", choices=["on", "off"], default="on")
    s.add_argument("--f-alpha3", action="store_true", help="compute f from complement counts (needs alpha <= 3)")
    s.add_argument("--cap", type=int, default=col.DEFAULT_CAP)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--output")
    s.set_defaults(func=cmd_color)

    s = sub.add_parser("gen", help="write generated instances, graphs or fixtures")
    s.add_argument("--kind", choices=["instance", "graph"], default="instance")
    s.add_argument("--n", type=int, default=10)
    s.add_argument("--m", type=int, default=6)
    s.add_argument("--target-f", type=float, default=2.0)
    s.add_argument("--p", type=float, default=0.5, help="edge probability for --kind graph")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--emit", help="write a named fixture instead (paper-fig1)")
    s.add_argument("--output")
    s.set_defaults(func=cmd_gen)
    return p


def _fail(kind: str, exc: Exception, code: int) -> int:
    print(json.dumps({"error": kind, "message": str(exc)}), file=sys.stderr)
    return code


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceeded, CapExceeded) as exc:
        return _fail("resource", exc, EXIT_RESOURCE)
    except (MescError, ValueError) as exc:
        return _fail("input", exc, EXIT_INPUT)
    except OSError as exc:
        return _fail("io", exc, EXIT_INPUT)


if __name__ == "__main__":
    sys.exit(main())
