"""End-to-end computations behind the command line: small Ramsey numbers,
cycle-count bounds and pivot instances."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .encoder import CnfFormula, PartialTournament, encode, pivot_instance
from .solver import SolverConfig, Status, decode_model, solve
from .tournament import (
    Tournament,
    average_cycles_per_edge,
    max_3cycles_bound,
    min_tt3_count,
)


def pivot_fixing(n: int) -> PartialTournament:
    """Edges ``0 -> 1 .. 0 -> n//2``.

    Any n-tournament has a vertex of out-degree at least ``ceil((n-1)/2)``;
    relabel it 0 and that many of its out-neighbours ``1..``. Fixing these
    edges keeps satisfiability unchanged and removes a lot of symmetry.
    """
    p = PartialTournament.generic(n)
    for j in range(1, n // 2 + 1):
        p.orient(0, j)
    return p


@dataclass
class RamseyStep:
    n: int
    status: Status
    clauses: int
    wall_time: float
    witness: Tournament | None = None


@dataclass
class RamseyReport:
    k: int
    encoding: str
    value: int | None
    steps: list[RamseyStep] = field(default_factory=list)

    @property
    def resolved(self) -> bool:
        return self.value is not None


def ramsey(
    k: int,
    n_max: int | None = None,
    encoding: str = "reduced",
    cfg: SolverConfig | None = None,
    symmetry: bool = True,
) -> RamseyReport:
    """Smallest n whose TT_k-free formula is UNSAT, trying n = k, k+1, ...

    Every SAT model is decoded and re-checked to be TT_k-free. An UNKNOWN
    answer (timeout) ends the scan with an unresolved report.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if k == 2:
        # any edge is a TT_2; no formula needed
        return RamseyReport(k, encoding, 2)
    cfg = cfg or SolverConfig()
    n_max = n_max if n_max is not None else 64
    report = RamseyReport(k, encoding, None)
    for n in range(k, n_max + 1):
        fixed = pivot_fixing(n) if symmetry else None
        f = encode(n, k, fixed, encoding)
        start = time.perf_counter()
        outcome = solve(f, cfg)
        wall = time.perf_counter() - start
        step = RamseyStep(n, outcome.status, len(f.clauses), wall)
        report.steps.append(step)
        if outcome.status is Status.SAT:
            step.witness = decode_model(outcome, f.varmap, n, k)
        elif outcome.status is Status.UNSAT:
            report.value = n
            break
        else:
            break
    return report


@dataclass
class BoundsReport:
    n: int
    min_tt3: int
    max_cycles: Fraction
    avg_cycles_per_edge: Fraction
    d_cap: int

    def avg_unreduced(self) -> str:
        """The average as ``cycles / (edges / 3)`` when that is integral."""
        edges = math.comb(self.n, 2)
        if self.avg_cycles_per_edge.denominator == 1:
            return str(self.avg_cycles_per_edge)
        if edges % 3 == 0 and self.max_cycles.denominator == 1:
            return f"{self.max_cycles.numerator}/{edges // 3}"
        return str(self.avg_cycles_per_edge)

    def notes(self) -> list[str]:
        out = []
        if self.n == 23:
            out.append(
                f"tt3 count {self.min_tt3}: C(23,3) - {self.min_tt3} = {math.comb(23, 3) - self.min_tt3}; "
                "the figure 1256 sometimes printed for this count is a digit swap "
                f"(C(23,3) - 1256 = {math.comb(23, 3) - 1256})"
            )
        return out


def bounds(n: int) -> BoundsReport:
    mc = max_3cycles_bound(n)
    avg = average_cycles_per_edge(n)
    return BoundsReport(n, min_tt3_count(n), mc, avg, math.floor(avg))


def load_side(t: Tournament | None, generic: int = 0) -> PartialTournament:
    """A pivot side: a fixed tournament, or ``generic`` free vertices."""
    if t is None:
        return PartialTournament.generic(generic)
    return PartialTournament.from_tournament(t)


def pivot_check(
    inn: Tournament | None,
    out: Tournament | None,
    k: int,
    inn_generic: int = 0,
    out_generic: int = 0,
    encoding: str = "reduced",
    cfg: SolverConfig | None = None,
) -> tuple[CnfFormula, object, Tournament | None]:
    """Solve ``inn -> 1 -> out``; a SAT answer is decoded and re-verified."""
    x = load_side(inn, inn_generic)
    y = load_side(out, out_generic)
    f = pivot_instance(x, y, k, encoding)
    outcome = solve(f, cfg or SolverConfig())
    t = None
    if outcome.status is Status.SAT:
        t = decode_model(outcome, f.varmap, f.order, k)
    return f, outcome, t
