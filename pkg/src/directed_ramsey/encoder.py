"""CNF encodings of "no transitive subtournament of size k".

Three encodings are provided:

* ``direct``  -- one clause per ordered k-tuple forbidding that transitive order;
* ``cycle``   -- one auxiliary variable per triple implying a 3-cycle there,
  and one clause per k-subset demanding some 3-cycle inside it;
* ``reduced`` -- ``direct`` after self-subsuming resolution and subsumption.

Edge variable for the pair ``i < j`` is true iff ``i -> j``.
"""

from __future__ import annotations

import enum
import functools
import itertools
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .tournament import Tournament, bits


class EncodingError(ValueError):
    pass


class KTooSmall(EncodingError):
    pass


class SizeOverflow(EncodingError):
    pass


class Edge(enum.IntEnum):
    UNSET = 0
    FORWARD = 1  # i -> j for i < j
    BACKWARD = 2  # j -> i


class PartialTournament:
    """Per-pair orientation state over ``n`` vertices; pairs indexed with ``i < j``."""

    def __init__(self, n: int, states: dict[tuple[int, int], Edge] | None = None):
        if n < 0:
            raise ValueError("negative order")
        self.n = n
        self._states: dict[tuple[int, int], Edge] = {}
        for (i, j), s in (states or {}).items():
            self.set(i, j, s)

    @classmethod
    def generic(cls, n: int) -> "PartialTournament":
        """``n`` vertices with every edge free."""
        return cls(n)

    @classmethod
    def from_tournament(cls, t: Tournament) -> "PartialTournament":
        p = cls(t.n)
        for i in range(t.n):
            for j in range(i + 1, t.n):
                p._states[i, j] = Edge.FORWARD if t.has_edge(i, j) else Edge.BACKWARD
        return p

    @classmethod
    def from_rows(cls, n: int, out_known: Sequence[int]) -> "PartialTournament":
        p = cls(n)
        for i in range(n):
            for j in bits(out_known[i]):
                p.orient(i, j)
        return p

    def set(self, i: int, j: int, state: Edge) -> None:
        if not (0 <= i < j < self.n):
            raise ValueError(f"pair ({i}, {j}) must satisfy 0 <= i < j < {self.n}")
        state = Edge(state)
        if state is Edge.UNSET:
            self._states.pop((i, j), None)
        else:
            self._states[i, j] = state

    def orient(self, a: int, b: int) -> None:
        """Fix the edge ``a -> b``."""
        if a < b:
            self.set(a, b, Edge.FORWARD)
        else:
            self.set(b, a, Edge.BACKWARD)

    def state(self, i: int, j: int) -> Edge:
        return self._states.get((i, j), Edge.UNSET)

    def fixed_edges(self) -> list[tuple[int, int]]:
        """Fixed edges as ``(tail, head)``, in pair order."""
        out = []
        for (i, j), s in sorted(self._states.items()):
            out.append((i, j) if s is Edge.FORWARD else (j, i))
        return out

    def is_complete(self) -> bool:
        return len(self._states) == self.n * (self.n - 1) // 2

    def to_rows(self) -> list[int]:
        rows = [0] * self.n
        for a, b in self.fixed_edges():
            rows[a] |= 1 << b
        return rows

    def to_tournament(self) -> Tournament:
        if not self.is_complete():
            raise EncodingError("partial tournament still has unset pairs")
        return Tournament(self.n, tuple(self.to_rows()))

    def __eq__(self, other):
        return isinstance(other, PartialTournament) and (self.n, self._states) == (
            other.n,
            other._states,
        )

    def __repr__(self):
        return f"PartialTournament(n={self.n}, fixed={len(self._states)})"


@dataclass
class VarMap:
    edge_var: dict[tuple[int, int], int] = field(default_factory=dict)
    cycle_var: dict[tuple[int, int, int], int] = field(default_factory=dict)

    @classmethod
    def for_order(cls, n: int, with_cycles: bool = False) -> "VarMap":
        vm = cls()
        for pair in itertools.combinations(range(n), 2):
            vm.edge_var[pair] = len(vm.edge_var) + 1
        if with_cycles:
            base = len(vm.edge_var)
            for t in itertools.combinations(range(n), 3):
                vm.cycle_var[t] = base + len(vm.cycle_var) + 1
        return vm

    @property
    def var_count(self) -> int:
        return len(self.edge_var) + len(self.cycle_var)

    def lit(self, a: int, b: int) -> int:
        """Literal meaning ``a -> b``."""
        return self.edge_var[a, b] if a < b else -self.edge_var[b, a]

    def to_text(self) -> str:
        lines = [f"{v} {i} {j}" for (i, j), v in self.edge_var.items()]
        lines += [f"{v} c {i} {j} {k}" for (i, j, k), v in self.cycle_var.items()]
        return "".join(line + "\n" for line in lines)

    @classmethod
    def from_text(cls, text: str) -> "VarMap":
        vm = cls()
        for lineno, line in enumerate(text.splitlines(), 1):
            parts = line.split()
            if not parts:
                continue
            try:
                if len(parts) == 3:
                    vm.edge_var[int(parts[1]), int(parts[2])] = int(parts[0])
                elif len(parts) == 5 and parts[1] == "c":
                    vm.cycle_var[int(parts[2]), int(parts[3]), int(parts[4])] = int(parts[0])
                else:
                    raise ValueError(line)
            except ValueError:
                raise EncodingError(f"varmap line {lineno}: cannot parse {line!r}") from None
        return vm


@dataclass
class CnfFormula:
    var_count: int
    clauses: list[list[int]]
    varmap: VarMap = field(default_factory=VarMap)
    order: int = 0
    k: int = 0

    def literal_count(self) -> int:
        return sum(len(c) for c in self.clauses)

    def check(self) -> None:
        """Raise if a clause is empty, out of range, tautological or has repeats."""
        for idx, c in enumerate(self.clauses):
            if not c:
                raise EncodingError(f"clause {idx} is empty")
            seen = set()
            for lit in c:
                if lit == 0 or abs(lit) > self.var_count:
                    raise EncodingError(f"clause {idx}: literal {lit} out of range")
                if -lit in seen:
                    raise EncodingError(f"clause {idx} is tautological")
                if lit in seen:
                    raise EncodingError(f"clause {idx} repeats literal {lit}")
                seen.add(lit)


def _check_args(n: int, k: int, fixed: PartialTournament | None) -> PartialTournament:
    if k < 3:
        raise KTooSmall(f"k must be at least 3, got {k}")
    if k > n:
        raise EncodingError(f"k={k} exceeds the order n={n}")
    if fixed is None:
        return PartialTournament(n)
    if fixed.n != n:
        raise EncodingError(f"fixed edges are over {fixed.n} vertices, expected {n}")
    return fixed


def _unit_clauses(vm: VarMap, fixed: PartialTournament) -> list[list[int]]:
    return [[vm.lit(a, b)] for a, b in fixed.fixed_edges()]


def encode_direct(n: int, k: int, fixed: PartialTournament | None = None) -> CnfFormula:
    fixed = _check_args(n, k, fixed)
    vm = VarMap.for_order(n)
    clauses = []
    for subset in itertools.combinations(range(n), k):
        for order in itertools.permutations(subset):
            clauses.append(
                [-vm.lit(order[x], order[y]) for x in range(k) for y in range(x + 1, k)]
            )
    clauses += _unit_clauses(vm, fixed)
    return CnfFormula(vm.var_count, clauses, vm, n, k)


def encode_cycle(n: int, k: int, fixed: PartialTournament | None = None) -> CnfFormula:
    fixed = _check_args(n, k, fixed)
    vm = VarMap.for_order(n, with_cycles=True)
    clauses = []
    for (a, b, c), x in vm.cycle_var.items():
        ab, ac, bc = vm.edge_var[a, b], vm.edge_var[a, c], vm.edge_var[b, c]
        clauses.append([-x, ab, ac])
        clauses.append([-x, -ab, bc])
        clauses.append([-x, -ac, -bc])
    for subset in itertools.combinations(range(n), k):
        clauses.append([vm.cycle_var[t] for t in itertools.combinations(subset, 3)])
    clauses += _unit_clauses(vm, fixed)
    return CnfFormula(vm.var_count, clauses, vm, n, k)


def self_subsume(f: CnfFormula) -> CnfFormula:
    """Self-subsuming resolution plus subsumption elimination, run to fixpoint.

    A clause ``D | ~x`` is strengthened to ``D`` whenever some clause ``C | x``
    has ``C`` contained in ``D``; clauses that contain another clause are
    dropped. Clauses are visited first-in first-out in generation order, the
    literals of a clause in their written order, and a strengthened clause
    goes to the back of the queue. Survivors keep their input order and
    their relative literal order.
    """
    lits = [list(c) for c in f.clauses]
    sets = [frozenset(c) for c in lits]
    alive = [True] * len(lits)
    stamp = [0] * len(lits)
    occurs: dict[int, set[int]] = defaultdict(set)
    for idx, c in enumerate(sets):
        for lit in c:
            occurs[lit].add(idx)

    def containing(pattern, exclude):
        ordered = sorted(pattern, key=lambda l: len(occurs[l]))
        found = set(occurs[ordered[0]])
        for lit in ordered[1:]:
            if not found:
                break
            found &= occurs[lit]
        found.discard(exclude)
        return sorted(found)

    def kill(j):
        alive[j] = False
        for lit in sets[j]:
            occurs[lit].discard(j)

    queue = deque((idx, 0) for idx in range(len(lits)))
    while queue:
        i, st = queue.popleft()
        if not alive[i] or st != stamp[i] or not sets[i]:
            continue
        ci = sets[i]
        for j in containing(ci, i):
            kill(j)
        for x in list(lits[i]):
            if not alive[i]:
                break
            for j in containing((ci - {x}) | {-x}, i):
                occurs[-x].discard(j)
                sets[j] = sets[j] - {-x}
                lits[j].remove(-x)
                stamp[j] += 1
                queue.append((j, stamp[j]))
                if sets[j] <= ci:
                    kill(i)
                    break
    kept = [c for c, ok in zip(lits, alive) if ok]
    return CnfFormula(f.var_count, kept, f.varmap, f.order, f.k)


@functools.lru_cache(maxsize=None)
def _reduced_template(k: int) -> tuple[tuple[tuple[int, int, bool], ...], ...]:
    """Reduced clauses of a single k-set as ``(i, j, positive)`` triples over 0..k-1."""
    f = self_subsume(encode_direct(k, k))
    pairs = {v: pair for pair, v in f.varmap.edge_var.items()}
    return tuple(
        tuple((*pairs[abs(lit)], lit > 0) for lit in clause) for clause in f.clauses
    )


def encode_reduced(n: int, k: int, fixed: PartialTournament | None = None) -> CnfFormula:
    """``self_subsume(encode_direct(n, k))`` followed by the fixed-edge units.

    The reduction never mixes clauses of different k-sets (every derived
    clause still touches all k vertices of its set), so the reduced clauses
    of one k-set are computed once and relabeled onto each set in generation
    order. The result is clause-for-clause identical to reducing the full
    direct encoding.
    """
    fixed = _check_args(n, k, fixed)
    vm = VarMap.for_order(n)
    template = _reduced_template(k)
    clauses = []
    for subset in itertools.combinations(range(n), k):
        for clause in template:
            clauses.append(
                [
                    vm.edge_var[subset[i], subset[j]] if pos else -vm.edge_var[subset[i], subset[j]]
                    for i, j, pos in clause
                ]
            )
    clauses += _unit_clauses(vm, fixed)
    return CnfFormula(vm.var_count, clauses, vm, n, k)


ENCODERS = {
    "direct": encode_direct,
    "cycle": encode_cycle,
    "reduced": encode_reduced,
}


def encode(n: int, k: int, fixed: PartialTournament | None = None, encoding: str = "reduced") -> CnfFormula:
    try:
        fn = ENCODERS[encoding]
    except KeyError:
        raise EncodingError(f"unknown encoding {encoding!r}; pick one of {sorted(ENCODERS)}") from None
    return fn(n, k, fixed)


def pivot_instance(
    inn: PartialTournament,
    out: PartialTournament,
    k: int,
    encoding: str = "reduced",
) -> CnfFormula:
    """``inn -> 1 -> out``: a pivot beaten by every ``inn`` vertex, beating every ``out`` vertex.

    Vertices ``0..|inn|-1`` are the in-neighbourhood, ``|inn|`` is the pivot and
    the rest are the out-neighbourhood. Edges between the two sides are free.
    """
    if k < 3:
        raise KTooSmall(f"k must be at least 3, got {k}")
    total = inn.n + out.n + 1
    if total > 64:
        raise SizeOverflow(f"pivot instance has {total} vertices; the limit is 64")
    p = inn.n
    fixed = PartialTournament(total)
    for a, b in inn.fixed_edges():
        fixed.orient(a, b)
    for a, b in out.fixed_edges():
        fixed.orient(p + 1 + a, p + 1 + b)
    for a in range(inn.n):
        fixed.orient(a, p)
    for b in range(out.n):
        fixed.orient(p, p + 1 + b)
    return encode(total, k, fixed, encoding)


# -- DIMACS ---------------------------------------------------------------------------

def emit_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.var_count} {len(f.clauses)}\n"]
    lines += [" ".join(map(str, c)) + " 0\n" for c in f.clauses]
    return "".join(lines)


def parse_dimacs(text: str) -> CnfFormula:
    var_count = None
    declared = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("c") or s.startswith("%"):
            continue
        if s.startswith("p"):
            parts = s.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise EncodingError(f"line {lineno}: bad header {s!r}")
            var_count, declared = int(parts[2]), int(parts[3])
            continue
        if var_count is None:
            raise EncodingError(f"line {lineno}: clause before header")
        for tok in s.split():
            try:
                lit = int(tok)
            except ValueError:
                raise EncodingError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        raise EncodingError("last clause is not zero-terminated")
    if var_count is None:
        raise EncodingError("missing 'p cnf' header")
    if declared != len(clauses):
        raise EncodingError(f"header declares {declared} clauses, found {len(clauses)}")
    return CnfFormula(var_count, clauses)


def write_instance(f: CnfFormula, cnf_path, map_path=None) -> None:
    """Write ``f`` as DIMACS plus its varmap sidecar (default ``<cnf>.map``)."""
    from pathlib import Path

    cnf_path = Path(cnf_path)
    cnf_path.write_text(emit_dimacs(f))
    map_path = Path(map_path) if map_path else cnf_path.with_suffix(cnf_path.suffix + ".map")
    map_path.write_text(f.varmap.to_text())


def unit_propagate(clauses: Iterable[Sequence[int]], assumptions: Iterable[int]) -> set[int] | None:
    """Literals implied by unit propagation; ``None`` on conflict."""
    assigned = set(assumptions)
    clauses = [list(c) for c in clauses]
    changed = True
    while changed:
        changed = False
        for c in clauses:
            if any(lit in assigned for lit in c):
                continue
            open_lits = [lit for lit in c if -lit not in assigned]
            if not open_lits:
                return None
            if len(open_lits) == 1:
                assigned.add(open_lits[0])
                changed = True
    return assigned
