"""Tournament values and the kernel operations built on them."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from . import kernels

MAX_ORDER = 64


class TournamentError(ValueError):
    """Base class for invalid tournament input."""


class NotSquare(TournamentError):
    pass


class SelfLoop(TournamentError):
    pass


class NotAntisymmetric(TournamentError):
    pass


class NotTournamentResidueSet(TournamentError):
    pass


class NotPrime(TournamentError):
    pass


class OrderTooSmall(TournamentError):
    pass


class NoSuchEdge(TournamentError):
    pass


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Tournament:
    """Complete orientation on vertices ``0..n-1``.

    ``out_rows[i]`` is a bitmask whose bit ``j`` is set iff ``i -> j``.
    Instances are immutable and validated on construction.
    """

    n: int
    out_rows: tuple[int, ...]

    def __post_init__(self):
        n = self.n
        if not 2 <= n <= MAX_ORDER:
            raise OrderTooSmall(f"tournament order must be in 2..{MAX_ORDER}, got {n}")
        if len(self.out_rows) != n:
            raise NotSquare(f"expected {n} rows, got {len(self.out_rows)}")
        full = (1 << n) - 1
        for i, row in enumerate(self.out_rows):
            if row & ~full:
                raise NotSquare(f"row {i} has bits beyond column {n - 1}")
            if (row >> i) & 1:
                raise SelfLoop(f"vertex {i} has a self-loop")
        for i in range(n):
            for j in range(i + 1, n):
                fwd = (self.out_rows[i] >> j) & 1
                bwd = (self.out_rows[j] >> i) & 1
                if fwd == bwd:
                    what = "both directions" if fwd else "no edge"
                    raise NotAntisymmetric(f"pair ({i}, {j}) has {what}")

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]]) -> "Tournament":
        n = len(rows)
        out = []
        for i, row in enumerate(rows):
            if len(row) != n:
                raise NotSquare(f"row {i} has length {len(row)}, expected {n}")
            m = 0
            for j, x in enumerate(row):
                if x not in (0, 1):
                    raise TournamentError(f"entry ({i}, {j}) is {x!r}, expected 0 or 1")
                if x:
                    m |= 1 << j
            out.append(m)
        return cls(n, tuple(out))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Tournament":
        out = [0] * n
        for i, j in edges:
            out[i] |= 1 << j
        return cls(n, tuple(out))

    @classmethod
    def transitive(cls, n: int) -> "Tournament":
        """TT_n with ``i -> j`` whenever ``i < j``."""
        full = (1 << n) - 1
        return cls(n, tuple(full & ~((1 << (i + 1)) - 1) for i in range(n)))

    @classmethod
    def from_upper_bits(cls, n: int, value: int) -> "Tournament":
        """Inverse of :meth:`upper_bits`."""
        out = [0] * n
        pos = n * (n - 1) // 2 - 1
        for i in range(n):
            for j in range(i + 1, n):
                if (value >> pos) & 1:
                    out[i] |= 1 << j
                else:
                    out[j] |= 1 << i
                pos -= 1
        return cls(n, tuple(out))

    # -- accessors --------------------------------------------------------------

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.out_rows[i] >> j) & 1)

    def out_mask(self, v: int) -> int:
        return self.out_rows[v]

    def in_mask(self, v: int) -> int:
        return ((1 << self.n) - 1) & ~self.out_rows[v] & ~(1 << v)

    def out_degrees(self) -> list[int]:
        return [r.bit_count() for r in self.out_rows]

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in bits(self.out_rows[i])]

    def to_matrix(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.out_rows]

    def upper_bits(self) -> int:
        """Upper triangle, row-major over ``i < j``, first pair most significant."""
        value = 0
        for i in range(self.n):
            r = self.out_rows[i]
            for j in range(i + 1, self.n):
                value = (value << 1) | ((r >> j) & 1)
        return value

    def induced(self, vertices: Sequence[int]) -> "Tournament":
        """Subtournament on ``vertices``, relabeled in the given order."""
        pos = {v: p for p, v in enumerate(vertices)}
        rows = []
        for v in vertices:
            r = 0
            for w in bits(self.out_rows[v]):
                p = pos.get(w)
                if p is not None:
                    r |= 1 << p
            rows.append(r)
        return Tournament(len(vertices), tuple(rows))

    def permute(self, perm: Sequence[int]) -> "Tournament":
        """Relabel vertex ``v`` as ``perm[v]``."""
        rows = [0] * self.n
        for v in range(self.n):
            r = 0
            for w in bits(self.out_rows[v]):
                r |= 1 << perm[w]
            rows[perm[v]] = r
        return Tournament(self.n, tuple(rows))

    def __str__(self):
        return to_matrix_text(self)


# -- matrix text format --------------------------------------------------------

def to_matrix_text(t: Tournament) -> str:
    return "".join(
        "".join("1" if (r >> j) & 1 else "0" for j in range(t.n)) + "\n" for r in t.out_rows
    )


def parse_matrix_text(text: str) -> Tournament:
    """Read ``n`` lines of ``n`` 0/1 characters; ``#`` lines and blanks are skipped."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if set(line) - {"0", "1"}:
            raise TournamentError(f"line {lineno}: unexpected character in {line!r}")
        rows.append([int(ch) for ch in line])
    if not rows:
        raise NotSquare("no matrix rows found")
    return Tournament.from_matrix(rows)


# -- named constructions --------------------------------------------------------

def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def quadratic_residues(p: int) -> frozenset[int]:
    if p % 2 == 0 or not is_prime(p):
        raise NotPrime(f"{p} is not an odd prime")
    return frozenset((x * x) % p for x in range(1, p))


def from_circulant(n: int, residues: Iterable[int]) -> Tournament:
    """Circulant on Z_n: ``u -> v`` iff ``(v - u) mod n`` is in ``residues``."""
    res = {r % n for r in residues}
    for x in range(1, n):
        if (x in res) == ((n - x) in res):
            raise NotTournamentResidueSet(
                f"exactly one of {x} and {n - x} must be a residue"
            )
    if 0 in res:
        raise NotTournamentResidueSet("0 cannot be a residue")
    rows = []
    for u in range(n):
        r = 0
        for x in res:
            r |= 1 << ((u + x) % n)
        rows.append(r)
    return Tournament(n, tuple(rows))


def three_cycle() -> Tournament:
    return from_circulant(3, {1})


def h_tournament(n: int) -> Tournament:
    """TT_{n-3} on vertices ``0..n-4`` beating a 3-cycle on the last three."""
    if n < 4:
        raise OrderTooSmall(f"H_n needs n >= 4, got {n}")
    m = n - 3
    edges = [(i, j) for i in range(m) for j in range(i + 1, n)]
    a, b, c = m, m + 1, m + 2
    edges += [(a, b), (b, c), (c, a)]
    return Tournament.from_edges(n, edges)


def h_complement(n: int) -> Tournament:
    """A 3-cycle on ``0, 1, 2`` beating a TT_{n-3} on the rest.

    Isomorphic to ``reverse(h_tournament(n))``; this labelling is the one used
    when the matrix is written out by hand.
    """
    if n < 4:
        raise OrderTooSmall(f"H_n needs n >= 4, got {n}")
    edges = [(0, 1), (1, 2), (2, 0)]
    edges += [(i, j) for i in range(3) for j in range(3, n)]
    edges += [(i, j) for i in range(3, n) for j in range(i + 1, n)]
    return Tournament.from_edges(n, edges)


# -- degree structure -------------------------------------------------------------

class DegreeProfile(NamedTuple):
    out_degrees: tuple[int, ...]
    is_regular: bool
    is_doubly_regular: bool
    common_out_count: int | None


def degree_profile(t: Tournament) -> DegreeProfile:
    degs = tuple(t.out_degrees())
    n = t.n
    regular = n % 2 == 1 and all(d == (n - 1) // 2 for d in degs)
    counts = {
        (t.out_rows[i] & t.out_rows[j]).bit_count()
        for i in range(n)
        for j in range(n)
        if i != j
    }
    common = counts.pop() if len(counts) == 1 else None
    doubly = regular and common is not None and n % 4 == 3 and common == (n - 3) // 4
    return DegreeProfile(degs, regular, doubly, common)


def reverse(t: Tournament) -> Tournament:
    return Tournament(t.n, tuple(t.in_mask(v) for v in range(t.n)))


# -- transitive subtournaments --------------------------------------------------------

def max_transitive(t: Tournament) -> int:
    return kernels.max_transitive(t.out_rows, t.n)


def has_tt_k(t: Tournament, k: int) -> bool:
    if k <= 1:
        return True
    return kernels.max_transitive(t.out_rows, t.n, k) >= k


def transitive_witness(t: Tournament, k: int) -> tuple[int, ...] | None:
    """Some TT_k as vertices in dominance order, or ``None``."""
    return kernels.transitive_witness(t.out_rows, t.n, k)


def is_transitive_set(t: Tournament, vertices: Iterable[int]) -> bool:
    """Score-sequence test: inside the set, out-degrees are exactly 0..m-1."""
    vs = list(vertices)
    m = mask_of(vs)
    scores = sorted((t.out_rows[v] & m).bit_count() for v in vs)
    return scores == list(range(len(vs)))


# -- triangle counting -------------------------------------------------------------

def count_tt3(t: Tournament) -> int:
    return sum(math.comb(d, 2) for d in t.out_degrees())


def count_3cycles(t: Tournament) -> int:
    return math.comb(t.n, 3) - count_tt3(t)


def balanced_degrees(n: int) -> list[int]:
    """The most nearly equal out-degree sequence of an n-vertex tournament."""
    if n % 2:
        return [(n - 1) // 2] * n
    return [n // 2] * (n // 2) + [n // 2 - 1] * (n // 2)


def min_tt3_count(n: int) -> int:
    return sum(math.comb(d, 2) for d in balanced_degrees(n))


def max_3cycles_bound(n: int) -> Fraction:
    """Largest possible number of 3-cycles among n-vertex tournaments, exact."""
    if n < 3:
        raise OrderTooSmall(f"need n >= 3, got {n}")
    if n % 2:
        return Fraction(n * (n + 1) * (n - 1), 24)
    return Fraction(math.comb(n, 3) - min_tt3_count(n))


def average_cycles_per_edge(n: int) -> Fraction:
    """Upper bound on the mean number of 3-cycles through an edge."""
    return 3 * max_3cycles_bound(n) / math.comb(n, 2)


# -- embedding ---------------------------------------------------------------------

def find_subtournament(t: Tournament, s: Tournament) -> tuple[int, ...] | None:
    """Host vertex for each pattern vertex of an induced copy of ``s``, or ``None``."""
    return kernels.embed(t.out_rows, t.n, s.out_rows, s.n)


def contains_subtournament(t: Tournament, s: Tournament) -> bool:
    return find_subtournament(t, s) is not None


# -- canonical form ------------------------------------------------------------------

EXHAUSTIVE_CANON_MAX_N = 5


def _rows_key(n: int, rows: Sequence[int]) -> bytes:
    return bytes([n]) + b"".join(r.to_bytes(8, "big") for r in rows)


def canonical_labeling(t: Tournament) -> tuple[Tournament, tuple[int, ...]]:
    """Canonical representative and ``order`` with ``order[p]`` = source vertex."""
    n = t.n
    if n <= EXHAUSTIVE_CANON_MAX_N:
        best = None
        for order in itertools.permutations(range(n)):
            pos = [0] * n
            for p, v in enumerate(order):
                pos[v] = p
            rows = tuple(sum(1 << pos[w] for w in bits(t.out_rows[v])) for v in order)
            if best is None or rows < best[0]:
                best = (rows, order)
        rows, order = best
    else:
        rows, order = kernels.canonical_labeling(t.out_rows, n)
    return Tournament(n, tuple(rows)), tuple(order)


def canonical_form(t: Tournament) -> bytes:
    """Byte string equal for two tournaments iff they are isomorphic."""
    rep, _ = canonical_labeling(t)
    return _rows_key(rep.n, rep.out_rows)


def are_isomorphic(t1: Tournament, t2: Tournament) -> bool:
    if t1.n != t2.n or sorted(t1.out_degrees()) != sorted(t2.out_degrees()):
        return False
    return canonical_form(t1) == canonical_form(t2)


# -- block decomposition ----------------------------------------------------------------

class BlockDecomposition(NamedTuple):
    u: int
    v: int
    a: int  # common out-neighbours
    b: int  # u -> w -> v
    c: int  # common in-neighbours
    d: int  # v -> w -> u, the 3-cycles through (u, v)

    @property
    def sizes(self) -> tuple[int, int, int, int]:
        return (self.a.bit_count(), self.b.bit_count(), self.c.bit_count(), self.d.bit_count())


def block_decomposition(t: Tournament, u: int, v: int) -> BlockDecomposition:
    if u == v or not t.has_edge(u, v):
        raise NoSuchEdge(f"no edge {u} -> {v}")
    ou, ov = t.out_rows[u], t.out_rows[v]
    iu, iv = t.in_mask(u), t.in_mask(v)
    return BlockDecomposition(u, v, ou & ov, ou & iv, iu & iv, ov & iu)


def min_cycle_edge(t: Tournament) -> tuple[int, int]:
    """Edge with the fewest 3-cycles through it; lexicographically first on ties."""
    best = None
    for u in range(t.n):
        for v in bits(t.out_rows[u]):
            d = (t.out_rows[v] & t.in_mask(u)).bit_count()
            if best is None or (d, u, v) < best:
                best = (d, u, v)
    return best[1], best[2]
