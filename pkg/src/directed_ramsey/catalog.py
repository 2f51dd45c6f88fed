"""Isomorph-free catalogs of TT_k-free tournaments.

Two generators live here:

* vertex extension (:func:`extend_catalog`), which adds one vertex to every
  entry of a complete catalog and branches on its edges under propagation;
* block assembly (:func:`build_catalog`), which fixes an edge ``u -> v`` with
  few 3-cycles through it, splits the remaining vertices into the four blocks
  A (common out), B (u -> w -> v), C (common in) and D (v -> w -> u), fills the
  blocks from smaller catalogs and glues them A-B, B-C, then A-C, then D.

Vertex layout used by block assembly: ``u = 0``, ``v = 1``, then A, B, C, D in
consecutive ranges.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Sequence

from . import kernels
from .encoder import PartialTournament
from .tournament import (
    Tournament,
    average_cycles_per_edge,
    balanced_degrees,
    canonical_form,
    contains_subtournament,
    has_tt_k,
    reverse,
)

log = logging.getLogger(__name__)

# R(k) for the orders where it is known exactly.
RAMSEY = {1: 1, 2: 2, 3: 4, 4: 8, 5: 14, 6: 28}

# Neighbourhood bound implied by a block of order R(k-2)-1, keyed by k.
# For k = 6 the block is ST_7; any TT_5-free tournament containing ST_7 has at
# most 11 vertices (published uniqueness data for TT_5-free tournaments).
ST_CONTAINMENT_CAP = {6: 11}


class CatalogError(ValueError):
    pass


class UnknownSmallerRamsey(CatalogError):
    pass


class IncompletePartCatalog(CatalogError):
    pass


class CatalogFormatError(CatalogError):
    pass


class Contradiction:
    """Returned by :func:`propagate` when no TT_k-free completion exists."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Contradiction"

    def __bool__(self):
        return False


CONTRADICTION = Contradiction()


class CaseTuple(NamedTuple):
    a: int
    b: int
    c: int
    d: int
    n: int
    k: int

    @property
    def sizes(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


@dataclass
class Catalog:
    k: int
    n: int
    entries: list[Tournament] = field(default_factory=list)
    complete: bool = False
    forms: list[bytes] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if not self.forms and self.entries:
            self.forms = [canonical_form(t) for t in self.entries]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def form_set(self) -> frozenset[bytes]:
        return frozenset(self.forms)

    def check(self) -> None:
        if len(set(self.forms)) != len(self.forms):
            raise CatalogError("catalog has isomorphic duplicates")
        for t in self.entries:
            if t.n != self.n:
                raise CatalogError(f"entry of order {t.n} in an order-{self.n} catalog")
            if has_tt_k(t, self.k):
                raise CatalogError(f"entry contains TT_{self.k}")

    # -- hex file format ----------------------------------------------------------

    def to_text(self) -> str:
        width = -(-math.comb(self.n, 2) // 4)
        lines = [
            f"tournament-catalog v1 n={self.n} k={self.k} "
            f"complete={int(self.complete)} count={len(self.entries)}"
        ]
        lines += [format(t.upper_bits(), f"0{width}x") for t in self.entries]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Catalog":
        lines = text.splitlines()
        if not lines:
            raise CatalogFormatError("line 1: empty catalog file")
        head = lines[0].split()
        if head[:2] != ["tournament-catalog", "v1"]:
            raise CatalogFormatError("line 1: missing 'tournament-catalog v1' header")
        try:
            meta = dict(tok.split("=", 1) for tok in head[2:])
            n, k = int(meta["n"]), int(meta["k"])
            complete, count = meta["complete"] == "1", int(meta["count"])
        except (KeyError, ValueError) as exc:
            raise CatalogFormatError(f"line 1: bad header field ({exc})") from None
        width = -(-math.comb(n, 2) // 4)
        entries = []
        for lineno, line in enumerate(lines[1:], 2):
            line = line.strip()
            if not line:
                continue
            if len(line) != width:
                raise CatalogFormatError(f"line {lineno}: expected {width} hex digits, got {len(line)}")
            try:
                value = int(line, 16)
            except ValueError:
                raise CatalogFormatError(f"line {lineno}: not lowercase hex") from None
            if line != line.lower():
                raise CatalogFormatError(f"line {lineno}: hex must be lowercase")
            entries.append(Tournament.from_upper_bits(n, value))
        if len(entries) != count:
            raise CatalogFormatError(f"header promises {count} entries, found {len(entries)}")
        return cls(k, n, entries, complete)

    def write(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def read(cls, path) -> "Catalog":
        return cls.from_text(Path(path).read_text())


def _dedupe(tournaments: Iterable[Tournament], seen: dict[bytes, Tournament] | None = None):
    seen = {} if seen is None else seen
    for t in tournaments:
        seen.setdefault(canonical_form(t), t)
    return seen


def _catalog_from(k: int, n: int, found: Mapping[bytes, Tournament], complete: bool) -> Catalog:
    keys = sorted(found)
    return Catalog(k, n, [found[f] for f in keys], complete, keys)


# -- propagation ---------------------------------------------------------------

def propagate(p: PartialTournament, k: int) -> PartialTournament | Contradiction:
    """Close ``p`` under the forcing rule: an unset pair whose one orientation
    would finish a TT_k among already-set edges takes the other orientation."""
    rows = kernels.propagate(p.to_rows(), p.n, k)
    if rows is None:
        return CONTRADICTION
    return PartialTournament.from_rows(p.n, rows)


# -- admissible block sizes ------------------------------------------------------

def _ramsey(k: int) -> int:
    if k <= 0:
        return 0
    try:
        return RAMSEY[k]
    except KeyError:
        raise UnknownSmallerRamsey(f"R({k}) is not in the built-in table") from None


def admissible_cases(n: int, k: int, st_cap: Mapping[int, int] | None = None) -> list[CaseTuple]:
    """Block-size tuples ``(a, b, c, d)`` that a TT_k-free n-tournament must realise.

    Every TT_k-free tournament (or its reversal) has an edge ``u -> v`` whose
    blocks fit one of these tuples: take an edge with the fewest 3-cycles
    through it, reverse the whole tournament if ``|A| < |C|``.

    ``st_cap`` maps k to the largest TT_{k-1}-free neighbourhood able to hold
    a block of order R(k-2)-1; defaults to the built-in table.
    """
    if k < 3:
        raise CatalogError("k must be at least 3")
    if n < 3:
        raise CatalogError("n must be at least 3")
    block_max = _ramsey(k - 2) - 1
    nbhd_max = _ramsey(k - 1) - 1
    avg = average_cycles_per_edge(n)
    d_max = min(nbhd_max, math.floor(avg))
    caps = ST_CONTAINMENT_CAP if st_cap is None else st_cap
    st_cap_k = caps.get(k)
    balanced = set(balanced_degrees(n))

    cases = []
    for a in range(block_max + 1):
        for b in range(block_max + 1):
            for c in range(min(a, block_max) + 1):
                d = n - 2 - a - b - c
                if not 0 <= d <= d_max:
                    continue
                # out(u) = {v} + A + B, in(u) = C + D, out(v) = A + D, in(v) = {u} + B + C
                nbhds = {
                    "out_u": (a + b + 1, (a, b)),
                    "in_u": (c + d, (c,)),
                    "out_v": (a + d, (a,)),
                    "in_v": (b + c + 1, (b, c)),
                }
                if any(size > nbhd_max for size, _ in nbhds.values()):
                    continue
                if st_cap_k is not None and any(
                    size > st_cap_k and block_max in blocks for size, blocks in nbhds.values()
                ):
                    continue
                # d at the cycle average means every edge is at the average,
                # hence the 3-cycle count is maximal and the degrees balanced
                if avg.denominator == 1 and d == avg:
                    if any(size not in balanced for size in (a + b + 1, c + d, a + d, b + c + 1)):
                        continue
                cases.append(CaseTuple(a, b, c, d, n, k))
    return cases


# -- vertex extension ---------------------------------------------------------------

def base_catalog(k: int) -> Catalog:
    """Order-2 catalog: TT_2 when k >= 3, empty otherwise."""
    if k < 2:
        raise CatalogError("k must be at least 2")
    entries = [Tournament.transitive(2)] if k >= 3 else []
    return Catalog(k, 2, entries, True)


def _extensions(t: Tournament, k: int) -> list[Tournament]:
    n = t.n + 1
    rows = list(t.out_rows) + [0]
    pairs = [(i, t.n) for i in range(t.n)]
    return [Tournament(n, tuple(r)) for r in kernels.complete(rows, n, k, pairs)]


def extend_catalog(cat: Catalog, pattern: Tournament | None = None) -> Catalog:
    """All TT_k-free one-vertex extensions of ``cat``, up to isomorphism.

    With ``pattern`` given, extensions containing it are dropped as well.
    """
    if not cat.complete:
        raise IncompletePartCatalog("extend_catalog needs a complete catalog")
    if cat.n + 1 > 64:
        raise CatalogError("order would exceed 64")
    found: dict[bytes, Tournament] = {}
    for t in cat.entries:
        ext = _extensions(t, cat.k)
        if pattern is not None:
            ext = [e for e in ext if not contains_subtournament(e, pattern)]
        _dedupe(ext, found)
    return _catalog_from(cat.k, cat.n + 1, found, True)


def catalog_by_extension(n: int, k: int) -> Catalog:
    """Complete catalog of TT_k-free n-tournaments grown from order 2."""
    if n < 2:
        raise CatalogError("catalogs start at order 2")
    cat = base_catalog(k)
    while cat.n < n:
        cat = extend_catalog(cat)
    return cat


def tt_and_pattern_free_search(k: int, pattern: Tournament, max_n: int) -> dict[int, Catalog]:
    """Catalogs of tournaments free of TT_k and of ``pattern``, order by order.

    Stops early once an order comes out empty; that order is included.
    """
    if max_n < 2:
        raise CatalogError("max_n must be at least 2")
    cat = base_catalog(k)
    if pattern.n <= 2 and cat.entries and contains_subtournament(cat.entries[0], pattern):
        cat = Catalog(k, 2, [], True)
    result = {2: cat}
    while cat.n < max_n and cat.entries:
        cat = extend_catalog(cat, pattern)
        result[cat.n] = cat
    return result


def largest_nonempty(catalogs: Mapping[int, Catalog]) -> Catalog | None:
    full = [c for c in catalogs.values() if c.entries]
    return max(full, key=lambda c: c.n) if full else None


# -- block assembly ---------------------------------------------------------------

def part_catalogs_for(n: int, k: int) -> dict[tuple[int, int], Catalog]:
    """Every part catalog the admissible cases of ``(n, k)`` may ask for."""
    cases = admissible_cases(n, k)
    need: set[tuple[int, int]] = set()
    for case in cases:
        for size in (case.a, case.b, case.c):
            if size >= 2:
                need.add((size, k - 2))
        if case.d >= 2:
            need.add((case.d, k - 1))
    parts: dict[tuple[int, int], Catalog] = {}
    for kk in sorted({kk for _, kk in need}):
        top = max(size for size, k2 in need if k2 == kk)
        cat = base_catalog(kk)
        parts[2, kk] = cat
        while cat.n < top:
            cat = extend_catalog(cat)
            parts[cat.n, kk] = cat
    return parts


def _block_choices(size: int, kk: int, parts: Mapping[tuple[int, int], Catalog]) -> list[tuple[int, ...]]:
    if size <= 1:
        return [(0,) * size] if kk > size else []
    cat = parts.get((size, kk))
    if cat is None or not cat.complete:
        raise IncompletePartCatalog(f"need a complete catalog of TT_{kk}-free order-{size} tournaments")
    return [t.out_rows for t in cat.entries]


def _layout(case: CaseTuple) -> tuple[list[int], list[int], list[int], list[int]]:
    start = 2
    blocks = []
    for size in case.sizes:
        blocks.append(list(range(start, start + size)))
        start += size
    return tuple(blocks)


def _base_rows(case: CaseTuple, contents) -> list[int]:
    """u, v, the u/v edges that define every block, and each block's interior."""
    A, B, C, D = _layout(case)
    rows = [0] * case.n
    rows[0] |= 1 << 1
    for w in A:
        rows[0] |= 1 << w
        rows[1] |= 1 << w
    for w in B:
        rows[0] |= 1 << w
        rows[w] |= 1 << 1
    for w in C:
        rows[w] |= 1 << 0
        rows[w] |= 1 << 1
    for w in D:
        rows[1] |= 1 << w
        rows[w] |= 1 << 0
    for block, local in zip((A, B, C, D), contents):
        for li, w in enumerate(block):
            for lj in range(len(block)):
                if (local[li] >> lj) & 1:
                    rows[w] |= 1 << block[lj]
    return rows


def _restrict(rows: Sequence[int], verts: Sequence[int]) -> list[int]:
    out = []
    for v in verts:
        r = 0
        for li, w in enumerate(verts):
            if (rows[v] >> w) & 1:
                r |= 1 << li
        out.append(r)
    return out


def _lift_into(rows: list[int], local: Sequence[int], verts: Sequence[int]) -> None:
    for li, v in enumerate(verts):
        r = local[li]
        while r:
            low = r & -r
            rows[v] |= 1 << verts[low.bit_length() - 1]
            r ^= low


def _cross_pairs(verts: Sequence[int], X: Sequence[int], Y: Sequence[int]) -> list[tuple[int, int]]:
    """Local indices of the pairs between X and Y, lexicographic."""
    pos = {v: i for i, v in enumerate(verts)}
    pairs = {tuple(sorted((pos[x], pos[y]))) for x in X for y in Y}
    return sorted(pairs)


def _glue(rows: Sequence[int], verts: Sequence[int], X, Y, k: int, limit: int = 0) -> list[list[int]]:
    """TT_k-free orientations of X x Y on the subproblem ``verts``, lifted back."""
    local = _restrict(rows, verts)
    pairs = _cross_pairs(verts, X, Y)
    out = []
    for sol in kernels.complete(local, len(verts), k, pairs, limit):
        lifted = list(rows)
        _lift_into(lifted, sol, verts)
        out.append(lifted)
    return out


def _merge(r1: Sequence[int], r2: Sequence[int]) -> list[int] | None:
    merged = [a | b for a, b in zip(r1, r2)]
    for i, r in enumerate(merged):
        if r & (1 << i):
            return None
    for i, r in enumerate(merged):
        rr = r
        while rr:
            low = rr & -rr
            j = low.bit_length() - 1
            if (merged[j] >> i) & 1:
                return None
            rr ^= low
    return merged


def abc_blocks(case: CaseTuple, contents, limit: int = 0) -> list[list[int]]:
    """All TT_k-free fillings of u, v, A, B, C for fixed block interiors (D left out)."""
    A, B, C, _ = _layout(case)
    k = case.k
    rows = _base_rows(case, contents)
    uv = [0, 1]
    ab = _glue(rows, uv + A + B, A, B, k)
    if not ab:
        return []
    bc = _glue(rows, uv + B + C, B, C, k)
    if not bc:
        return []
    verts = uv + A + B + C
    found = []
    for r_ab in ab:
        for r_bc in bc:
            merged = _merge(r_ab, r_bc)
            if merged is None:
                continue
            left = 0 if not limit else limit - len(found)
            found.extend(_glue(merged, verts, A, C, k, left))
            if limit and len(found) >= limit:
                return found
    return found


def _contents_iter(case: CaseTuple, parts):
    k = case.k
    choices = [
        _block_choices(case.a, k - 2, parts),
        _block_choices(case.b, k - 2, parts),
        _block_choices(case.c, k - 2, parts),
        _block_choices(case.d, k - 1, parts),
    ]
    return itertools.product(*choices)


def abc_feasible(case: CaseTuple, parts: Mapping[tuple[int, int], Catalog]) -> bool:
    """Whether u, v, A, B, C alone admit a TT_k-free filling for some block contents."""
    seen = set()
    for contents in _contents_iter(case, parts):
        key = contents[:3]
        if key in seen:
            continue
        seen.add(key)
        if abc_blocks(case, contents + ((0,) * case.d,), limit=1):
            return True
    return False


def assemble_case(case: CaseTuple, parts: Mapping[tuple[int, int], Catalog]) -> list[Tournament]:
    """TT_k-free tournaments realising ``case`` at the edge ``0 -> 1``, deduplicated."""
    A, B, C, D = _layout(case)
    abc = A + B + C
    found: dict[bytes, Tournament] = {}
    for contents in _contents_iter(case, parts):
        for rows in abc_blocks(case, contents):
            if D:
                full = _glue(rows, list(range(case.n)), D, abc, case.k)
            else:
                full = [rows] if kernels.propagate(rows, case.n, case.k) is not None else []
            _dedupe((Tournament(case.n, tuple(r)) for r in full), found)
    log.debug("case %s: %d classes", case.sizes, len(found))
    return list(found.values())


def _assemble_forms(args):
    case, parts = args
    return [(canonical_form(t), t) for t in assemble_case(case, parts)]


def build_catalog(
    n: int,
    k: int,
    parts: Mapping[tuple[int, int], Catalog] | None = None,
    workers: int = 1,
) -> Catalog:
    """Complete catalog of TT_k-free n-tournaments by block assembly."""
    if parts is None:
        parts = part_catalogs_for(n, k)
    cases = admissible_cases(n, k)
    found: dict[bytes, Tournament] = {}
    jobs = [(case, parts) for case in cases]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(_assemble_forms, jobs))
    else:
        batches = [_assemble_forms(job) for job in jobs]
    for batch in batches:
        for form, t in batch:
            found.setdefault(form, t)
    for t in list(found.values()):
        _dedupe([reverse(t)], found)
    return _catalog_from(k, n, found, True)
