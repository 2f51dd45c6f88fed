"""Published tournaments, their checkable claims, and external tournament files."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable

from .catalog import Catalog, CatalogFormatError
from .tournament import (
    Tournament,
    TournamentError,
    are_isomorphic,
    count_3cycles,
    count_tt3,
    degree_profile,
    find_subtournament,
    from_circulant,
    h_complement,
    h_tournament,
    has_tt_k,
    max_transitive,
    parse_matrix_text,
    quadratic_residues,
    reverse,
)

ARTIFACT_NAMES = ("FIG2_33", "FIG3_9", "Y7", "Y8", "H6", "H6C", "QR23")

_FILES = {
    "FIG2_33": "fig2_33.txt",
    "FIG3_9": "fig3_9.txt",
    "Y7": "y7.txt",
    "Y8": "y8.txt",
    "H6": "h6.txt",
    "H6C": "h6c.txt",
}

# Claim provenance tags shown in reports.
PUBLISHED = "PUBLISHED"
DERIVED = "DERIVED"


class UnknownName(KeyError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, offset: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {offset}" if offset is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.offset = offset


class InvariantViolation(ValueError):
    pass


@dataclass(frozen=True)
class Claim:
    label: str
    check: Callable[[Tournament], bool]
    source: str = PUBLISHED


@dataclass
class NamedArtifact:
    name: str
    tournament: Tournament
    claims: list[Claim] = field(default_factory=list)


@dataclass
class ClaimResult:
    label: str
    source: str
    passed: bool


@dataclass
class ArtifactReport:
    name: str
    results: list[ClaimResult]
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def _read_data(filename: str) -> str:
    return resources.files("directed_ramsey").joinpath("data", filename).read_text()


def qr23() -> Tournament:
    return from_circulant(23, quadratic_residues(23))


def _claims(name: str) -> list[Claim]:
    if name == "FIG2_33":
        return [
            Claim("order 33", lambda t: t.n == 33),
            Claim("TT_7-free", lambda t: not has_tt_k(t, 7)),
            Claim("contains TT_6 (forced since R(6) = 28)", lambda t: has_tt_k(t, 6), DERIVED),
        ]
    if name == "FIG3_9":
        return [
            Claim("order 9", lambda t: t.n == 9),
            # the caption only says "many cycles"; 17 is the brute-force triple count
            Claim("exactly 17 three-cycles", lambda t: count_3cycles(t) == 17, DERIVED),
        ]
    if name == "Y7":
        return [
            Claim("order 7", lambda t: t.n == 7),
            Claim("TT_6-free", lambda t: not has_tt_k(t, 6), DERIVED),
        ]
    if name == "Y8":
        return [
            Claim("order 8", lambda t: t.n == 8),
            Claim("TT_6-free", lambda t: not has_tt_k(t, 6), DERIVED),
        ]
    if name == "H6":
        return [
            Claim("equals h_tournament(6)", lambda t: t == h_tournament(6)),
            Claim("contains TT_5", lambda t: has_tt_k(t, 5)),
            Claim("TT_6-free", lambda t: not has_tt_k(t, 6)),
        ]
    if name == "H6C":
        return [
            Claim("equals h_complement(6)", lambda t: t == h_complement(6)),
            Claim("isomorphic to reverse(H_6)", lambda t: are_isomorphic(t, reverse(h_tournament(6)))),
            Claim("max transitive subtournament is 5", lambda t: max_transitive(t) == 5),
        ]
    if name == "QR23":
        return [
            Claim("doubly regular", lambda t: degree_profile(t).is_doubly_regular),
            Claim("5 common out-neighbours per pair", lambda t: degree_profile(t).common_out_count == 5, DERIVED),
            Claim("TT_6-free", lambda t: not has_tt_k(t, 6)),
            Claim("506 three-cycles", lambda t: count_3cycles(t) == 506),
            Claim("1265 transitive triples", lambda t: count_tt3(t) == 1265, DERIVED),
        ]
    raise UnknownName(name)


def load_artifact(name: str) -> NamedArtifact:
    key = name.upper()
    if key not in ARTIFACT_NAMES:
        raise UnknownName(f"unknown artifact {name!r}; known: {', '.join(ARTIFACT_NAMES)}")
    if key == "QR23":
        t = qr23()
    else:
        t = parse_matrix_text(_read_data(_FILES[key]))
    return NamedArtifact(key, t, _claims(key))


def artifact_text(name: str) -> str:
    """Embedded matrix text exactly as shipped (QR23 is generated)."""
    key = name.upper()
    if key not in _FILES:
        raise UnknownName(name)
    return _read_data(_FILES[key])


def _embedding_notes(a: NamedArtifact) -> list[str]:
    """Embeddings between the Y graphs and FIG3_9; reported, never asserted."""
    if a.name not in ("Y7", "Y8", "FIG3_9"):
        return []
    notes = []
    pairs = {"Y7": ["Y8", "FIG3_9"], "Y8": ["FIG3_9"], "FIG3_9": []}[a.name]
    for host_name in pairs:
        host = load_artifact(host_name).tournament
        emb = find_subtournament(host, a.tournament)
        notes.append(
            f"{a.name} in {host_name}: " + ("yes at " + ",".join(map(str, emb)) if emb else "no")
        )
    return notes


def verify_artifact(a: NamedArtifact) -> ArtifactReport:
    results = []
    for claim in a.claims:
        try:
            ok = bool(claim.check(a.tournament))
        except Exception:  # a crashing check is a failed claim
            ok = False
        results.append(ClaimResult(claim.label, claim.source, ok))
    return ArtifactReport(a.name, results, _embedding_notes(a))


# -- external files --------------------------------------------------------------------

@dataclass
class ExternalDb:
    path: Path
    format: str
    tournaments: list[Tournament]


def _parse_matrix_blocks(text: str) -> list[Tournament]:
    """Concatenated square 0/1 matrices separated by blank or '#' lines."""
    blocks: list[list[tuple[int, str]]] = [[]]
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            if blocks[-1]:
                blocks.append([])
            continue
        bad = next((i for i, ch in enumerate(line) if ch not in "01"), None)
        if bad is not None:
            raise ParseError(f"unexpected character {line[bad]!r}", lineno, bad + 1)
        blocks[-1].append((lineno, line))
    out = []
    for block in blocks:
        if not block:
            continue
        width = len(block[0][1])
        for lineno, line in block:
            if len(line) != width:
                raise ParseError(f"row has {len(line)} columns, expected {width}", lineno)
        if len(block) != width:
            raise ParseError(
                f"matrix starting here has {len(block)} rows but {width} columns", block[0][0]
            )
        try:
            out.append(parse_matrix_text("\n".join(line for _, line in block)))
        except TournamentError as exc:
            raise InvariantViolation(f"line {block[0][0]}: {exc}") from None
    return out


def parse_external_db(path, format: str = "matrix", expect_count: int | None = None) -> ExternalDb:
    """Read tournaments from a matrix-text or catalog-hex file.

    ``expect_count`` (e.g. 37 for the doubly-regular 23-vertex list) turns a
    count mismatch into an :class:`InvariantViolation`.
    """
    path = Path(path)
    text = path.read_text()
    if format == "matrix":
        tournaments = _parse_matrix_blocks(text)
    elif format == "hex":
        try:
            tournaments = Catalog.from_text(text).entries
        except CatalogFormatError as exc:
            raise ParseError(str(exc)) from None
        except TournamentError as exc:
            raise InvariantViolation(str(exc)) from None
    else:
        raise ValueError(f"unknown format {format!r} (matrix or hex)")
    if expect_count is not None and len(tournaments) != expect_count:
        raise InvariantViolation(f"expected {expect_count} tournaments, found {len(tournaments)}")
    return ExternalDb(path, format, tournaments)


def doubly_regular_summary(db: ExternalDb, k: int = 6) -> dict[str, int]:
    """Counts for the 23-vertex doubly-regular screen: how many are TT_k-free."""
    from .tournament import canonical_form

    forms = {canonical_form(t) for t in db.tournaments}
    return {
        "count": len(db.tournaments),
        "doubly_regular": sum(degree_profile(t).is_doubly_regular for t in db.tournaments),
        "distinct_classes": len(forms),
        f"tt{k}_free": sum(not has_tt_k(t, k) for t in db.tournaments),
    }
