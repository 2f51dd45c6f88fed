import pytest

from directed_ramsey.artifacts import (
    ARTIFACT_NAMES,
    DERIVED,
    Claim,
    InvariantViolation,
    NamedArtifact,
    ParseError,
    UnknownName,
    artifact_text,
    doubly_regular_summary,
    load_artifact,
    parse_external_db,
    qr23,
    verify_artifact,
)
from directed_ramsey.catalog import Catalog
from directed_ramsey.tournament import (
    count_3cycles,
    h_tournament,
    has_tt_k,
    max_transitive,
    to_matrix_text,
)


@pytest.mark.parametrize("name", ARTIFACT_NAMES)
def test_every_artifact_verifies(name):
    report = verify_artifact(load_artifact(name))
    failed = [r.label for r in report.results if not r.passed]
    assert report.passed, failed


def test_orders():
    orders = {name: load_artifact(name).tournament.n for name in ARTIFACT_NAMES}
    assert orders == {"FIG2_33": 33, "FIG3_9": 9, "Y7": 7, "Y8": 8, "H6": 6, "H6C": 6, "QR23": 23}


def test_fig2_33_exact_transitivity():
    t = load_artifact("FIG2_33").tournament
    assert max_transitive(t) == 6


def test_fig3_9_cycles():
    t = load_artifact("fig3_9").tournament
    assert count_3cycles(t) == 17


def test_y_cycle_counts():
    assert count_3cycles(load_artifact("Y7").tournament) == 8
    assert count_3cycles(load_artifact("Y8").tournament) == 15


def test_embedding_notes_reported():
    notes = verify_artifact(load_artifact("Y7")).notes
    assert any(n.startswith("Y7 in Y8: yes") for n in notes)
    assert "Y7 in FIG3_9: no" in notes


def test_failed_claim_reported():
    a = NamedArtifact("X", h_tournament(6), [Claim("TT_5-free", lambda t: not has_tt_k(t, 5), DERIVED)])
    r = verify_artifact(a)
    assert not r.passed and r.results[0].source == DERIVED


def test_crashing_claim_is_a_failure():
    a = NamedArtifact("X", h_tournament(6), [Claim("boom", lambda t: 1 / 0)])
    assert not verify_artifact(a).passed


def test_unknown_name():
    with pytest.raises(UnknownName):
        load_artifact("FIG9")
    with pytest.raises(UnknownName):
        artifact_text("QR23")


def test_text_round_trip():
    for name in ARTIFACT_NAMES:
        if name == "QR23":
            continue
        t = load_artifact(name).tournament
        assert to_matrix_text(t).split() == [
            line for line in artifact_text(name).split() if not line.startswith("#")
        ]


class TestExternal:
    def test_matrix_round_trip(self, tmp_path):
        a = load_artifact("FIG2_33").tournament
        b = qr23()
        (tmp_path / "db.txt").write_text(to_matrix_text(a) + "\n# next\n" + to_matrix_text(b))
        db = parse_external_db(tmp_path / "db.txt", expect_count=2)
        assert db.tournaments == [a, b]

    def test_hex(self, tmp_path):
        Catalog(6, 23, [qr23()], True).write(tmp_path / "c.txt")
        db = parse_external_db(tmp_path / "c.txt", format="hex")
        assert db.tournaments == [qr23()]
        summary = doubly_regular_summary(db)
        assert summary == {"count": 1, "doubly_regular": 1, "distinct_classes": 1, "tt6_free": 1}

    def test_truncated_matrix_has_position(self, tmp_path):
        text = to_matrix_text(qr23()).splitlines()
        (tmp_path / "db.txt").write_text("\n".join(text[:-1]) + "\n")
        with pytest.raises(ParseError) as info:
            parse_external_db(tmp_path / "db.txt")
        assert info.value.line == 1

    def test_truncated_row(self, tmp_path):
        text = to_matrix_text(qr23()).splitlines()
        text[5] = text[5][:10]
        (tmp_path / "db.txt").write_text("\n".join(text) + "\n")
        with pytest.raises(ParseError) as info:
            parse_external_db(tmp_path / "db.txt")
        assert info.value.line == 6 and "line 6" in str(info.value)

    def test_bad_character_column(self, tmp_path):
        (tmp_path / "db.txt").write_text("010\n0x1\n100\n")
        with pytest.raises(ParseError) as info:
            parse_external_db(tmp_path / "db.txt")
        assert (info.value.line, info.value.offset) == (2, 2)

    def test_not_a_tournament(self, tmp_path):
        (tmp_path / "db.txt").write_text("011\n001\n100\n")
        with pytest.raises(InvariantViolation):
            parse_external_db(tmp_path / "db.txt")

    def test_count_mismatch(self, tmp_path):
        (tmp_path / "db.txt").write_text(to_matrix_text(qr23()))
        with pytest.raises(InvariantViolation, match="expected 37"):
            parse_external_db(tmp_path / "db.txt", expect_count=37)

    def test_bad_hex(self, tmp_path):
        (tmp_path / "c.txt").write_text("tournament-catalog v1 n=3 k=4 complete=1 count=1\nzz\n")
        with pytest.raises(ParseError, match="line 2"):
            parse_external_db(tmp_path / "c.txt", format="hex")

    def test_bad_format(self, tmp_path):
        (tmp_path / "x").write_text("")
        with pytest.raises(ValueError):
            parse_external_db(tmp_path / "x", format="json")
