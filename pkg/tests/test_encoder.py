import itertools
import math

import pytest
from hypothesis import given, strategies as st

from conftest import tournaments
from oracles import brute_max_transitive, eval_cnf
from directed_ramsey.encoder import (
    ENCODERS,
    CnfFormula,
    Edge,
    EncodingError,
    KTooSmall,
    PartialTournament,
    SizeOverflow,
    VarMap,
    emit_dimacs,
    encode,
    encode_cycle,
    encode_direct,
    encode_reduced,
    parse_dimacs,
    pivot_instance,
    self_subsume,
    unit_propagate,
    write_instance,
)
from directed_ramsey.tournament import Tournament, count_3cycles, three_cycle

AB, AC, BC = 1, 2, 3


def as_sets(clauses):
    return sorted(sorted(c) for c in clauses)


def edge_assignment(t, vm):
    return {v: t.has_edge(i, j) for (i, j), v in vm.edge_var.items()}


def cycle_assignment(t, vm):
    a = edge_assignment(t, vm)
    for (x, y, z), v in vm.cycle_var.items():
        a[v] = count_3cycles(t.induced([x, y, z])) == 1
    return a


class TestDirect:
    def test_three_three_golden(self):
        f = encode_direct(3, 3)
        want = [
            [AB, AC, BC],
            [AB, AC, -BC],
            [-AB, AC, BC],
            [-AB, -AC, BC],
            [-AB, -AC, -BC],
            [AB, -AC, -BC],
        ]
        assert as_sets(f.clauses) == as_sets(want)
        assert f.var_count == 3

    def test_four_four(self):
        f = encode_direct(4, 4)
        assert len(f.clauses) == 24
        assert {len(c) for c in f.clauses} == {6}

    @pytest.mark.parametrize("n,k", [(5, 3), (6, 4), (7, 5)])
    def test_clause_count(self, n, k):
        f = encode_direct(n, k)
        assert len(f.clauses) == math.factorial(k) * math.comb(n, k)
        f.check()

    def test_fixed_adds_units(self):
        fixed = PartialTournament(3)
        fixed.orient(0, 1)
        f = encode_direct(3, 3, fixed)
        assert len(f.clauses) == 7
        assert f.clauses[-1] == [AB]

    def test_backward_fixed_edge(self):
        fixed = PartialTournament(3)
        fixed.orient(2, 0)
        assert encode_direct(3, 3, fixed).clauses[-1] == [-AC]

    def test_k_too_small(self):
        with pytest.raises(KTooSmall):
            encode_direct(5, 2)

    def test_k_above_n(self):
        with pytest.raises(EncodingError):
            encode_direct(3, 4)

    def test_fixed_order_mismatch(self):
        with pytest.raises(EncodingError):
            encode_direct(4, 3, PartialTournament(3))


class TestCycle:
    def test_four_four_golden(self):
        f = encode_cycle(4, 4)
        assert len(f.clauses) == 13
        assert f.var_count == 10
        vm = f.varmap
        abc = vm.cycle_var[0, 1, 2]
        ab, ac, bc = vm.edge_var[0, 1], vm.edge_var[0, 2], vm.edge_var[1, 2]
        assert [-abc, ab, ac] in f.clauses
        assert [-abc, -ab, bc] in f.clauses
        assert [-abc, -ac, -bc] in f.clauses
        subset = [c for c in f.clauses if len(c) == 4]
        assert subset == [sorted(vm.cycle_var.values())]

    def test_three_three(self):
        f = encode_cycle(3, 3)
        assert len(f.clauses) == 4 and f.var_count == 4
        assert f.clauses[-1] == [4]

    @pytest.mark.parametrize("n,k", [(5, 4), (7, 4), (8, 5)])
    def test_clause_count(self, n, k):
        f = encode_cycle(n, k)
        assert len(f.clauses) == 3 * math.comb(n, 3) + math.comb(n, k)
        f.check()

    def test_edge_vars_before_cycle_vars(self):
        vm = encode_cycle(6, 4).varmap
        assert max(vm.edge_var.values()) < min(vm.cycle_var.values())
        assert sorted(vm.edge_var.values()) + sorted(vm.cycle_var.values()) == list(
            range(1, vm.var_count + 1)
        )

    def test_five_four_models_are_tt4_free(self):
        f = encode_cycle(5, 4)
        vm = f.varmap
        names = sorted(vm.edge_var.values())
        for code in range(1 << 10):
            t = Tournament.from_upper_bits(5, code)
            ok = eval_cnf(f.clauses, cycle_assignment(t, vm))
            assert ok == (brute_max_transitive(t) < 4)
        assert names == list(range(1, 11))


class TestSelfSubsume:
    def test_example_three(self):
        r = self_subsume(encode_direct(3, 3))
        assert as_sets(r.clauses) == as_sets([[AB, AC], [-AB, BC], [-AC, -BC]])

    def test_fixpoint(self):
        once = self_subsume(encode_direct(4, 4))
        assert self_subsume(once).clauses == once.clauses

    def test_seven_four_literal_reduction(self):
        d = encode_direct(7, 4)
        r = self_subsume(d)
        assert r.literal_count() <= d.literal_count() / 2

    def test_strengthens_and_subsumes(self):
        f = CnfFormula(3, [[1, 2], [-1, 2, 3], [2, 3]])
        assert as_sets(self_subsume(f).clauses) == as_sets([[1, 2], [2, 3]])

    def test_empty(self):
        assert self_subsume(CnfFormula(0, [])).clauses == []

    @pytest.mark.parametrize("n,k", [(3, 3), (5, 3), (6, 4), (7, 4), (7, 5)])
    def test_reduced_matches_full_pass(self, n, k):
        assert encode_reduced(n, k).clauses == self_subsume(encode_direct(n, k)).clauses


class TestReduced:
    def test_three_three(self):
        assert len(encode_reduced(3, 3).clauses) == 3

    def test_arc_consistency_example(self):
        f = encode_reduced(3, 3)
        implied = unit_propagate(f.clauses, [-AB])
        assert AC in implied and -BC in implied

    def test_five_four_same_models_as_direct(self):
        d, r = encode_direct(5, 4), encode_reduced(5, 4)
        for code in range(1 << 10):
            t = Tournament.from_upper_bits(5, code)
            a = edge_assignment(t, d.varmap)
            assert eval_cnf(d.clauses, a) == eval_cnf(r.clauses, a)

    def test_fixed_units_after_reduction(self):
        fixed = PartialTournament(4)
        fixed.orient(3, 1)
        f = encode_reduced(4, 3, fixed)
        assert f.clauses[-1] == [-f.varmap.edge_var[1, 3]]
        assert f.clauses[:-1] == encode_reduced(4, 3).clauses


@given(tournaments(min_n=3, max_n=7), st.integers(3, 7))
def test_all_encodings_accept_exactly_tt_free(t, k):
    if k > t.n:
        return
    free = brute_max_transitive(t) < k
    for name in ("direct", "reduced"):
        f = ENCODERS[name](t.n, k)
        assert eval_cnf(f.clauses, edge_assignment(t, f.varmap)) == free
    f = encode_cycle(t.n, k)
    assert eval_cnf(f.clauses, cycle_assignment(t, f.varmap)) == free


def test_encode_dispatch():
    assert encode(4, 3, encoding="direct").clauses == encode_direct(4, 3).clauses
    assert encode(4, 3).clauses == encode_reduced(4, 3).clauses
    with pytest.raises(EncodingError):
        encode(4, 3, encoding="bogus")


class TestPartial:
    def test_orient_and_state(self):
        p = PartialTournament(4)
        p.orient(3, 1)
        assert p.state(1, 3) is Edge.BACKWARD
        assert p.fixed_edges() == [(3, 1)]
        assert not p.is_complete()

    def test_round_trip(self):
        t = three_cycle()
        p = PartialTournament.from_tournament(t)
        assert p.is_complete() and p.to_tournament() == t

    def test_generic(self):
        assert PartialTournament.generic(5).fixed_edges() == []


class TestPivot:
    def test_cycle_to_one_generic_unsat(self):
        # brute force: every completion has a TT3 through the pivot
        inn = PartialTournament.from_tournament(three_cycle())
        f = pivot_instance(inn, PartialTournament(1), 3)
        vm = f.varmap
        for code in range(1 << 10):
            t = Tournament.from_upper_bits(5, code)
            assert not eval_cnf(f.clauses, edge_assignment(t, vm))

    def test_structure(self):
        tt2 = PartialTournament.from_tournament(Tournament.transitive(2))
        f = pivot_instance(tt2, tt2, 4, encoding="direct")
        units = {c[0] for c in f.clauses if len(c) == 1}
        vm = f.varmap
        want = {vm.lit(0, 1), vm.lit(3, 4), vm.lit(0, 2), vm.lit(1, 2), vm.lit(2, 3), vm.lit(2, 4)}
        assert units == want
        # cross edges stay free
        for a in (0, 1):
            for b in (3, 4):
                assert vm.lit(a, b) not in units and -vm.lit(a, b) not in units

    def test_overflow(self):
        with pytest.raises(SizeOverflow):
            pivot_instance(PartialTournament(40), PartialTournament(30), 5)

    def test_k_too_small(self):
        with pytest.raises(KTooSmall):
            pivot_instance(PartialTournament(2), PartialTournament(2), 2)


class TestDimacs:
    def test_empty(self):
        assert emit_dimacs(CnfFormula(0, [])) == "p cnf 0 0\n"

    def test_example_one_header(self):
        text = emit_dimacs(encode_direct(3, 3))
        lines = text.splitlines()
        assert lines[0] == "p cnf 3 6" and len(lines) == 7
        assert all(line.endswith(" 0") for line in lines[1:])

    @pytest.mark.parametrize("enc", sorted(ENCODERS))
    def test_round_trip(self, enc):
        f = encode(6, 4, encoding=enc)
        g = parse_dimacs(emit_dimacs(f))
        assert g.var_count == f.var_count and g.clauses == f.clauses

    def test_comments_and_wrapped_clauses(self):
        g = parse_dimacs("c hi\np cnf 3 2\n1 -2\n 3 0 -1 0\n")
        assert g.clauses == [[1, -2, 3], [-1]]

    def test_bad_header(self):
        with pytest.raises(EncodingError, match="line 1"):
            parse_dimacs("p dnf 3 2\n")

    def test_bad_literal(self):
        with pytest.raises(EncodingError, match="line 2"):
            parse_dimacs("p cnf 3 1\n1 x 0\n")

    def test_clause_before_header(self):
        with pytest.raises(EncodingError):
            parse_dimacs("1 2 0\n")

    def test_write_instance(self, tmp_path):
        f = encode_cycle(5, 4)
        write_instance(f, tmp_path / "x.cnf")
        assert parse_dimacs((tmp_path / "x.cnf").read_text()).clauses == f.clauses
        vm = VarMap.from_text((tmp_path / "x.cnf.map").read_text())
        assert vm == f.varmap

    def test_varmap_bad_line(self):
        with pytest.raises(EncodingError, match="line 2"):
            VarMap.from_text("1 0 1\nnope\n")


@given(st.lists(st.lists(st.integers(-6, 6).filter(bool), min_size=1, max_size=4), max_size=12))
def test_self_subsume_preserves_models(raw):
    clauses = [list(dict.fromkeys(c)) for c in raw if not any(-x in c for x in c)]
    f = CnfFormula(6, clauses)
    r = self_subsume(f)
    for bits in itertools.product((False, True), repeat=6):
        a = {v + 1: bits[v] for v in range(6)}
        assert eval_cnf(f.clauses, a) == eval_cnf(r.clauses, a)
