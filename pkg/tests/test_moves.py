from __future__ import annotations

from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from claspkit.alexander import alexander
from claspkit.core import EMPTY, parse_diagram, random_diagram
from claspkit.errors import ConfigError, DomainError, ParseError
from claspkit.moves import (
    C4Rule,
    MoveInstance,
    applicable_moves,
    apply_A,
    apply_B,
    apply_C1,
    apply_C2,
    apply_C4,
    apply_move,
    c1_insert,
    c2_insert,
    c4_matches,
    embed_pattern,
    equiv_search,
    inverse_move,
    load_c4_rules,
    parse_c4_rules,
    replay,
    validate_c4_rule,
)
from claspkit.vassiliev import v2v3

from conftest import diagrams

P = parse_diagram
TREFOIL = P("1-3:2:+ 2-4:1:+")
BASIC = ["A", "B", "C1_delete", "C1_insert", "C2_delete", "C2_insert"]


def shipped_rules():
    path = resources.files("claspkit").joinpath("data").joinpath("c4_block_reversal.txt")
    return parse_c4_rules(path.read_text())


# -- A and B ----------------------------------------------------------------------

def test_A_examples():
    assert apply_A(P("1-2:1:+ 3-4:2:-"), 1).key == "1-2:2:+ 3-4:1:-"
    with pytest.raises(DomainError):
        apply_A(TREFOIL, 1)
    with pytest.raises(DomainError):
        apply_A(P("1-2:1:+ 3-4:2:-"), 2)


@given(diagrams(6, min_chords=2), st.data())
def test_A_is_an_involution(d, data):
    k = data.draw(st.integers(1, d.n - 1))
    try:
        e = apply_A(d, k)
    except DomainError:
        return
    assert apply_A(e, k) == d


def test_B_examples():
    assert apply_B(TREFOIL, 1).key == "1-3:1:+ 2-4:2:+"
    with pytest.raises(DomainError):
        apply_B(EMPTY, 1)


@given(diagrams(6, min_chords=1))
def test_B_cyclicity(d):
    e = d
    for _ in range(d.n):
        e = apply_B(e, 1)
    assert e == d
    assert apply_B(apply_B(d, 1), -1) == d


# -- C1 and C2 -------------------------------------------------------------------

def test_C1_examples():
    assert apply_C1(P("1-2:1:+"), 1) == EMPTY
    assert apply_C1(P("1-4:2:+ 2-3:1:-"), 2).key == "1-2:1:+"
    with pytest.raises(DomainError):
        apply_C1(TREFOIL, 1)


@given(diagrams(5), st.data())
def test_C1_insert_then_delete(d, data):
    gap = data.draw(st.integers(0, 2 * d.n))
    slot = data.draw(st.integers(0, d.n))
    sign = data.draw(st.sampled_from((1, -1)))
    inst = MoveInstance("C1_insert", gap=gap, slot=slot, sign=sign)
    e = apply_move(d, inst)
    assert e.n == d.n + 1
    back = inverse_move(d, inst)
    assert apply_move(e, back) == d


def test_C2_examples():
    assert apply_C2(P("1-4:1:+ 2-3:2:-"), (1, 2)) == EMPTY
    assert apply_C2(P("1-4:2:- 2-3:1:+"), (1, 2)) == EMPTY
    with pytest.raises(DomainError):
        apply_C2(P("1-4:1:+ 2-3:2:+"), (1, 2))
    with pytest.raises(DomainError):
        apply_C2(P("1-3:1:+ 2-4:2:-"), (1, 2))


def test_C2_pair_may_enclose_other_endpoints():
    d = P("1-6:2:+ 2-5:3:- 3-4:1:+")
    assert apply_C2(d, (1, 2)).key == "1-2:1:+"


@given(diagrams(4), st.data())
def test_C2_insert_then_delete(d, data):
    g1 = data.draw(st.integers(0, 2 * d.n))
    g2 = data.draw(st.integers(g1, 2 * d.n))
    inst = MoveInstance("C2_insert", gap=g1, gap2=g2, slot=data.draw(st.integers(0, d.n)),
                        sign=data.draw(st.sampled_from((1, -1))), order=data.draw(st.sampled_from((1, -1))))
    e = apply_move(d, inst)
    back = inverse_move(d, inst)
    assert back.kind == "C2_delete"
    assert apply_move(e, back) == d
    # and deleting then re-inserting recovers e
    again = inverse_move(e, back)
    assert apply_move(d, again) == e


def test_c1_and_c2_insert_argument_checks():
    with pytest.raises(DomainError):
        c1_insert(EMPTY, 1, 0, 1)
    with pytest.raises(DomainError):
        c2_insert(TREFOIL, 3, 0, 1, gap2=2)


# -- enumeration of legal moves -------------------------------------------------------

def test_applicable_moves_examples():
    assert len(applicable_moves(EMPTY, ["C1_insert"], max_chords=1)) == 2
    assert applicable_moves(P("1-2:1:+"), ["C1_delete"]) == [MoveInstance("C1_delete", chords=(1,))]
    assert applicable_moves(TREFOIL, ["A"]) == []


def test_insertions_respect_the_chord_budget():
    assert applicable_moves(TREFOIL, ["C1_insert", "C2_insert"], max_chords=2) == []
    assert len(applicable_moves(TREFOIL, ["C1_insert"], max_chords=3)) == 5 * 3 * 2


@given(diagrams(5))
def test_every_listed_move_applies(d):
    for inst in applicable_moves(d, BASIC, max_chords=d.n + 2):
        e = apply_move(d, inst)
        assert apply_move(e, inverse_move(d, inst)) == d


@settings(max_examples=60, deadline=None)
@given(diagrams(6))
def test_moves_preserve_invariants(d):
    before = (alexander(d), v2v3(d))
    for inst in applicable_moves(d, BASIC, max_chords=d.n + 1):
        e = apply_move(d, inst)
        assert (alexander(e), v2v3(e)) == before, inst


# -- C4 rule machinery ------------------------------------------------------------------

def test_rule_file_parsing():
    rules = shipped_rules()
    assert len(rules) == 1 and rules[0].lhs.n == 4
    with pytest.raises(ParseError):
        parse_c4_rules("rhs: empty")
    with pytest.raises(ParseError):
        parse_c4_rules("lhs: 1-2:1:+ 3-4:2:+ 5-6:3:+ 7-8:4:+")
    with pytest.raises(ParseError):
        parse_c4_rules("foo: bar")
    with pytest.raises(DomainError):
        parse_c4_rules("lhs: 1-2:1:+\nrhs: 1-2:1:-")


def test_missing_rule_file(tmp_path):
    with pytest.raises(ConfigError):
        load_c4_rules(tmp_path / "nope.txt")


def test_C4_without_rules_is_a_config_error():
    with pytest.raises(ConfigError):
        apply_C4(TREFOIL, MoveInstance("C4_forward", chords=(1, 2, 3, 4), rule=0), rules=[])


def test_C4_forward_backward_round_trip(rng):
    rules = shipped_rules()
    applied = 0
    for _ in range(300):
        ctx = random_diagram(int(rng.integers(0, 4)), rng)
        m = ctx.n
        pos = (rng.choice(2 * m + 8, size=8, replace=False) + 1).tolist()
        d = embed_pattern(ctx, rules[0].lhs, pos, int(rng.integers(0, m + 1)))
        for inst in applicable_moves(d, ["C4_forward"], rules=rules):
            e = apply_move(d, inst, rules)
            back = inverse_move(d, inst, rules)
            assert back.kind == "C4_backward"
            assert apply_move(e, back, rules) == d
            assert alexander(e) == alexander(d)
            applied += 1
    assert applied >= 300


def test_C4_no_match():
    rules = shipped_rules()
    with pytest.raises(DomainError):
        apply_C4(TREFOIL, MoveInstance("C4_forward", chords=(1, 2, 3, 4), rule=0), rules)
    assert c4_matches(TREFOIL, rules[0].lhs) == []


def test_validation_harness_accepts_shipped_rule():
    report = validate_c4_rule(shipped_rules()[0], contexts=10_000, seed=1)
    assert report.accepted and report.failures == 0


def test_validation_harness_rejects_a_linked_swap():
    bad = C4Rule(P("1-3:2:+ 2-4:1:+ 5-7:3:+ 6-8:4:+"), P("1-3:1:+ 2-4:2:+ 5-7:3:+ 6-8:4:+"))
    report = validate_c4_rule(bad, contexts=2000, seed=1)
    assert not report.accepted
    left, right = (P(k) for k in report.counterexample)
    assert alexander(left) != alexander(right)


# -- search -------------------------------------------------------------------------------

def test_search_examples():
    out = equiv_search(P("1-2:1:+"), EMPTY)
    assert out.status == "connected"
    assert [m.kind for m in out.path] == ["C1_delete"]

    out = equiv_search(TREFOIL, EMPTY)
    assert out.status == "distinct" and out.witness == "alexander"
    assert [str(v) for v in out.values] == [str(alexander(TREFOIL)), "1"]

    d = P("1-4:3:- 2-6:2:+ 3-5:1:+")
    out = equiv_search(d, apply_B(d, 1))
    assert out.status == "connected" and len(out.path) == 1


def test_search_trivial_and_unknown():
    assert equiv_search(TREFOIL, TREFOIL).path == []
    fig8 = P("1-3:2:+ 2-4:1:-")
    out = equiv_search(fig8, P("1-3:1:- 2-4:2:+"), budget=50)
    assert out.status in ("connected", "unknown")
    assert out.nodes_expanded <= 50


def test_search_paths_replay(rng):
    connected = 0
    for _ in range(40):
        d = random_diagram(int(rng.integers(0, 4)), rng)
        e = d
        for _ in range(int(rng.integers(1, 4))):
            ms = applicable_moves(e, BASIC, max_chords=d.n + 2)
            if ms:
                e = apply_move(e, ms[int(rng.integers(len(ms)))])
        out = equiv_search(d, e, budget=3000)
        assert out.status != "distinct"
        if out.status == "connected":
            connected += 1
            assert replay(d, out.path).key == e.key
    assert connected >= 30


def test_search_connected_pairs_share_invariants(rng):
    for _ in range(30):
        d1 = random_diagram(int(rng.integers(0, 3)), rng)
        d2 = random_diagram(int(rng.integers(0, 3)), rng)
        out = equiv_search(d1, d2, budget=500)
        if out.status == "connected":
            assert alexander(d1) == alexander(d2) and v2v3(d1) == v2v3(d2)
            assert replay(d1, out.path) == d2
