import pytest
import itertools
import json
import numpy as np
from hypothesis import given, settings, strategies as st
from pbwcrystal.exceptions import DatumError, IllegalMoveError, TransitionError
from pbwcrystal.lusztig import (LusztigDatum, Rank2Transition, Transport, bracket_transition_B2,
                                datum_from_json, datum_to_json, kostant_lines, kostant_parts, load_datum,
                                parse_kostant, save_datum, transition_move, transition_path, weight,
                                window_transition)
from pbwcrystal.rootsys import Root, as_root_system
from pbwcrystal.weyl import (BraidMove, BraidPath, connect, convex_order, longest_word, random_reduced_word,
                             to_front)


@pytest.fixture
def a3_datum():
    """Fixture for the A3 datum on the word 1,2,3,1,2,1."""
    return LusztigDatum(convex_order("A3", (1, 2, 3, 1, 2, 1)), (2, 3, 1, 3, 3, 2))


def test_sl3_kernel():
    """Test the sl3 transition on an A4 window."""
    system = as_root_system("A4")
    window = tuple(Root.parse(r, 4) for r in ("1", "123", "23"))
    assert window_transition(system, window, (1, 5, 3)) == (7, 1, 5)
    assert tuple(int(x) for x in Rank2Transition.sl3(1, 5, 3)) == (7, 1, 5)


def test_short_first_kernel_and_brackets():
    """Test the C3 window 2, 223, 23, 3 by the kernel and by bracket cancellation."""
    system = as_root_system("C3")
    window = tuple(Root.parse(r, 3) for r in ("2", "223", "23", "3"))
    assert window_transition(system, window, (0, 5, 1, 2)) == (6, 0, 2, 7)
    assert bracket_transition_B2((0, 5, 1, 2), long_first=False) == (6, 0, 2, 7)


def test_single_long_root_moves_to_the_end():
    """Test that a lone long root count keeps its root."""
    assert bracket_transition_B2((1, 0, 0, 0), long_first=True) == (0, 0, 0, 1)
    assert tuple(int(x) for x in Rank2Transition.b2(1, 0, 0, 0)) == (0, 0, 0, 1)


def test_bracket_form_matches_kernel():
    """Test bracket_transition_B2 against the kernel on every count tuple up to 8, both orientations."""
    system = as_root_system("B2")
    lng, sht = Root((1, 0)), Root((0, 1))
    long_first = (lng, lng + sht, lng + sht.scaled(2), sht)
    short_first = tuple(reversed(long_first))
    for counts in itertools.product(range(9), repeat=4):
        assert bracket_transition_B2(counts, long_first=True) == window_transition(system, long_first, counts)
        assert bracket_transition_B2(counts, long_first=False) == window_transition(system, short_first, counts)


def test_window_transition_rejects_non_windows():
    """Test that a malformed window raises."""
    system = as_root_system("A3")
    with pytest.raises(TransitionError):
        window_transition(system, (Root((1, 0, 0)), Root((0, 1, 0)), Root((0, 0, 1))), (1, 1, 1))


def test_datum_validation(a3_datum):
    """Test that bad counts are rejected."""
    with pytest.raises(DatumError):
        LusztigDatum(a3_datum.order, (1, 2, 3))
    with pytest.raises(DatumError):
        LusztigDatum(a3_datum.order, (0, 0, 0, 0, 0, -1))


def test_count_and_weight(a3_datum):
    """Test per-root counts and the weight -sum c_beta beta."""
    assert a3_datum.count(Root((1, 1, 0))) == 3
    assert weight(a3_datum) == Root((-6, -10, -6))
    assert weight(LusztigDatum.zero(a3_datum.order)) == Root((0, 0, 0))


def test_transition_move_and_path(a3_datum):
    """Test a single move and a full path keep the weight and invert."""
    moved = transition_move(a3_datum, BraidMove(4, 3))
    assert moved.order.word == (1, 2, 3, 2, 1, 2)
    assert weight(moved) == weight(a3_datum)
    assert transition_move(moved, BraidMove(4, 3)) == a3_datum
    path = connect("A3", a3_datum.order.word, longest_word("A3"))
    assert weight(transition_path(a3_datum, path)) == weight(a3_datum)


def test_transport_inverse(a3_datum):
    """Test that a compiled transport and its inverse round trip."""
    path = connect("A3", a3_datum.order.word, (3, 2, 1, 3, 2, 3))
    transport = Transport.compile(a3_datum.order, path)
    there = transport(a3_datum)
    assert there.order.word == (3, 2, 1, 3, 2, 3)
    assert transport.inverse()(there) == a3_datum


def test_transport_wrong_source(a3_datum):
    """Test that a transport refuses data on another order."""
    path = connect("A3", a3_datum.order.word, (3, 2, 1, 3, 2, 3))
    transport = Transport.compile(a3_datum.order, path)
    with pytest.raises(IllegalMoveError):
        transport(LusztigDatum.zero(convex_order("A3", (3, 2, 1, 3, 2, 3))))


def test_json_round_trip(a3_datum, tmp_path):
    """Test JSON serialization through a file."""
    record = json.loads(datum_to_json(a3_datum))
    assert record == {"type": "A", "rank": 3, "word": [1, 2, 3, 1, 2, 1], "counts": [2, 3, 1, 3, 3, 2]}
    path = tmp_path / "datum.json"
    save_datum(a3_datum, path)
    assert load_datum(path) == a3_datum


def test_json_validation():
    """Test that malformed datum files are rejected."""
    with pytest.raises(ValueError):
        datum_from_json('{"type": "A", "rank": 2, "word": [1, 2, 1], "counts": [1, 2]}')
    with pytest.raises(ValueError):
        datum_from_json('{"type": "A", "rank": 2, "word": [1, 2, 1], "counts": [1, 2, 3], "extra": 1}')
    with pytest.raises(ValueError):
        datum_from_json('{"type": "A", "rank": 2, "word": [1, 2, 1], "counts": [1, -2, 3]}')


def test_kostant_rendering(a3_datum):
    """Test the multiplicity lines, the flattened parts and parsing back."""
    assert kostant_lines(a3_datum) == ["1 x2", "12 x3", "123 x1", "2 x3", "23 x3", "3 x2"]
    assert len(kostant_parts(a3_datum)) == 14
    assert kostant_lines(LusztigDatum.zero(a3_datum.order)) == []
    assert parse_kostant("\n".join(kostant_lines(a3_datum)), a3_datum.order) == a3_datum


@settings(max_examples=50, deadline=None)
@given(counts=st.tuples(*[st.integers(min_value=0, max_value=6)] * 9))
def test_transport_preserves_weight(counts):
    """Test that moving a C3 datum to another word keeps its weight and inverts."""
    start = convex_order("C3", (1, 2, 3, 2, 1, 2, 3, 2, 3))
    d = LusztigDatum(start, counts)
    transport = Transport.compile(start, connect("C3", start.word, longest_word("C3")))
    moved = transport(d)
    assert weight(moved) == weight(d)
    assert transport.inverse()(moved) == d


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "D4"])
def test_transport_is_path_independent(name):
    """Test that different braid paths between the same two words transport data alike."""
    system = as_root_system(name)
    rng = np.random.default_rng(17)
    u = longest_word(system)
    w = random_reduced_word(system, rng, start=u)
    v = random_reduced_word(system, rng, start=w)
    direct = connect(system, u, v)
    through_w = BraidPath(u, v, connect(system, u, w).moves + connect(system, w, v).moves)
    detour = to_front(system, u, system.rank)
    loop = BraidPath(u, v, detour.moves + detour.reversed().moves + direct.moves)
    assert loop.moves != direct.moves
    order = convex_order(system, u)
    for _ in range(10):
        d = LusztigDatum(order, rng.integers(0, 5, size=system.N))
        expected = transition_path(d, direct)
        assert expected.order.word == v
        assert transition_path(d, through_w) == expected
        assert transition_path(d, loop) == expected
