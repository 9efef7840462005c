import pytest
import numpy as np
from hypothesis import given, settings, strategies as st
from pbwcrystal.exceptions import InvalidTypeError, UnsupportedTypeError
from pbwcrystal.rootsys import (Root, TypeRank, as_root_system, bilinear, cartan_data, cominuscule_nodes,
                                minuscule_nodes, pairing, positive_roots, reflect)


@pytest.fixture
def b2():
    """Fixture for the B2 root system, alpha_1 long."""
    return as_root_system("B2")


@pytest.fixture
def d4():
    """Fixture for the D4 root system."""
    return as_root_system("D4")


@pytest.mark.parametrize("name, count", [("A1", 1), ("A3", 6), ("A4", 10), ("B3", 9), ("C3", 9),
                                         ("D4", 12), ("D5", 20), ("E6", 36), ("E7", 63), ("F4", 24)])
def test_positive_root_counts(name, count):
    """Test that each type has the expected number of positive roots."""
    assert len(positive_roots(name)) == count


def test_positive_roots_sorted_by_height():
    """Test the root ordering: height first, then coefficients."""
    assert positive_roots("A2") == [Root((0, 1)), Root((1, 0)), Root((1, 1))]
    heights = [beta.height for beta in positive_roots("C3")]
    assert heights == sorted(heights)


def test_cartan_conventions():
    """Test the Bourbaki off-diagonal entries for B, C and F."""
    assert cartan_data("B3").cartan[2][1] == -2
    assert cartan_data("C3").cartan[1][2] == -2
    assert cartan_data("F4").cartan[2][1] == -2


def test_symmetrizers():
    """Test that symmetrizers are the smallest positive solution."""
    assert cartan_data("B3").symmetrizers == (2, 2, 1)
    assert cartan_data("C3").symmetrizers == (1, 1, 2)
    assert cartan_data("D4").symmetrizers == (1, 1, 1, 1)


def test_highest_roots(b2):
    """Test the long and short root lengths and the highest roots of B and C."""
    assert Root((1, 2)) in b2.positive_roots
    assert b2.norm(Root((1, 0))) == 2 * b2.norm(Root((0, 1)))
    assert max(positive_roots("B3"), key=lambda b: b.height).compact() == "12233"
    assert max(positive_roots("C3"), key=lambda b: b.height).compact() == "11223"


def test_braid_orders(b2):
    """Test m(i, j) for the rank 2 bonds."""
    assert b2.braid_order(1, 2) == 4
    assert as_root_system("A2").braid_order(1, 2) == 3
    assert as_root_system("A3").braid_order(1, 3) == 2
    assert as_root_system("F4").braid_order(2, 3) == 4


def test_type_rank_parsing():
    """Test that types parse from and render to the compact form."""
    tr = TypeRank.parse("d4")
    assert (tr.letter, tr.rank) == ("D", 4)
    assert str(tr) == "D4"
    assert tr.is_classical
    assert not TypeRank("E", 6).is_classical


@pytest.mark.parametrize("letter, rank", [("A", 0), ("B", 1), ("D", 2), ("E", 5), ("F", 3), ("H", 3)])
def test_invalid_types(letter, rank):
    """Test that out-of-range ranks and unknown letters are rejected."""
    with pytest.raises(InvalidTypeError):
        TypeRank(letter, rank)


def test_g2_is_unsupported():
    """Test that G2 raises its own error."""
    with pytest.raises(UnsupportedTypeError):
        TypeRank("G", 2)


def test_root_rendering_round_trip(d4):
    """Test the compact and dotted renderings parse back."""
    beta = Root((1, 2, 1, 1))
    assert beta.compact() == "12234"
    assert beta.dotted() == "1.2.1.1"
    assert Root.parse("12234", 4) == beta
    assert Root.parse("1.2.1.1", 4) == beta
    assert (-beta).compact() == "-12234"
    assert Root.parse("-12234", 4) == -beta


def test_root_arithmetic_is_coordinatewise():
    """Test that + and - on roots do not concatenate."""
    a, b = Root((1, 0)), Root((0, 1))
    assert a + b == Root((1, 1))
    assert (a - b) == Root((1, -1))
    assert a.scaled(3) == Root((3, 0))


def test_reflect_and_pairing():
    """Test s_1 on alpha_2 in A2 and the pairing that drives it."""
    assert pairing("A2", 1, (0, 1)) == -1
    assert reflect("A2", 1, (0, 1)) == Root((1, 1))
    assert reflect("B2", 2, (1, 0)) == Root((1, 2))
    assert bilinear("B2", (1, 0), (0, 1)) == -2


def test_minuscule_table():
    """Test the minuscule and cominuscule nodes."""
    assert minuscule_nodes("D4") == {1, 3, 4}
    assert minuscule_nodes("B3") == {3}
    assert minuscule_nodes("E6") == {1, 6}
    assert minuscule_nodes("E8") == set()
    assert cominuscule_nodes("B3") == {1}
    assert cominuscule_nodes("C3") == {3}


def test_restrict(d4):
    """Test that a sub-diagram keeps its ambient labels."""
    sub = d4.restrict((1, 2, 3))
    assert sub.labels == (1, 2, 3)
    assert sub.N == 6
    arm = d4.restrict((1, 4))
    assert arm.N == 2


def test_matrix_is_numpy(b2):
    """Test the Cartan matrix export."""
    assert np.array_equal(b2.matrix, np.array([[2, -1], [-2, 2]]))


@settings(max_examples=60, deadline=None)
@given(name=st.sampled_from(["A3", "B3", "C3", "D4", "F4"]), data=st.data())
def test_reflections_preserve_the_form(name, data):
    """Test that simple reflections are involutions and keep the invariant form."""
    system = as_root_system(name)
    beta = data.draw(st.sampled_from(system.positive_roots))
    gamma = data.draw(st.sampled_from(system.positive_roots))
    i = data.draw(st.sampled_from(system.nodes))
    assert system.reflect(i, system.reflect(i, beta)) == beta
    assert system.bilinear(system.reflect(i, beta), system.reflect(i, gamma)) == system.bilinear(beta, gamma)
    assert system.is_root(system.reflect(i, beta))
