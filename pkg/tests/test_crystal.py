import pytest
import json
import numpy as np
from hypothesis import given, settings, strategies as st
from pbwcrystal import crystal
from pbwcrystal.bracketing import canonical_word
from pbwcrystal.lusztig import LusztigDatum, weight
from pbwcrystal.rootsys import as_root_system
from pbwcrystal.weyl import convex_order

A4_WORD = (1, 3, 2, 1, 3, 2, 4, 3, 2, 1)


@pytest.fixture
def cache():
    """Fixture for a fresh transport cache."""
    return crystal.PathCache()


@pytest.fixture
def a4_datum():
    """Fixture for a datum on a word that is not simply braided for node 2."""
    return LusztigDatum(convex_order("A4", A4_WORD), (1, 1, 5, 3, 2, 3, 4, 0, 1, 1))


def test_f_on_a4(a4_datum, cache):
    """Test f_2 and epsilon_2 on the A4 datum."""
    assert crystal.f(2, a4_datum, cache).counts == (1, 1, 4, 4, 3, 3, 4, 0, 1, 1)
    assert crystal.epsilon(2, a4_datum, cache) == 8
    assert crystal.epsilon(2, crystal.f(2, a4_datum, cache), cache) == 9


@pytest.mark.parametrize("name, counts, i, expected", [
    ("D4", (2, 1, 4, 2, 1, 3, 3, 1, 2, 1, 2, 0), 4, (2, 1, 3, 2, 2, 3, 3, 1, 2, 1, 2, 0)),
    ("C3", (4, 1, 3, 2, 0, 0, 5, 1, 2), 3, (4, 1, 3, 2, 0, 0, 4, 3, 2)),
    ("B3", (4, 1, 3, 2, 1, 0, 5, 1, 2), 2, (3, 2, 3, 2, 1, 0, 5, 1, 2)),
    ("B3", (4, 1, 3, 2, 1, 0, 5, 1, 2), 3, (4, 1, 3, 2, 1, 0, 4, 2, 2)),
])
def test_f_on_canonical_words(name, counts, i, expected, cache):
    """Test f_i by transport on the canonical words."""
    d = LusztigDatum(canonical_word(name), counts)
    assert crystal.f(i, d, cache).counts == expected


def test_raising_the_zero_datum_is_null(cache):
    """Test that e_i and e_i^* fall off at zero."""
    zero = LusztigDatum.zero(convex_order("B3", (1, 2, 3, 1, 2, 3, 1, 2, 3)))
    for i in (1, 2, 3):
        assert crystal.e(i, zero, cache) is None
        assert crystal.estar(i, zero, cache) is None
        assert crystal.epsilon(i, zero, cache) == 0
        assert crystal.epsilonstar(i, zero, cache) == 0


def test_f_at_zero_is_the_simple_root(cache):
    """Test that f_i of zero puts one on alpha_i, on both sides."""
    zero = LusztigDatum.zero(convex_order("A3", (1, 2, 1, 3, 2, 1)))
    for i in (1, 2, 3):
        fi, fi_star = crystal.f(i, zero, cache), crystal.fstar(i, zero, cache)
        assert fi == fi_star
        assert sum(fi.counts) == 1
        assert fi.count(zero.system.simple_root(i)) == 1


def test_raising_inverts_lowering(a4_datum, cache):
    """Test e_i f_i and e_i^* f_i^* are the identity and f_i lowers the weight by alpha_i."""
    system = a4_datum.system
    for i in system.nodes:
        assert crystal.e(i, crystal.f(i, a4_datum, cache), cache) == a4_datum
        assert crystal.estar(i, crystal.fstar(i, a4_datum, cache), cache) == a4_datum
        assert weight(crystal.f(i, a4_datum, cache)) == weight(a4_datum) - system.simple_root(i)


def test_operators_on_random_c3_data(cache):
    """Test the star operators commute with plain ones on different nodes."""
    rng = np.random.default_rng(7)
    order = canonical_word("C3")
    for _ in range(20):
        d = LusztigDatum(order, rng.integers(0, 4, size=9))
        for i, j in [(1, 2), (2, 3), (3, 1)]:
            assert crystal.fstar(i, crystal.f(j, d, cache), cache) == crystal.f(j, crystal.fstar(i, d, cache), cache)


def test_path_cache(cache, a4_datum):
    """Test that transports are compiled once per node and side."""
    crystal.f(2, a4_datum, cache)
    crystal.e(2, a4_datum, cache)
    assert len(cache) == 1
    crystal.fstar(2, a4_datum, cache)
    assert len(cache) == 2
    forward, backward = cache.transports(a4_datum.order, 2, crystal.FRONT)
    assert forward.target.roots[0] == a4_datum.system.simple_root(2)
    assert backward.target == a4_datum.order
    cache.clear()
    assert len(cache) == 0
    with pytest.raises(ValueError):
        cache.transports(a4_datum.order, 7, crystal.FRONT)


@pytest.mark.parametrize("depth, vertices", [(0, 1), (1, 3), (2, 7), (3, 13)])
def test_a2_graph_sizes(depth, vertices, cache):
    """Test the A2 vertex counts against Kostant partitions of bounded height."""
    graph = crystal.crystal_graph("A2", depth=depth, cache=cache)
    assert graph.number_of_nodes() == vertices
    assert crystal.kostant_partition_count("A2", depth) == vertices


def test_graph_attributes(cache):
    """Test the vertex, edge and graph attributes of a small graph."""
    graph = crystal.crystal_graph("B2", depth=1, cache=cache)
    assert graph.graph["type"] == "B2"
    assert graph.graph["depth"] == 1
    assert graph.nodes[(0, 0, 0, 0)]["weight"] == "0.0"
    assert graph.number_of_edges() == 2
    assert {data["label"] for _, _, data in graph.edges(data=True)} == {"f_1", "f_2"}
    with pytest.raises(ValueError):
        crystal.crystal_graph("B2", depth=-1, cache=cache)


def test_graph_exports(cache):
    """Test the DOT text and the JSON adjacency export."""
    graph = crystal.crystal_graph("A2", depth=1, cache=cache)
    dot = crystal.graph_to_dot(graph)
    assert dot.startswith("digraph crystal {")
    assert '[label="(0,0,0)"]' in dot
    assert dot.count("->") == 2
    data = json.loads(crystal.graph_to_json(graph))
    assert {node["id"] for node in data["nodes"]} == {"(0,0,0)", "(1,0,0)", "(0,0,1)"}
    assert data["directed"] is True


def test_kostant_partition_count():
    """Test small partition counts."""
    assert crystal.kostant_partition_count("A1", 4) == 5
    assert crystal.kostant_partition_count(as_root_system("B2"), 0) == 1


@st.composite
def data(draw):
    """Strategy for a small datum on a canonical word."""
    order = canonical_word(draw(st.sampled_from(["A3", "B2", "C3", "D4"])))
    counts = draw(st.lists(st.integers(min_value=0, max_value=4), min_size=len(order), max_size=len(order)))
    return LusztigDatum(order, counts)


@settings(max_examples=40, deadline=None)
@given(d=data(), pick=st.integers(min_value=0, max_value=3))
def test_epsilon_counts_raising_steps(d, pick):
    """Test that e_i can be applied exactly epsilon_i times."""
    i = d.system.nodes[pick % d.system.rank]
    steps = crystal.epsilon(i, d)
    for _ in range(steps):
        d = crystal.e(i, d)
        assert d is not None
    assert crystal.e(i, d) is None


def test_star_operators_act_at_the_back():
    """Test that the starred operators change the last count when alpha_i is last."""
    d = LusztigDatum(canonical_word("A3"), (2, 3, 1, 3, 3, 2))
    assert d.order.roots[-1] == d.system.simple_root(3)
    cache = crystal.PathCache()
    assert crystal.epsilonstar(3, d, cache) == 2
    assert crystal.fstar(3, d, cache).counts == (2, 3, 1, 3, 3, 3)
    assert crystal.estar(3, d, cache).counts == (2, 3, 1, 3, 3, 1)
    zero = LusztigDatum.zero(convex_order("A2", (1, 2, 1)))
    assert crystal.fstar(1, zero, cache).counts == (1, 0, 0)
    assert crystal.fstar(2, zero, cache).counts == (0, 0, 1)


def test_passed_cache_is_used(a4_datum, cache, monkeypatch):
    """Test that an empty cache passed in fills instead of the module default."""
    monkeypatch.setattr(crystal, "default_cache", crystal.PathCache())
    crystal.f(1, a4_datum, cache)
    crystal.epsilonstar(1, a4_datum, cache)
    assert len(cache) == 2
    assert len(crystal.default_cache) == 0
    crystal.f(1, a4_datum)
    assert len(crystal.default_cache) == 1
