import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from netcomm import EdgeListError, Graph, SelfLoop, degrees, edge_count, from_edge_list
from netcomm._validation import check_graph, check_level, check_positive_int, check_seed
from netcomm.graph import read_edge_list, to_edge_list


def test_basic_storage():
    g = Graph(4, [(0, 1), (2, 1), (1, 0)])
    assert g.n == 4
    assert edge_count(g) == 2
    assert g[1, 2] == g[2, 1] == 1
    assert g[0, 3] == 0
    assert list(g.neighbors(1)) == [0, 2]
    assert degrees(g).tolist() == [1, 2, 1, 0]


def test_rejects_self_loop_and_range():
    with pytest.raises(ValueError):
        Graph(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph(0)


def test_from_adjacency_roundtrip(rng):
    A = np.triu(rng.random((9, 9)) < 0.4, 1).astype(int)
    A = A + A.T
    g = Graph.from_adjacency(A)
    assert np.array_equal(g.to_dense(), A)
    assert Graph.from_adjacency(sp.csr_matrix(A)) == g


@pytest.mark.parametrize("bad", [
    np.array([[0, 1], [0, 0]]),
    np.array([[1, 0], [0, 0]]),
    np.array([[0, 2], [2, 0]]),
])
def test_from_adjacency_rejects(bad):
    with pytest.raises(ValueError):
        Graph.from_adjacency(bad)


def test_edge_list_parsing():
    g = from_edge_list("# comment\n\nb a\na c\nc a\n")
    assert g.n == 3
    assert g.labels == ("a", "b", "c")
    assert g.edges == {(0, 1), (0, 2)}


def test_edge_list_numeric_tokens_sorted_numerically():
    g = from_edge_list("10 2\n2 1\n")
    assert g.labels == ("1", "2", "10")
    assert g.has_edge(1, 2) and g.has_edge(0, 1)


def test_edge_list_header_adds_isolated_nodes():
    g = from_edge_list("n=5\nx y\n")
    assert g.n == 5
    assert degrees(g).sum() == 2


def test_edge_list_integer_mode():
    g = from_edge_list("n=6\n0 5\n", integer=True)
    assert g.n == 6 and g.has_edge(0, 5)
    with pytest.raises(EdgeListError):
        from_edge_list("n=3\n0 5\n", integer=True)


@pytest.mark.parametrize("text,cls,line", [
    ("0 1\n2 2\n", SelfLoop, 2),
    ("0 1 2\n", EdgeListError, 1),
    ("n=x\n", EdgeListError, 1),
    ("", EdgeListError, None),
])
def test_edge_list_errors(text, cls, line):
    with pytest.raises(cls) as info:
        from_edge_list(text)
    assert info.value.line == line


def test_self_loop_code():
    with pytest.raises(SelfLoop) as info:
        from_edge_list("a a\n")
    assert info.value.code == "self_loop"


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)).filter(lambda e: e[0] != e[1]),
                min_size=1, max_size=30))
def test_edge_list_order_invariant(edges):
    text = "".join(f"{u} {v}\n" for u, v in edges)
    shuffled = "".join(f"{v} {u}\n" for u, v in reversed(edges))
    assert from_edge_list(text) == from_edge_list(shuffled)


def test_serialize_roundtrip(tmp_path, rng):
    A = np.triu(rng.random((12, 12)) < 0.3, 1)
    iu, ju = np.nonzero(A)
    g = Graph(12, zip(iu, ju))
    p = tmp_path / "g.edges"
    p.write_text(to_edge_list(g))
    assert read_edge_list(p, integer=True) == g


def test_relabel_and_subgraph():
    g = Graph(4, [(0, 1), (1, 2)])
    h = g.relabel([3, 2, 1, 0])
    assert h.edges == {(2, 3), (1, 2)}
    s = g.subgraph([2, 1])
    assert s.n == 2 and s.edges == {(0, 1)}


def test_check_graph_variants():
    A = np.array([[0, 1], [1, 0]])
    assert check_graph(A).edges == {(0, 1)}
    assert check_graph(sp.csr_matrix(A)).edges == {(0, 1)}

    class Fake:
        def number_of_nodes(self):
            return 3

        def nodes(self):
            return ["u", "v", "w"]

        def edges(self):
            return [("u", "w")]

    assert check_graph(Fake()).edges == {(0, 2)}
    with pytest.raises(TypeError):
        check_graph("nope")


def test_scalar_validators():
    assert check_level(0.05) == 0.05
    for bad in (0, 1, -0.1, "x"):
        with pytest.raises(ValueError):
            check_level(bad)
    assert check_positive_int(3, "k") == 3
    with pytest.raises(ValueError):
        check_positive_int(0, "k")
    with pytest.raises(ValueError):
        check_positive_int(True, "k")
    assert check_seed(2**64 - 1) == 2**64 - 1
    with pytest.raises(ValueError):
        check_seed(-1)
    with pytest.raises(TypeError):
        check_seed(1.5)
