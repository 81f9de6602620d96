"""
graph_core.pyのユニットテスト
"""

import networkx as nx
import pytest

from grundy_toolkit.engine.errors import CapacityError, GraphArgumentError
from grundy_toolkit.engine.graph_core import (
    Graph,
    add_edge,
    closed_neighborhood,
    connected_components,
    delete_edge,
    delete_vertex,
    disjoint_union,
    empty_graph,
    g_fiber,
    h_fiber,
    induced_subgraph,
    is_caterpillar,
    is_complete,
    is_connected,
    is_forest,
    is_simplicial,
    is_tree,
    is_twin,
    leaf_edges,
    path_graph,
    product_index,
    product_vertex,
    simplicial_vertices,
    star_graph,
    strong_product,
    twin_classes,
)


class TestGraph:
    """Graphクラスのテスト"""

    def test_from_edges(self, p4):
        """辺リストから構築できることを確認"""
        assert p4.n == 4
        assert p4.m == 3
        assert p4.edges() == [(0, 1), (1, 2), (2, 3)]
        assert p4.neighbors(1) == [0, 2]
        assert p4.degree(3) == 1
        assert p4.is_valid()

    def test_rejects_self_loop(self):
        """自己ループを拒否することを確認"""
        with pytest.raises(GraphArgumentError):
            Graph.from_edges(2, [(1, 1)])

    def test_rejects_duplicate_edge(self):
        """重複辺を拒否することを確認"""
        with pytest.raises(GraphArgumentError):
            Graph.from_edges(2, [(0, 1), (1, 0)])

    def test_rejects_out_of_range(self):
        """範囲外の頂点を拒否することを確認"""
        with pytest.raises(GraphArgumentError):
            Graph.from_edges(2, [(0, 2)])

    def test_check_vertex(self, p4):
        """範囲外の頂点番号が検出されることを確認"""
        with pytest.raises(GraphArgumentError):
            p4.check_vertex(4)

    def test_closed_neighborhood(self, k13):
        """閉近傍が自分自身を含むことを確認"""
        assert closed_neighborhood(k13, 0) == frozenset({0, 1, 2, 3})
        assert closed_neighborhood(k13, 2) == frozenset({0, 2})

    def test_networkx_round_trip(self, c4):
        """networkxとの相互変換で同じグラフに戻ることを確認"""
        assert Graph.from_networkx(c4.to_networkx()) == c4

    def test_from_networkx_relabels(self):
        """整数でない頂点は整列順に番号付けされ、名前が残ることを確認"""
        graph = Graph.from_networkx(nx.Graph([("b", "c"), ("a", "b")]))
        assert graph.edges() == [(0, 1), (1, 2)]
        assert graph.name_of(0) == "a"


class TestStrongProduct:
    """強積のテスト"""

    def test_p2_times_p2_is_k4(self):
        """P2⊠P2 が K4 になることを確認"""
        product = strong_product(path_graph(2), path_graph(2))
        assert product.n == 4
        assert is_complete(product)

    def test_matches_networkx(self, p4, c4):
        """networkxの strong_product と同型であることを確認"""
        ours = strong_product(p4, c4).to_networkx()
        theirs = nx.strong_product(p4.to_networkx(), c4.to_networkx())
        assert nx.is_isomorphic(ours, theirs)

    def test_capacity(self, p4):
        """頂点数の上限を超える強積を拒否することを確認"""
        with pytest.raises(CapacityError):
            strong_product(p4, p4, cap=15)

    def test_index_and_fibers(self, p4, c4):
        """積頂点の番号とファイバーの範囲が対応することを確認"""
        index = product_index(p4, c4, 2, 3)
        assert index == 11
        vertex = product_vertex(p4, c4, index)
        assert (vertex.g, vertex.h) == (2, 3)
        assert list(h_fiber(p4, c4, 1)) == [4, 5, 6, 7]
        assert list(g_fiber(p4, c4, 1)) == [1, 5, 9, 13]

    def test_product_vertex_out_of_range(self, p4, c4):
        """範囲外の積頂点番号を拒否することを確認"""
        with pytest.raises(GraphArgumentError):
            product_vertex(p4, c4, 16)


class TestEditing:
    """辺・頂点の追加削除のテスト"""

    def test_delete_and_add_edge(self, c4):
        """辺の削除と追加で元のグラフに戻ることを確認"""
        path = delete_edge(c4, 0, 3)
        assert is_tree(path)
        assert add_edge(path, 0, 3) == c4

    def test_delete_missing_edge(self, p4):
        """存在しない辺の削除を拒否することを確認"""
        with pytest.raises(GraphArgumentError):
            delete_edge(p4, 0, 2)

    def test_add_existing_edge(self, p4):
        """既存の辺の追加を拒否することを確認"""
        with pytest.raises(GraphArgumentError):
            add_edge(p4, 0, 1)

    def test_delete_vertex_renumbers(self, p4):
        """頂点削除で残りの頂点が詰めて番号付けされることを確認"""
        graph, mapping = delete_vertex(p4, 1)
        assert mapping == {0: 0, 2: 1, 3: 2}
        assert graph.edges() == [(1, 2)]

    def test_induced_subgraph(self, p4):
        """誘導部分グラフが旧番号の対応を返すことを確認"""
        graph, originals = induced_subgraph(p4, [3, 1, 2])
        assert originals == [1, 2, 3]
        assert graph.edges() == [(0, 1), (1, 2)]

    def test_disjoint_union(self, p4):
        """非交和で H の頂点がずれることを確認"""
        union = disjoint_union(p4, path_graph(2))
        assert union.n == 6
        assert connected_components(union) == [[0, 1, 2, 3], [4, 5]]


class TestPredicates:
    """グラフの判定関数のテスト"""

    def test_components_and_connectivity(self):
        """連結成分と森・木の判定を確認"""
        graph = Graph.from_edges(5, [(0, 3), (1, 4)])
        assert connected_components(graph) == [[0, 3], [1, 4], [2]]
        assert not is_connected(graph)
        assert is_forest(graph)
        assert not is_tree(graph)

    def test_empty_graph(self):
        """頂点0のグラフは連結だが木ではないことを確認"""
        graph = empty_graph(0)
        assert graph.n == 0
        assert is_connected(graph)
        assert not is_tree(graph)

    def test_cycle_is_not_forest(self, c4):
        """閉路は森ではないことを確認"""
        assert not is_forest(c4)

    def test_caterpillar(self, p4, k13, spider333):
        """毛虫判定で S(3,3,3) が除かれることを確認"""
        assert is_caterpillar(p4)
        assert is_caterpillar(k13)
        assert not is_caterpillar(spider333)

    def test_simplicial_and_twins(self, k4, p4):
        """単体頂点と双子類が求まることを確認"""
        assert simplicial_vertices(k4) == [0, 1, 2, 3]
        assert twin_classes(k4) == [[0, 1, 2, 3]]
        assert is_twin(k4, 0, 3)
        assert is_simplicial(p4, 0)
        assert not is_simplicial(p4, 1)
        assert twin_classes(p4) == []

    def test_leaf_edges(self, p4, k13):
        """葉辺が辞書順で列挙されることを確認"""
        assert leaf_edges(p4) == [(0, 1), (2, 3)]
        assert leaf_edges(k13) == [(0, 1), (0, 2), (0, 3)]
        assert leaf_edges(star_graph(1)) == [(0, 1)]
