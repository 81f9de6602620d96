"""
corpus.pyのユニットテスト
"""

import random

import pytest

from grundy_toolkit.engine.corpus import (
    all_labeled_trees,
    random_connected_graph,
    random_forest,
    random_graph,
    random_non_complete_connected_graph,
    random_tree,
    tree_from_prufer,
)
from grundy_toolkit.engine.errors import GraphArgumentError
from grundy_toolkit.engine.graph_core import is_complete, is_connected, is_forest, is_tree


class TestTrees:
    """木の生成"""

    def test_prufer(self):
        """Prüfer列 [0, 0] から星が得られることを確認"""
        tree = tree_from_prufer([0, 0])
        assert tree.n == 4
        assert tree.edges() == [(0, 1), (0, 2), (0, 3)]

    @pytest.mark.parametrize("n, count", [(1, 1), (2, 1), (3, 3), (4, 16), (5, 125)])
    def test_cayley_count(self, n, count):
        """ラベル付き木の個数が n^(n-2) になることを確認"""
        trees = list(all_labeled_trees(n))
        assert len(trees) == count
        assert all(is_tree(tree) and tree.n == n for tree in trees)

    def test_distinct_trees(self):
        """列挙される木がすべて異なることを確認"""
        assert len({tuple(tree.edges()) for tree in all_labeled_trees(5)}) == 125

    def test_random_tree(self):
        """乱択の木が常に木になることを確認"""
        rng = random.Random(7)
        for n in range(1, 12):
            assert is_tree(random_tree(rng, n))

    def test_rejects_empty(self):
        """頂点数0の木を拒否することを確認"""
        with pytest.raises(GraphArgumentError):
            random_tree(random.Random(0), 0)


class TestGraphs:
    """乱択グラフの生成"""

    def test_same_seed_same_corpus(self):
        """同じシードから同じグラフ列が得られることを確認"""
        first = [random_graph(random.Random(3), 8).edges() for _ in range(3)]
        second = [random_graph(random.Random(3), 8).edges() for _ in range(3)]
        assert first == second

    def test_forest(self):
        """乱択の森が指定の頂点数の森になることを確認"""
        rng = random.Random(11)
        for _ in range(20):
            forest = random_forest(rng, 9)
            assert forest.n == 9
            assert is_forest(forest)

    def test_connected(self):
        """乱択の連結グラフが連結になることを確認"""
        rng = random.Random(5)
        for _ in range(20):
            assert is_connected(random_connected_graph(rng, 7))

    def test_non_complete_connected(self):
        """完全グラフでない連結グラフが得られることを確認"""
        rng = random.Random(13)
        for _ in range(20):
            graph = random_non_complete_connected_graph(rng, 5)
            assert is_connected(graph)
            assert not is_complete(graph)

    def test_non_complete_needs_three_vertices(self):
        """2頂点以下では完全でない連結グラフを作れないことを確認"""
        with pytest.raises(GraphArgumentError):
            random_non_complete_connected_graph(random.Random(0), 2)
