"""
caterpillar_partition.pyのユニットテスト
"""

import pytest

from grundy_toolkit.engine.caterpillar_partition import (
    canonical_spine,
    canopy_graph,
    classify_leaf_caterpillars,
    is_caterpillar_critical,
    iter_minimum_partitions,
    longest_paths,
    minimum_caterpillar_partition,
    minimum_partition_size,
    partition_from_branch_edges,
    rank_one_adjacent_pairs,
    spine_positions,
    validate_partition,
)
from grundy_toolkit.engine.errors import GraphArgumentError
from grundy_toolkit.engine.forest_labeling import grundy_forest
from grundy_toolkit.engine.graph_core import (
    Graph,
    empty_graph,
    is_caterpillar,
    induced_subgraph,
    path_graph,
    spider_graph,
)
from grundy_toolkit.engine.legal_engine import is_legal
from grundy_toolkit.engine.types import LeafClass


class TestSpines:
    """最長道と位置のテスト"""

    def test_longest_paths_both_directions(self, p4):
        """最長道が両方向で列挙されることを確認"""
        assert sorted(longest_paths(p4, range(4))) == [[0, 1, 2, 3], [3, 2, 1, 0]]

    def test_canonical_spine(self, k13):
        """(始点, 終点) が最小の最長道を選ぶことを確認"""
        assert canonical_spine(k13, range(4)) == [1, 0, 2]

    def test_positions(self, k13):
        """背骨外の葉は隣の背骨頂点と同じ位置になることを確認"""
        positions = spine_positions(k13, range(4), [1, 0, 2])
        assert positions == {1: 1, 0: 2, 2: 3, 3: 2}


class TestMinimumPartition:
    """最小毛虫分割のテスト"""

    def test_caterpillar_is_one_block(self, p4):
        """毛虫は分岐辺なしの1ブロックになることを確認"""
        partition = minimum_caterpillar_partition(p4)
        assert partition.blocks == [[0, 1, 2, 3]]
        assert partition.branch_edges == []
        assert partition.spines[0].path == [0, 1, 2, 3]

    def test_spider(self, spider333):
        """S(3,3,3) は脚を1本切り離して2ブロック"""
        partition = minimum_caterpillar_partition(spider333)
        assert partition.size == 2
        assert partition.branch_edges == [(0, 1)]
        assert partition.blocks == [[0, 4, 5, 6, 7, 8, 9], [1, 2, 3]]
        assert partition.spines[0].path == [6, 5, 4, 0, 7, 8, 9]
        assert partition.spines[0].branch_vertices == [0]
        assert partition.spines[1].branch_vertices == [1]
        assert validate_partition(spider333, partition) == []

    def test_isolates_are_kept_apart(self):
        """孤立点がブロックに含まれず別に保持されることを確認"""
        forest = Graph.from_edges(4, [(0, 1), (1, 3)])
        partition = minimum_caterpillar_partition(forest)
        assert partition.blocks == [[0, 1, 3]]
        assert partition.isolates == [2]

    def test_edgeless_forest(self):
        """辺のない森はブロック0個になることを確認"""
        partition = minimum_caterpillar_partition(empty_graph(3))
        assert partition.size == 0
        assert partition.isolates == [0, 1, 2]

    def test_blocks_are_caterpillars(self, example_one):
        """道7本の例は印の付いた7ブロックより小さい6ブロックに分割できる"""
        partition = minimum_caterpillar_partition(example_one.forest)
        assert partition.size == 6
        assert partition.branch_edges == [(2, 9), (7, 14), (18, 19), (24, 33), (39, 40)]
        result = grundy_forest(example_one.forest)
        assert result.value == 41
        assert is_legal(example_one.forest, result.witness.order)
        assert not result.fallback
        for block in partition.blocks:
            assert len(block) >= 2
            assert is_caterpillar(induced_subgraph(example_one.forest, block)[0])
        assert validate_partition(example_one.forest, partition) == []

    def test_requires_forest(self, c4):
        """閉路を含むグラフを拒否することを確認"""
        with pytest.raises(GraphArgumentError):
            minimum_caterpillar_partition(c4)

    def test_sizes(self, spider333, p4):
        """ℓ の値が孤立点を数えないことを確認"""
        assert minimum_partition_size(spider333) == 2
        assert minimum_partition_size(p4) == 1
        assert minimum_partition_size(empty_graph(2)) == 0

    def test_enumerates_all_minimum_partitions(self, spider333):
        """S(3,3,3) の最小分割は切る脚の選び方の3通り"""
        partitions = list(iter_minimum_partitions(spider333))
        assert sorted(p.branch_edges for p in partitions) == [[(0, 1)], [(0, 4)], [(0, 7)]]
        assert all(p.size == 2 for p in partitions)


class TestExplicitPartition:
    """分岐辺を明示した分割のテスト"""

    def test_worked_example(self, example_one):
        """印の付いた分岐辺から作業例のブロックと位置が再現されることを確認"""
        partition = partition_from_branch_edges(example_one.forest, example_one.branch_edges)
        assert [tuple(block) for block in partition.blocks] == list(example_one.blocks)
        assert partition.spines[0].position == {0: 1, 1: 2, 2: 3, 3: 4, 4: 5}

    def test_branch_edge_between_leaves(self, p4):
        """毛虫にならない分岐辺の指定を拒否することを確認"""
        with pytest.raises(GraphArgumentError):
            partition_from_branch_edges(p4, [(1, 2)])

    def test_not_an_edge(self, p4):
        """辺でない分岐辺の指定を拒否することを確認"""
        with pytest.raises(GraphArgumentError):
            partition_from_branch_edges(p4, [(0, 2)])

    def test_canopy(self, example_one):
        """キャノピーグラフが7頂点の木になることを確認"""
        partition = partition_from_branch_edges(example_one.forest, example_one.branch_edges)
        canopy = canopy_graph(example_one.forest, partition)
        assert canopy.size == 7
        assert canopy.edges == [(0, 1), (1, 2), (2, 3), (2, 5), (3, 4), (5, 6)]

    def test_rank_one_pairs(self, example_one):
        """隣接する順位1の分岐頂点の組が得られることを確認"""
        partition = partition_from_branch_edges(example_one.forest, example_one.branch_edges)
        assert sorted(rank_one_adjacent_pairs(example_one.forest, partition)) == [
            (7, 14),
            (24, 33),
        ]


class TestLeafCaterpillars:
    """葉毛虫と臨界性のテスト"""

    def test_spider_222(self):
        """S(2,2,2) は P2 と中心が分岐頂点の P5 に分かれる"""
        forest = spider_graph([2, 2, 2])
        partition = minimum_caterpillar_partition(forest)
        classes = sorted(
            leaf.leaf_class.value for leaf in classify_leaf_caterpillars(forest, partition)
        )
        assert classes == [LeafClass.P2.value, LeafClass.P5_CENTER.value]
        assert is_caterpillar_critical(forest)

    def test_path_is_not_critical(self):
        """P5 の葉辺を消しても ℓ は減らない"""
        assert not is_caterpillar_critical(path_graph(5))
