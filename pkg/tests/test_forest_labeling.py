"""
forest_labeling.pyのユニットテスト
"""

import pytest

from grundy_toolkit.engine.caterpillar_partition import partition_from_branch_edges
from grundy_toolkit.engine.errors import GraphArgumentError
from grundy_toolkit.engine.forest_labeling import (
    caterpillar_labeling,
    caterpillar_order,
    forest_labeling,
    grundy_forest,
    step_three_safety_violations,
)
from grundy_toolkit.engine.graph_core import Graph, empty_graph, path_graph
from grundy_toolkit.engine.legal_engine import grundy_exact, is_legal
from grundy_toolkit.engine.types import SolveMethod


def _int_keys(mapping):
    return {int(k): v for k, v in mapping.items()}


class TestCaterpillarLabeling:
    """単一の毛虫のラベリング"""

    def test_order_on_path(self, p4):
        """道では最後の頂点以外が順に並ぶことを確認"""
        assert caterpillar_order(p4, range(4), [0, 1, 2, 3]) == [0, 1, 2]

    def test_order_with_leaves(self, k13):
        """v2 の葉が v2 より先に来る"""
        assert caterpillar_order(k13, range(4), [1, 0, 2]) == [1, 3, 0]

    def test_order_on_edge(self):
        """1辺では片方の端点だけが並ぶことを確認"""
        assert caterpillar_order(path_graph(2), range(2), [0, 1]) == [0]

    def test_star(self, k13):
        """星のラベリングで中心以外の1頂点が残ることを確認"""
        trace = caterpillar_labeling(k13)
        assert trace.sequence == [1, 3, 0]
        assert trace.unlabeled == {0: 2}
        assert is_legal(k13, trace.sequence)

    def test_rejects_non_caterpillar(self, spider333):
        """毛虫でない木を拒否することを確認"""
        with pytest.raises(GraphArgumentError):
            caterpillar_labeling(spider333)

    def test_rejects_single_vertex(self):
        """1頂点のグラフを拒否することを確認"""
        with pytest.raises(GraphArgumentError):
            caterpillar_labeling(empty_graph(1))


class TestWorkedExamples:
    """作業例の反復ごとの記録"""

    def test_path_blocks(self, example_one, golden_one):
        """道7本の例の反復ごとの記録が期待値と一致することを確認"""
        partition = partition_from_branch_edges(example_one.forest, example_one.branch_edges)
        trace = forest_labeling(example_one.forest, partition)
        assert len(trace) == golden_one["labels"]
        assert trace.partition_size == golden_one["partition_size"]
        assert len(trace.iterations) == golden_one["iterations"]
        assert [s.removed_blocks for s in trace.iterations] == golden_one["removed_blocks"]
        assert trace.unlabeled == _int_keys(golden_one["unlabeled"])
        for v, label in _int_keys(golden_one["first_labels"]).items():
            assert trace.label[v] == label
        assert not trace.fallback
        assert is_legal(example_one.forest, trace.sequence)

    def test_leaf_branch(self, example_two, golden_two):
        """葉が分岐頂点になる例の記録が期待値と一致することを確認"""
        partition = partition_from_branch_edges(example_two.forest, example_two.branch_edges)
        trace = forest_labeling(example_two.forest, partition)
        assert len(trace) == golden_two["labels"]
        assert len(trace.iterations) == golden_two["iterations"]
        assert [s.removed_blocks for s in trace.iterations] == golden_two["removed_blocks"]
        assert trace.unlabeled == _int_keys(golden_two["unlabeled"])
        assert trace.label == _int_keys(golden_two["first_labels"])
        assert not trace.fallback

    def test_first_iteration_has_adjacent_rank_one(self, example_one):
        """最初の反復に隣接する順位1の組があり、手順3が安全であることを確認"""
        partition = partition_from_branch_edges(example_one.forest, example_one.branch_edges)
        trace = forest_labeling(example_one.forest, partition)
        assert trace.iterations[0].adjacent_rank_one
        assert step_three_safety_violations(example_one.forest, partition, trace) == []


class TestForestLabeling:
    """森全体のラベリングと γ"""

    def test_spider(self, spider333):
        """S(3,3,3) のラベリングが長さ8の正当列になることを確認"""
        trace = forest_labeling(spider333)
        assert len(trace) == 8
        assert is_legal(spider333, trace.sequence)

    def test_isolates_are_labeled(self):
        """孤立点が最後に昇順でラベル付けされることを確認"""
        forest = Graph.from_edges(5, [(0, 1), (1, 2)])
        trace = forest_labeling(forest)
        assert len(trace) == 4
        assert set(trace.sequence[-2:]) == {3, 4}
        assert is_legal(forest, trace.sequence)

    def test_edgeless(self):
        """辺のない森では全頂点が並ぶことを確認"""
        trace = forest_labeling(empty_graph(3))
        assert trace.sequence == [0, 1, 2]

    def test_requires_forest(self, c4):
        """閉路を含むグラフを拒否することを確認"""
        with pytest.raises(GraphArgumentError):
            forest_labeling(c4)

    @pytest.mark.parametrize("n", [2, 3, 5, 8])
    def test_paths(self, n):
        """道 P_n の γ が n - 1 になることを確認"""
        result = grundy_forest(path_graph(n))
        assert result.value == n - 1
        assert result.method == SolveMethod.FOREST
        assert len(result.witness) == n - 1

    def test_matches_exact(self, spider333):
        """森の公式と厳密解が一致することを確認"""
        assert grundy_forest(spider333).value == grundy_exact(spider333).value == 8
