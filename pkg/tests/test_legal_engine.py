"""
legal_engine.pyのユニットテスト
"""

import pytest

from grundy_toolkit.engine.errors import CapacityError, GraphArgumentError
from grundy_toolkit.engine.graph_core import (
    Graph,
    complete_graph,
    cycle_graph,
    empty_graph,
    path_graph,
    star_graph,
)
from grundy_toolkit.engine.legal_engine import (
    end_support_lower_bound,
    end_support_vertices,
    footprint_of,
    grundy_exact,
    is_legal,
    require_legal,
    validate_sequence,
)
from grundy_toolkit.engine.types import LegalSequence, SequenceViolation, SolveMethod


class TestValidateSequence:
    """正当列の検証のテスト"""

    def test_legal_sequence(self, p4):
        """正当列のフットプリントと支配集合が記録されることを確認"""
        result = validate_sequence(p4, [0, 1, 2])
        assert isinstance(result, LegalSequence)
        assert result.footprints == [[0, 1], [2], [3]]
        assert result.dominated == 0b1111
        assert result.footprinter_of(3) == 2

    def test_empty_footprint(self, p4):
        """N[v] がすべて支配済みなら違反になることを確認"""
        result = validate_sequence(p4, [1, 2, 0])
        assert isinstance(result, SequenceViolation)
        assert result.index == 2
        assert result.vertex == 0
        assert result.reason == "empty footprint"
        assert result.prefix == [1, 2]

    def test_repeated_vertex(self, p4):
        """同じ頂点の繰り返しが違反になることを確認"""
        result = validate_sequence(p4, [0, 0])
        assert isinstance(result, SequenceViolation)
        assert result.reason == "repeated vertex"

    def test_out_of_range(self, p4):
        """範囲外の頂点を含む列を拒否することを確認"""
        with pytest.raises(GraphArgumentError):
            validate_sequence(p4, [0, 7])

    def test_empty_sequence_is_legal(self, p4):
        """空の列は正当であることを確認"""
        assert is_legal(p4, [])

    def test_require_legal(self, p4):
        """不正な列で require_legal が例外を送出することを確認"""
        assert len(require_legal(p4, [3, 2, 1])) == 3
        with pytest.raises(GraphArgumentError):
            require_legal(p4, [1, 2, 0])

    def test_footprint_of(self, p4):
        """列中の位置ごとのフットプリントが取れることを確認"""
        sequence = require_legal(p4, [0, 1, 2])
        assert footprint_of(sequence, 1) == [2]
        with pytest.raises(GraphArgumentError):
            footprint_of(sequence, 3)


class TestGrundyExact:
    """厳密解法のテスト"""

    @pytest.mark.parametrize(
        "graph, expected",
        [
            (empty_graph(0), 0),
            (empty_graph(3), 3),
            (path_graph(1), 1),
            (path_graph(2), 1),
            (path_graph(3), 2),
            (path_graph(4), 3),
            (cycle_graph(4), 2),
            (cycle_graph(5), 3),
            (complete_graph(4), 1),
            (star_graph(3), 3),
        ],
    )
    def test_small_values(self, graph, expected):
        """小さなグラフの γ と証拠列を確認"""
        result = grundy_exact(graph)
        assert result.value == expected
        assert len(result.witness) == expected
        assert is_legal(graph, result.witness.order)
        assert result.method == SolveMethod.EXACT

    def test_witness_prefers_small_ids(self, p4, k13):
        """各ステップで最小IDの最適頂点を選ぶことを確認"""
        assert grundy_exact(p4).witness.order == [0, 1, 2]
        assert grundy_exact(k13).witness.order == [1, 2, 0]

    def test_spider(self, spider333):
        """S(3,3,3) の γ が8になることを確認"""
        assert grundy_exact(spider333).value == 8

    def test_capacity(self):
        """上限を超えると森パイプラインを案内する例外になることを確認"""
        with pytest.raises(CapacityError) as excinfo:
            grundy_exact(path_graph(6), cap=5)
        assert "grundy_forest" in str(excinfo.value)

    def test_states_are_reported(self, c4):
        """評価した状態数が報告されることを確認"""
        assert grundy_exact(c4).states > 0


class TestEndSupport:
    """端の支持頂点による下界のテスト"""

    def test_path(self, p4):
        """P4 の端の支持頂点と下界を確認"""
        assert end_support_vertices(p4) == [1, 2]
        assert end_support_lower_bound(p4) == 3

    def test_star_exceeds_gamma(self, k13):
        """星では下界が γ を超える（報告のみ）"""
        assert end_support_lower_bound(k13) == 4
        assert grundy_exact(k13).value == 3

    def test_p2(self):
        """P2 の下界が1になることを確認"""
        assert end_support_lower_bound(path_graph(2)) == 1

    def test_requires_tree(self, c4):
        """木でないグラフを拒否することを確認"""
        with pytest.raises(GraphArgumentError):
            end_support_vertices(c4)
        with pytest.raises(GraphArgumentError):
            end_support_vertices(Graph.from_edges(1, []))
