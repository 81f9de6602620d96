"""
正当列の検証と厳密なGrundy支配数ソルバー
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .config import EXACT_VERTEX_CAP
from .errors import CapacityError, GraphArgumentError
from .graph_core import Graph, is_tree, iter_bits, popcount
from .types import GrundyResult, LegalSequence, SequenceViolation, SolveMethod

logger = logging.getLogger(__name__)


def validate_sequence(
    graph: Graph, order: Sequence[int]
) -> Union[LegalSequence, SequenceViolation]:
    """
    頂点列が正当列か検証
    各ステップで N[v] から既に支配された頂点を除いた集合（フットプリント）が空でないこと

    Args:
        graph: 対象グラフ
        order: 頂点列（重複は違反として扱う）

    Returns:
        正当なら LegalSequence、そうでなければ最初の違反位置を示す SequenceViolation
    """
    for v in order:
        graph.check_vertex(v)

    sequence = LegalSequence()
    dominated = 0
    seen = set()
    for index, v in enumerate(order):
        if v in seen:
            return SequenceViolation(
                index=index, vertex=v, reason="repeated vertex", prefix=list(order[:index])
            )
        footprint = graph.closed_mask(v) & ~dominated
        if not footprint:
            return SequenceViolation(
                index=index, vertex=v, reason="empty footprint", prefix=list(order[:index])
            )
        seen.add(v)
        dominated |= footprint
        sequence.order.append(v)
        sequence.footprints.append(list(iter_bits(footprint)))
        sequence.dominated_after.append(dominated)
    return sequence


def is_legal(graph: Graph, order: Sequence[int]) -> bool:
    return isinstance(validate_sequence(graph, order), LegalSequence)


def footprint_of(sequence: LegalSequence, step: int) -> List[int]:
    """step 番目の頂点のフットプリント"""
    if not 0 <= step < len(sequence):
        raise GraphArgumentError(
            f"Step {step} is out of range for a sequence of length {len(sequence)}"
        )
    return list(sequence.footprints[step])


def require_legal(graph: Graph, order: Sequence[int]) -> LegalSequence:
    """正当でなければ引数エラー"""
    result = validate_sequence(graph, order)
    if isinstance(result, SequenceViolation):
        raise GraphArgumentError(
            f"Sequence is not legal at index {result.index} "
            f"(vertex {result.vertex}: {result.reason})"
        )
    return result


class _DominationSearch:
    """
    支配済み集合を状態とする最長正当列のメモ化探索
    同じ閉近傍を持つ頂点は最小IDのみを遷移に使う
    """

    def __init__(self, graph: Graph):
        self._full = graph.full_mask
        self._moves: List[Tuple[int, int]] = []
        seen = set()
        for v in range(graph.n):
            mask = graph.closed_mask(v)
            if mask not in seen:
                seen.add(mask)
                self._moves.append((v, mask))
        self._memo: Dict[int, int] = {}

    @property
    def states(self) -> int:
        return len(self._memo)

    def best(self, dominated: int) -> int:
        cached = self._memo.get(dominated)
        if cached is not None:
            return cached
        remaining = self._full & ~dominated
        value = 0
        if remaining:
            limit = popcount(remaining)
            for _, mask in self._moves:
                if mask & remaining:
                    candidate = 1 + self.best(dominated | mask)
                    if candidate > value:
                        value = candidate
                        if value == limit:
                            break
        self._memo[dominated] = value
        return value

    def witness(self) -> List[int]:
        """各ステップで最適な頂点のうち最小IDを選ぶ"""
        order = []
        dominated = 0
        target = self.best(0)
        while target > 0:
            remaining = self._full & ~dominated
            for v, mask in self._moves:
                if mask & remaining and 1 + self.best(dominated | mask) == target:
                    order.append(v)
                    dominated |= mask
                    target -= 1
                    break
        return order


def grundy_exact(graph: Graph, cap: Optional[int] = None) -> GrundyResult:
    """
    厳密なGrundy支配数
    頂点数が上限を超える場合は CapacityError

    Args:
        graph: 対象グラフ
        cap: 頂点数上限（省略時は設定値）

    Returns:
        値と最小ID優先の証拠列
    """
    cap = EXACT_VERTEX_CAP if cap is None else cap
    if graph.n > cap:
        raise CapacityError(
            f"Graph has {graph.n} vertices, above the exact cap of {cap}; "
            f"use the forest pipeline (grundy_forest) for forests or sample smaller instances"
        )

    search = _DominationSearch(graph)
    value = search.best(0)
    witness = require_legal(graph, search.witness())
    logger.debug(f"Exact solver: n={graph.n}, value={value}, states={search.states}")
    return GrundyResult(
        value=value, witness=witness, method=SolveMethod.EXACT, states=search.states
    )


def end_support_vertices(tree: Graph) -> List[int]:
    """葉に隣接し、非葉の隣接頂点が高々1つの頂点"""
    if not is_tree(tree) or tree.n < 2:
        raise GraphArgumentError(
            "End support vertices are defined for trees with at least 2 vertices"
        )
    leaves = {v for v in range(tree.n) if tree.degree(v) == 1}
    result = []
    for v in range(tree.n):
        neighbors = tree.neighbors(v)
        if not any(u in leaves for u in neighbors):
            continue
        if sum(1 for u in neighbors if u not in leaves) <= 1:
            result.append(v)
    return result


def end_support_lower_bound(tree: Graph) -> int:
    """|V(T)| − |ES(T)| + 1（星では γ を超えることがあるため報告用）"""
    return tree.n - len(end_support_vertices(tree)) + 1
