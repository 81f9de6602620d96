"""
毛虫ラベリングと森ラベリング
森の最大正当列（長さ |V(F)| − ℓ）を構成し、正当性を検証してから返す
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set

from .caterpillar_partition import (
    canonical_spine,
    longest_paths,
    minimum_caterpillar_partition,
    spine_positions,
    validate_partition,
)
from .config import LABELING_MAX_RETRIES
from .errors import GraphArgumentError, InvariantViolation
from .graph_core import (
    Graph,
    connected_components,
    induced_subgraph,
    is_caterpillar,
    is_forest,
    iter_bits,
    mask_of,
    popcount,
)
from .legal_engine import grundy_exact, require_legal, validate_sequence
from .types import (
    CaterpillarPartition,
    GrundyResult,
    IterationSnapshot,
    LabelingTrace,
    LegalSequence,
    SequenceViolation,
    SolveMethod,
)

logger = logging.getLogger(__name__)


def caterpillar_order(forest: Graph, vertices: Iterable[int], path: Sequence[int]) -> List[int]:
    """
    毛虫ラベリングの順序
    v1、v2 の葉、v2、v3 の葉、v3、…、v_{k-1} の葉、v_{k-1} の順（v_k はラベルなし）

    Args:
        forest: 全体の森
        vertices: 毛虫をなす頂点集合
        path: 背骨 v1..vk

    Returns:
        ラベルを付ける頂点の列（|vertices| − 1 個）
    """
    k = len(path)
    if k < 2:
        return []
    if k == 2:
        return [path[0]]
    mask = mask_of(vertices)
    on_spine = set(path)
    order = [path[0]]
    for i in range(1, k - 1):
        order.extend(u for u in iter_bits(forest.adj[path[i]] & mask) if u not in on_spine)
        order.append(path[i])
    return order


def caterpillar_labeling(caterpillar: Graph) -> LabelingTrace:
    """
    単一の毛虫のラベリング
    正準な背骨に沿って |V(C)| − 1 頂点にラベルを付ける
    """
    if caterpillar.n < 2 or not is_caterpillar(caterpillar):
        raise GraphArgumentError(
            "Caterpillar labeling needs a caterpillar with at least 2 vertices"
        )
    vertices = list(range(caterpillar.n))
    path = canonical_spine(caterpillar, vertices)
    order = caterpillar_order(caterpillar, vertices, path)
    return LabelingTrace(
        label={v: i for i, v in enumerate(order, start=1)},
        unlabeled={0: path[-1]},
        partition_size=1,
    )


class _LabelingFailure(Exception):
    """反復の途中で進めなくなったブロック"""

    def __init__(self, block: int, reason: str):
        super().__init__(f"block {block}: {reason}")
        self.block = block


@dataclass
class _BlockView:
    """反復開始時点のブロックの残り部分"""
    vertices: List[int]
    path: List[int]
    position: Dict[int, int]
    branch: List[int]


class _ForestLabeler:
    """
    森ラベリングの1回の実行
    flipped に含まれるブロックは背骨の向きを反転した位置を基準にする
    """

    def __init__(self, forest: Graph, partition: CaterpillarPartition, flipped: Set[int]):
        self.forest = forest
        self.partition = partition
        self.owner = partition.block_index()
        self.reference: List[Dict[int, int]] = []
        self.block_leaves: Set[int] = set()
        for b, (block, spine) in enumerate(zip(partition.blocks, partition.spines)):
            path = spine.path[::-1] if b in flipped else spine.path
            self.reference.append(spine_positions(forest, block, path))
            block_mask = mask_of(block)
            self.block_leaves.update(v for v in block if popcount(forest.adj[v] & block_mask) == 1)
        self.alive: Set[int] = set(self.owner)
        self.active: List[int] = list(range(partition.size))
        self.trace = LabelingTrace(partition_size=partition.size)
        self._counter = 0

    def _assign(self, v: int, bucket: List[int]) -> None:
        self._counter += 1
        self.trace.label[v] = self._counter
        bucket.append(v)

    def _remainder_spine(self, b: int, vertices: List[int]) -> List[int]:
        # 基準位置の小さい端を左に、始点の位置が小さく終点の位置が大きいものを優先
        ref = self.reference[b]
        return min(
            longest_paths(self.forest, vertices),
            key=lambda path: (ref[path[0]], -ref[path[-1]], path[0], path[-1]),
        )

    def _view(self, b: int) -> _BlockView:
        vertices = [v for v in self.partition.blocks[b] if v in self.alive]
        path = self._remainder_spine(b, vertices)
        position = spine_positions(self.forest, vertices, path)
        if len(position) != len(vertices):
            raise _LabelingFailure(b, "remaining block is disconnected")
        branch = [
            v for v in vertices
            if any(
                u in self.alive and self.owner[u] != b for u in iter_bits(self.forest.adj[v])
            )
        ]
        branch.sort(key=lambda v: (position[v], v))
        return _BlockView(vertices=vertices, path=path, position=position, branch=branch)

    def run(self) -> LabelingTrace:
        j = 0
        while self.active:
            j += 1
            self.trace.iterations.append(self._iterate(j))
        # 孤立点は最後に昇順で
        for v in range(self.forest.n):
            if self.forest.adj[v] == 0:
                self._assign(v, [])
        return self.trace

    def _iterate(self, j: int) -> IterationSnapshot:
        snapshot = IterationSnapshot(j=j)
        views = {b: self._view(b) for b in self.active}
        for b, view in views.items():
            snapshot.positions.update(view.position)
            if view.branch:
                snapshot.rank_one[b] = view.branch[0]
        rank_one = set(snapshot.rank_one.values())
        snapshot.adjacent_rank_one = any(
            u in rank_one and self.owner[u] != self.owner[v]
            for v in rank_one
            for u in iter_bits(self.forest.adj[v])
        )
        labels_before = len(self.trace.label)

        # step 2: 順位1の分岐頂点の位置まで毛虫ラベリング
        for b in self.active:
            view = views[b]
            if not view.branch:
                continue
            limit = view.position[view.branch[0]]
            branch = set(view.branch)
            spine = set(view.path)
            for u in caterpillar_order(self.forest, view.vertices, view.path):
                position = view.position[u]
                if position > limit:
                    break
                if position == limit:
                    if u in spine:
                        break
                    if u in branch:
                        continue
                self._assign(u, snapshot.step_two)

        # step 3: 隣接する順位1の分岐頂点を葉優先で
        eligible = {
            v for b, v in snapshot.rank_one.items()
            if views[b].position[v] < max(views[b].position.values())
        }
        for group in self._rank_one_groups(eligible):
            for v in sorted(group, key=lambda v: (v not in self.block_leaves, v)):
                self._assign(v, snapshot.step_three)

        # step 4: 未ラベルの分岐頂点が残っていないブロックを毛虫ラベリング
        for b in self.active:
            view = views[b]
            if any(v not in self.trace.label for v in view.branch):
                continue
            rest = [v for v in view.vertices if v not in self.trace.label]
            if len(rest) < 2:
                continue
            path = self._remainder_spine(b, rest)
            order = caterpillar_order(self.forest, rest, path)
            if len(order) != len(rest) - 1:
                raise _LabelingFailure(b, "remaining block is not a caterpillar")
            for u in order:
                self._assign(u, snapshot.step_four)

        # step 5: 1頂点だけ残ったブロックとラベル済み頂点を除去
        for b in list(self.active):
            rest = [
                v for v in self.partition.blocks[b]
                if v in self.alive and v not in self.trace.label
            ]
            if len(rest) == 1:
                snapshot.removed_blocks.append(b)
                self.trace.unlabeled[b] = rest[0]
                self.active.remove(b)
                self.alive.discard(rest[0])
            elif not rest:
                raise _LabelingFailure(b, "every vertex of the block was labeled")
        snapshot.removed_vertices = sorted(v for v in self.alive if v in self.trace.label)
        self.alive.difference_update(snapshot.removed_vertices)

        if len(self.trace.label) == labels_before and not snapshot.removed_blocks:
            raise _LabelingFailure(self.active[0], f"iteration {j} made no progress")
        logger.debug(
            f"Iteration {j}: labeled {len(self.trace.label) - labels_before}, "
            f"removed blocks {snapshot.removed_blocks}"
        )
        return snapshot

    def _rank_one_groups(self, eligible: Set[int]) -> List[List[int]]:
        """互いに隣接する順位1の分岐頂点の連結なまとまり（2頂点以上、最小IDの昇順）"""
        groups = []
        seen: Set[int] = set()
        for start in sorted(eligible):
            if start in seen:
                continue
            group = [start]
            seen.add(start)
            frontier = [start]
            while frontier:
                v = frontier.pop()
                for u in iter_bits(self.forest.adj[v]):
                    if u in eligible and u not in seen and self.owner[u] != self.owner[v]:
                        seen.add(u)
                        group.append(u)
                        frontier.append(u)
            if len(group) >= 2:
                groups.append(group)
        return groups


def _certify(
    forest: Graph, partition: CaterpillarPartition, trace: LabelingTrace
) -> Optional[int]:
    """
    ラベル列を検証
    正当かつ長さ |V(F)| − ℓ なら None、そうでなければ原因とみなすブロック番号
    """
    owner = partition.block_index()
    result = validate_sequence(forest, trace.sequence)
    if isinstance(result, SequenceViolation):
        block = owner.get(result.vertex)
        logger.warning(
            f"Labeling is not legal at index {result.index} "
            f"(vertex {result.vertex}, block {block})"
        )
        return block if block is not None else 0
    if len(result) != forest.n - partition.size:
        for b, block_vertices in enumerate(partition.blocks):
            if sum(1 for v in block_vertices if v not in trace.label) != 1:
                return b
        return 0
    return None


def _substitute_exact(
    forest: Graph,
    partition: CaterpillarPartition,
    trace: LabelingTrace,
    cap: Optional[int],
) -> LabelingTrace:
    """
    検証に失敗した連結成分を厳密解の証拠列で置き換える
    成分ごとに独立なので、残した成分の順序に追加しても正当性は保たれる
    """
    owner = partition.block_index()
    order = trace.sequence
    kept: List[int] = []
    replaced: List[int] = []
    failing: List[List[int]] = []
    for component in connected_components(forest):
        members = set(component)
        own = [v for v in order if v in members]
        blocks = {owner[v] for v in component if v in owner}
        subgraph, originals = induced_subgraph(forest, component)
        local = {v: i for i, v in enumerate(originals)}
        check = validate_sequence(subgraph, [local[v] for v in own])
        if isinstance(check, LegalSequence) and len(check) == len(component) - len(blocks):
            kept.extend(own)
            continue
        failing.append(component)
        witness = grundy_exact(subgraph, cap).witness
        replaced.extend(originals[v] for v in witness.order)

    kept_set = set(kept)
    new_order = [v for v in order if v in kept_set] + replaced
    logger.warning(f"Forest labeling fell back to the exact witness on components {failing}")
    labeled = set(new_order)
    unlabeled = {}
    for b, block_vertices in enumerate(partition.blocks):
        missing = [v for v in block_vertices if v not in labeled]
        if len(missing) == 1:
            unlabeled[b] = missing[0]
    return LabelingTrace(
        label={v: i for i, v in enumerate(new_order, start=1)},
        iterations=trace.iterations,
        unlabeled=unlabeled,
        partition_size=partition.size,
        retries=trace.retries,
        fallback=True,
    )


def forest_labeling(
    forest: Graph,
    partition: Optional[CaterpillarPartition] = None,
    cap: Optional[int] = None,
) -> LabelingTrace:
    """
    森ラベリング
    検証に失敗したらブロックの背骨の向きを反転して再実行し、
    それでも失敗した成分は厳密解の証拠列に置き換えて fallback を立てる

    Args:
        forest: 森（孤立点を含んでよい）
        partition: 使用する毛虫分割（省略時は最小毛虫分割を計算）
        cap: 代替時の厳密解の頂点数上限

    Returns:
        検証済みのラベリング
    """
    if not is_forest(forest):
        raise GraphArgumentError("Forest labeling needs a forest")
    if partition is None:
        partition = minimum_caterpillar_partition(forest)
    else:
        problems = validate_partition(forest, partition)
        if problems:
            raise GraphArgumentError(f"Invalid caterpillar partition: {'; '.join(problems)}")

    flipped: Set[int] = set()
    trace = LabelingTrace(partition_size=partition.size)
    for attempt in range(LABELING_MAX_RETRIES + 1):
        labeler = _ForestLabeler(forest, partition, flipped)
        try:
            trace = labeler.run()
        except _LabelingFailure as failure:
            logger.warning(f"Forest labeling stalled: {failure}")
            trace = labeler.trace
            offending: Optional[int] = failure.block
        else:
            offending = _certify(forest, partition, trace)
        trace.retries = attempt
        if offending is None:
            return trace
        if offending in flipped:
            break
        logger.warning(f"Retrying forest labeling with block {offending} reversed")
        flipped.add(offending)

    fallback = _substitute_exact(forest, partition, trace, cap)
    result = validate_sequence(forest, fallback.sequence)
    if isinstance(result, SequenceViolation) or len(result) != forest.n - partition.size:
        raise InvariantViolation(
            f"No legal sequence of length {forest.n - partition.size} could be certified"
        )
    return fallback


def grundy_forest(forest: Graph, cap: Optional[int] = None) -> GrundyResult:
    """
    森のGrundy支配数 γ = |V(F)| − ℓ
    証拠列は森ラベリングの結果（孤立点を含む）
    """
    if not is_forest(forest):
        raise GraphArgumentError("grundy_forest needs a forest")
    partition = minimum_caterpillar_partition(forest)
    trace = forest_labeling(forest, partition, cap)
    value = forest.n - partition.size
    witness = require_legal(forest, trace.sequence)
    if len(witness) != value:
        raise InvariantViolation(f"Forest witness has length {len(witness)}, expected {value}")
    return GrundyResult(
        value=value, witness=witness, method=SolveMethod.FOREST, fallback=trace.fallback
    )


def step_three_safety_violations(
    forest: Graph, partition: CaterpillarPartition, trace: LabelingTrace
) -> List[int]:
    """
    step 3 でラベルを付けた頂点のうち、自身も自ブロックのより大きい位置の頂点も
    フットプリントしていないもの
    """
    result = validate_sequence(forest, trace.sequence)
    owner = partition.block_index()
    violations = []
    for snapshot in trace.iterations:
        for v in snapshot.step_three:
            if isinstance(result, SequenceViolation):
                violations.append(v)
                continue
            footprint = result.footprints[result.order.index(v)]
            if v in footprint:
                continue
            own = snapshot.positions[v]
            if not any(
                owner.get(u) == owner[v] and snapshot.positions.get(u, 0) > own for u in footprint
            ):
                violations.append(v)
    return violations
