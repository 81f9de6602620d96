"""
森の最小毛虫分割・背骨と位置・キャノピーグラフ・毛虫臨界性
"""

import logging
from enum import Enum, auto
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .errors import GraphArgumentError, InvariantViolation
from .graph_core import (
    Edge,
    Graph,
    connected_components,
    delete_edge,
    induced_subgraph,
    is_caterpillar,
    is_forest,
    iter_bits,
    leaf_edges,
    mask_of,
    popcount,
)
from .types import CanopyGraph, CaterpillarPartition, LeafCaterpillar, LeafClass, Spine

logger = logging.getLogger(__name__)


class PortionKind(Enum):
    """
    部分木 subtree(v) に含まれる v のブロック部分の形
    LEAF/LEG/DOUBLE は親への辺を残す場合、CLOSED_* は親への辺を切る（または v が根の）場合
    """
    LEAF = auto()  # v 単独でブロックの葉になる
    LEG = auto()  # v は背骨上で、背骨は下方向に高々1本
    DOUBLE = auto()  # 背骨が v の下で2方向に伸びる（親は葉でなければならない）
    CLOSED_LEAF = auto()  # ブロックが閉じ、v はその葉
    CLOSED_NONLEAF = auto()  # ブロックが閉じ、v は非葉


_ATTACHED = (PortionKind.LEAF, PortionKind.LEG, PortionKind.DOUBLE)
_CLOSED = (PortionKind.CLOSED_LEAF, PortionKind.CLOSED_NONLEAF)

# (残した子の数, LEGの子の数, DOUBLEの子の数, 葉のまま切り離された子があるか)
_State = Tuple[int, int, int, bool]


@lru_cache(maxsize=None)
def _attached_kind(state: _State) -> Optional[PortionKind]:
    attached, legs, doubles, leaf_cut = state
    if doubles >= 1 or legs >= 3:
        return None
    if attached == 0:
        # 両端点が葉の分岐辺になる
        return None if leaf_cut else PortionKind.LEAF
    if legs == 2:
        return PortionKind.DOUBLE
    return PortionKind.LEG


@lru_cache(maxsize=None)
def _closed_kind(state: _State) -> Optional[PortionKind]:
    attached, legs, doubles, leaf_cut = state
    if doubles >= 2:
        return None
    if doubles == 1:
        return PortionKind.CLOSED_LEAF if attached == 1 and not leaf_cut else None
    if legs >= 3 or attached == 0:
        return None
    if attached == 1:
        return None if leaf_cut else PortionKind.CLOSED_LEAF
    return PortionKind.CLOSED_NONLEAF


def _advance(state: _State, kept: bool, kind: PortionKind) -> _State:
    attached, legs, doubles, leaf_cut = state
    if kept:
        return (
            min(attached + 1, 2),
            min(legs + (kind is PortionKind.LEG), 3),
            min(doubles + (kind is PortionKind.DOUBLE), 2),
            leaf_cut,
        )
    return (attached, legs, doubles, leaf_cut or kind is PortionKind.CLOSED_LEAF)


class _ComponentSearch:
    """
    1つの木成分に対する分岐辺集合の分枝限定探索
    辺は子側端点の帰りがけ順に並べ、各辺で「切る」を先に試す
    未決定部分の最小追加カット数を部分木DPで求めて下界とする
    """

    def __init__(self, forest: Graph, vertices: List[int]):
        self.root = vertices[0]
        self.parent: Dict[int, int] = {self.root: -1}
        self.children: Dict[int, List[int]] = {}
        visit = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            visit.append(v)
            kids = [u for u in forest.neighbors(v) if u != self.parent[v]]
            self.children[v] = kids
            for u in kids:
                self.parent[u] = v
            stack.extend(kids)
        # 子を降順に訪問した行きがけ順の逆 = 子を昇順に訪問した帰りがけ順
        self.postorder = visit[::-1]
        self.edges = [v for v in self.postorder if v != self.root]
        self.cut: Dict[int, bool] = {}

    def edge(self, child: int) -> Edge:
        p = self.parent[child]
        return (min(p, child), max(p, child))

    def completion_cost(self) -> Optional[int]:
        """未決定の辺で必要な最小カット数（完成不能なら None）"""
        tables: Dict[int, Dict[PortionKind, int]] = {}
        for v in self.postorder:
            states: Dict[_State, int] = {(0, 0, 0, False): 0}
            for c in self.children[v]:
                decision = self.cut.get(c)
                options = []
                for kind, cost in tables[c].items():
                    if kind in _ATTACHED and decision is not True:
                        options.append((True, kind, cost))
                    elif kind in _CLOSED and decision is not False:
                        options.append((False, kind, cost + (1 if decision is None else 0)))
                merged: Dict[_State, int] = {}
                for state, cost in states.items():
                    for kept, kind, extra in options:
                        key = _advance(state, kept, kind)
                        total = cost + extra
                        if total < merged.get(key, total + 1):
                            merged[key] = total
                states = merged
                if not states:
                    break
            table: Dict[PortionKind, int] = {}
            for state, cost in states.items():
                for kind in (_attached_kind(state), _closed_kind(state)):
                    if kind is not None and cost < table.get(kind, cost + 1):
                        table[kind] = cost
            tables[v] = table
        root_costs = [cost for kind, cost in tables[self.root].items() if kind in _CLOSED]
        return min(root_costs) if root_costs else None

    def first_cut_set(self) -> List[Edge]:
        """切る辺の添字列が辞書順最小となる最小カット集合"""
        budget = self.completion_cost()
        if budget is None:
            raise InvariantViolation(
                f"Tree component rooted at {self.root} has no caterpillar partition"
            )
        logger.debug(f"Component at {self.root}: {len(self.edges)} edges, minimum cuts {budget}")
        self.cut.clear()
        for c in self.edges:
            if budget > 0:
                self.cut[c] = True
                cost = self.completion_cost()
                if cost is not None and cost <= budget - 1:
                    budget -= 1
                    continue
            self.cut[c] = False
        return [self.edge(c) for c in self.edges if self.cut[c]]

    def iter_cut_sets(self) -> Iterator[List[Edge]]:
        """最小カット集合をすべて辞書順に列挙"""
        budget = self.completion_cost()
        if budget is None:
            return
        self.cut.clear()
        yield from self._extend(0, budget)

    def _extend(self, i: int, budget: int) -> Iterator[List[Edge]]:
        if i == len(self.edges):
            yield [self.edge(c) for c in self.edges if self.cut[c]]
            return
        c = self.edges[i]
        if budget > 0:
            self.cut[c] = True
            cost = self.completion_cost()
            if cost is not None and cost <= budget - 1:
                yield from self._extend(i + 1, budget - 1)
        self.cut[c] = False
        cost = self.completion_cost()
        if cost is not None and cost <= budget:
            yield from self._extend(i + 1, budget)
        del self.cut[c]


# ---------------- 背骨と位置 ----------------

def _bfs(forest: Graph, source: int, mask: int) -> Tuple[Dict[int, int], Dict[int, int]]:
    dist = {source: 0}
    parent = {source: -1}
    frontier = [source]
    while frontier:
        reached = []
        for v in frontier:
            for u in iter_bits(forest.adj[v] & mask):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    parent[u] = v
                    reached.append(u)
        frontier = reached
    return dist, parent


def _path_to(parent: Dict[int, int], target: int) -> List[int]:
    path = [target]
    while parent[path[-1]] != -1:
        path.append(parent[path[-1]])
    return path[::-1]


def longest_paths(forest: Graph, vertices: Iterable[int]) -> List[List[int]]:
    """頂点集合が誘導する木の最長道を、両方向ともすべて返す"""
    keep = sorted(set(vertices))
    mask = mask_of(keep)
    best = -1
    paths: List[List[int]] = []
    for a in keep:
        dist, parent = _bfs(forest, a, mask)
        for b, d in dist.items():
            if d > best:
                best = d
                paths = []
            if d == best:
                paths.append(_path_to(parent, b))
    return paths


def canonical_spine(forest: Graph, block: Iterable[int]) -> List[int]:
    """最長道のうち (始点, 終点) が最小のもの（始点 < 終点の向き）"""
    paths = longest_paths(forest, block)
    return min(paths, key=lambda path: (path[0], path[-1]))


def spine_positions(forest: Graph, vertices: Iterable[int], path: Sequence[int]) -> Dict[int, int]:
    """
    位置の計算
    背骨上は 1 + v1 からの距離、背骨外は v1 からの距離
    """
    mask = mask_of(vertices)
    dist, _ = _bfs(forest, path[0], mask)
    on_spine = set(path)
    return {v: d + 1 if v in on_spine else d for v, d in dist.items()}


def _make_spine(forest: Graph, block: List[int], branch: Set[int]) -> Spine:
    path = canonical_spine(forest, block)
    position = spine_positions(forest, block, path)
    ranked = sorted((v for v in block if v in branch), key=lambda v: (position[v], v))
    return Spine(path=path, position=position, branch_vertices=ranked)


def _assemble(forest: Graph, branch_edges: Iterable[Edge]) -> CaterpillarPartition:
    branch_edges = sorted((min(u, v), max(u, v)) for u, v in branch_edges)
    pruned = forest
    for u, v in branch_edges:
        pruned = delete_edge(pruned, u, v)
    isolates = [v for v in range(forest.n) if forest.adj[v] == 0]
    isolate_set = set(isolates)
    blocks = [c for c in connected_components(pruned) if c[0] not in isolate_set]
    branch = {v for edge in branch_edges for v in edge}
    spines = [_make_spine(forest, block, branch) for block in blocks]
    return CaterpillarPartition(
        blocks=blocks, branch_edges=branch_edges, spines=spines, isolates=isolates
    )


def _require_forest(forest: Graph) -> None:
    if not is_forest(forest):
        raise GraphArgumentError("Caterpillar partitions are defined for forests only")


# ---------------- 公開API ----------------

def minimum_caterpillar_partition(forest: Graph) -> CaterpillarPartition:
    """
    最小毛虫分割
    各木成分で最小カット集合を分枝限定探索し、辞書順最初のものを正準解とする

    Args:
        forest: 森

    Returns:
        ブロックは最小頂点IDの昇順
    """
    _require_forest(forest)
    branch_edges: List[Edge] = []
    for component in connected_components(forest):
        if len(component) < 2:
            continue
        branch_edges.extend(_ComponentSearch(forest, component).first_cut_set())
    partition = _assemble(forest, branch_edges)
    logger.debug(
        f"Minimum caterpillar partition: {partition.size} blocks, "
        f"{len(partition.branch_edges)} branch edges"
    )
    return partition


def iter_minimum_partitions(forest: Graph) -> Iterator[CaterpillarPartition]:
    """最小毛虫分割をすべて列挙（成分ごとの選択の直積）"""
    _require_forest(forest)
    per_component: List[List[List[Edge]]] = []
    for component in connected_components(forest):
        if len(component) >= 2:
            per_component.append(list(_ComponentSearch(forest, component).iter_cut_sets()))

    def expand(index: int, chosen: List[Edge]) -> Iterator[List[Edge]]:
        if index == len(per_component):
            yield chosen
            return
        for cuts in per_component[index]:
            yield from expand(index + 1, chosen + cuts)

    for edges in expand(0, []):
        yield _assemble(forest, edges)


def minimum_partition_size(forest: Graph) -> int:
    """最小毛虫分割のブロック数 ℓ"""
    _require_forest(forest)
    total = 0
    for component in connected_components(forest):
        if len(component) < 2:
            continue
        cuts = _ComponentSearch(forest, component).completion_cost()
        if cuts is None:
            raise InvariantViolation(
                f"Tree component at {component[0]} has no caterpillar partition"
            )
        total += cuts + 1
    return total


def validate_partition(forest: Graph, partition: CaterpillarPartition) -> List[str]:
    """
    分割条件の検査（最小性は含まない）

    Returns:
        違反内容のリスト（空なら妥当）
    """
    problems: List[str] = []
    isolates = {v for v in range(forest.n) if forest.adj[v] == 0}
    owner: Dict[int, int] = {}
    for i, block in enumerate(partition.blocks):
        for v in block:
            if not 0 <= v < forest.n:
                problems.append(f"block {i} contains out-of-range vertex {v}")
            elif v in owner:
                problems.append(f"vertex {v} appears in blocks {owner[v]} and {i}")
            elif v in isolates:
                problems.append(f"isolate {v} appears in block {i}")
            else:
                owner[v] = i
    missing = [v for v in range(forest.n) if v not in owner and v not in isolates]
    if missing:
        problems.append(f"vertices {missing} are not covered")
    if problems:
        return problems

    for i, block in enumerate(partition.blocks):
        if len(block) < 2:
            problems.append(f"block {i} has fewer than 2 vertices")
        elif not is_caterpillar(induced_subgraph(forest, block)[0]):
            problems.append(f"block {i} does not induce a caterpillar")

    crossing = sorted(edge for edge in forest.edges() if owner.get(edge[0]) != owner.get(edge[1]))
    declared = sorted((min(u, v), max(u, v)) for u, v in partition.branch_edges)
    if crossing != declared:
        problems.append(f"branch edges {declared} differ from inter-block edges {crossing}")

    for u, v in crossing:
        if u in owner and v in owner:
            u_inner = popcount(forest.adj[u] & mask_of(partition.blocks[owner[u]]))
            v_inner = popcount(forest.adj[v] & mask_of(partition.blocks[owner[v]]))
            if u_inner < 2 and v_inner < 2:
                problems.append(f"branch edge ({u}, {v}) joins two block leaves")
    return problems


def partition_from_branch_edges(
    forest: Graph, branch_edges: Iterable[Edge]
) -> CaterpillarPartition:
    """明示した分岐辺集合から分割を構築（妥当でなければ引数エラー）"""
    _require_forest(forest)
    for u, v in branch_edges:
        if not forest.has_edge(u, v):
            raise GraphArgumentError(f"Branch edge ({u}, {v}) is not an edge of the forest")
    partition = _assemble(forest, branch_edges)
    problems = validate_partition(forest, partition)
    if problems:
        raise GraphArgumentError(f"Invalid caterpillar partition: {'; '.join(problems)}")
    return partition


def canopy_graph(forest: Graph, partition: CaterpillarPartition) -> CanopyGraph:
    """各ブロックを1頂点に縮約したグラフ（森であることを確認する）"""
    owner = partition.block_index()
    edges: Set[Edge] = set()
    for u, v in partition.branch_edges:
        if u not in owner or v not in owner or owner[u] == owner[v]:
            raise InvariantViolation(f"Branch edge ({u}, {v}) does not join two blocks")
        pair = (min(owner[u], owner[v]), max(owner[u], owner[v]))
        if pair in edges:
            raise InvariantViolation(f"Blocks {pair} are joined by more than one branch edge")
        edges.add(pair)
    contracted = Graph.from_edges(partition.size, sorted(edges))
    if not is_forest(contracted):
        raise InvariantViolation("Canopy graph contains a cycle")
    return CanopyGraph(
        size=partition.size, edges=sorted(edges), blocks=[list(b) for b in partition.blocks]
    )


def is_caterpillar_critical(forest: Graph) -> bool:
    """すべての葉辺の削除で ℓ が真に減少するか"""
    size = minimum_partition_size(forest)
    for u, v in leaf_edges(forest):
        if minimum_partition_size(delete_edge(forest, u, v)) >= size:
            return False
    return True


def classify_leaf_caterpillars(
    forest: Graph, partition: CaterpillarPartition
) -> List[LeafCaterpillar]:
    """
    分岐頂点がちょうど1つのブロックを分類
    P2、中心のみが分岐頂点のP5、その他
    """
    result = []
    for i, (block, spine) in enumerate(zip(partition.blocks, partition.spines)):
        if len(spine.branch_vertices) != 1:
            continue
        vertex = spine.branch_vertices[0]
        if len(block) == 2:
            leaf_class = LeafClass.P2
        elif len(block) == 5 and len(spine.path) == 5 and spine.path[2] == vertex:
            leaf_class = LeafClass.P5_CENTER
        else:
            leaf_class = LeafClass.OTHER
        result.append(LeafCaterpillar(block=i, branch_vertex=vertex, leaf_class=leaf_class))
    return result


def rank_one_adjacent_pairs(forest: Graph, partition: CaterpillarPartition) -> List[Edge]:
    """異なるブロックの順位1の分岐頂点どうしを結ぶ辺"""
    rank_one = {spine.branch_vertices[0] for spine in partition.spines if spine.branch_vertices}
    return [(u, v) for u, v in partition.branch_edges if u in rank_one and v in rank_one]
