"""
グラフの不変表現
構築・摂動（辺/頂点削除）・構造判定・強積を提供する
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from .config import PRODUCT_VERTEX_CAP
from .errors import CapacityError, GraphArgumentError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


def iter_bits(mask: int) -> Iterator[int]:
    """ビット集合の要素を昇順に列挙"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(vertices: Iterable[int]) -> int:
    """頂点集合をビット集合に変換"""
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class Graph:
    """
    単純無向グラフ
    頂点は 0..n-1 の整数で、adj[v] は v の開近傍をビット集合で保持する
    names は入出力用のメタデータのみ
    """
    n: int
    adj: Tuple[int, ...]
    names: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphArgumentError(f"Vertex count must be non-negative, got {self.n}")
        if len(self.adj) != self.n:
            raise GraphArgumentError(
                f"Adjacency has {len(self.adj)} rows but the graph has {self.n} vertices"
            )
        if self.names is not None and len(self.names) != self.n:
            raise GraphArgumentError(
                f"Got {len(self.names)} vertex names for {self.n} vertices"
            )

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Edge],
        names: Optional[Sequence[str]] = None,
    ) -> "Graph":
        """
        辺リストからグラフを構築
        自己ループと多重辺は拒否する

        Args:
            n: 頂点数
            edges: (u, v) の列
            names: 頂点名（任意）

        Returns:
            構築したグラフ
        """
        if n < 0:
            raise GraphArgumentError(f"Vertex count must be non-negative, got {n}")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphArgumentError(f"Edge ({u}, {v}) is out of range for n={n}")
            if u == v:
                raise GraphArgumentError(f"Self-loop at vertex {u} is not allowed")
            if (adj[u] >> v) & 1:
                raise GraphArgumentError(f"Duplicate edge ({u}, {v})")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj), tuple(names) if names is not None else None)

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        """networkxのグラフから変換（頂点は整列順に番号付け）"""
        try:
            nodes = sorted(graph.nodes())
        except TypeError:
            nodes = list(graph.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        edges = [(index[u], index[v]) for u, v in graph.edges()]
        names = None
        if nodes != list(range(len(nodes))):
            names = [str(node) for node in nodes]
        return cls.from_edges(len(nodes), edges, names)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph

    @cached_property
    def m(self) -> int:
        """辺の本数"""
        return sum(popcount(row) for row in self.adj) // 2

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def vertices(self) -> range:
        return range(self.n)

    def check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or not 0 <= v < self.n:
            raise GraphArgumentError(f"Vertex {v} is out of range for n={self.n}")

    def neighbors(self, v: int) -> List[int]:
        self.check_vertex(v)
        return list(iter_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        self.check_vertex(v)
        return popcount(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        self.check_vertex(u)
        self.check_vertex(v)
        return bool((self.adj[u] >> v) & 1)

    def closed_mask(self, v: int) -> int:
        """閉近傍 N[v] のビット集合"""
        return self.adj[v] | (1 << v)

    def edges(self) -> List[Edge]:
        """u < v の辺を辞書順で返す"""
        result = []
        for u in range(self.n):
            for v in iter_bits(self.adj[u] >> (u + 1)):
                result.append((u, u + 1 + v))
        return result

    def name_of(self, v: int) -> str:
        if self.names is None:
            return str(v)
        return self.names[v]

    def is_valid(self) -> bool:
        """隣接の対称性・自己ループなし・範囲内をすべて確認"""
        for v, row in enumerate(self.adj):
            if (row >> v) & 1 or row >> self.n:
                return False
            for u in iter_bits(row):
                if not (self.adj[u] >> v) & 1:
                    return False
        return True


@dataclass(frozen=True)
class ProductVertex:
    """強積 G⊠H の頂点 (g, h)。index = g·|V(H)| + h"""
    g: int
    h: int
    index: int


def closed_neighborhood(graph: Graph, v: int) -> FrozenSet[int]:
    """閉近傍 N[v] = N(v) ∪ {v}"""
    graph.check_vertex(v)
    return frozenset(iter_bits(graph.closed_mask(v)))


def product_index(g_graph: Graph, h_graph: Graph, g: int, h: int) -> int:
    g_graph.check_vertex(g)
    h_graph.check_vertex(h)
    return g * h_graph.n + h


def product_vertex(g_graph: Graph, h_graph: Graph, index: int) -> ProductVertex:
    """平坦化インデックスから座標対を復元"""
    if not 0 <= index < g_graph.n * h_graph.n:
        raise GraphArgumentError(
            f"Product index {index} is out of range for {g_graph.n}x{h_graph.n}"
        )
    g, h = divmod(index, h_graph.n)
    return ProductVertex(g=g, h=h, index=index)


def h_fiber(g_graph: Graph, h_graph: Graph, g: int) -> range:
    """H-ファイバー {g}×H のインデックス（連続区間）"""
    g_graph.check_vertex(g)
    return range(g * h_graph.n, (g + 1) * h_graph.n)


def g_fiber(g_graph: Graph, h_graph: Graph, h: int) -> range:
    """G-ファイバー G×{h} のインデックス（等間隔）"""
    h_graph.check_vertex(h)
    return range(h, g_graph.n * h_graph.n, h_graph.n)


def strong_product(g_graph: Graph, h_graph: Graph, cap: Optional[int] = None) -> Graph:
    """
    強積 G⊠H を構築
    (g1,h1)~(g2,h2) ⇔ 両座標が「等しいか隣接」かつ頂点が異なる

    Args:
        g_graph: 因子G
        h_graph: 因子H
        cap: 積の頂点数上限（省略時は設定値）

    Returns:
        |V(G)|·|V(H)| 頂点のグラフ
    """
    cap = PRODUCT_VERTEX_CAP if cap is None else cap
    size = g_graph.n * h_graph.n
    if size > cap:
        raise CapacityError(f"Strong product has {size} vertices, above the cap of {cap}")

    nh = h_graph.n
    closed_h = [h_graph.closed_mask(y) for y in range(nh)]
    adj: List[int] = []
    for x in range(g_graph.n):
        block_rows = list(iter_bits(g_graph.closed_mask(x)))
        for y in range(nh):
            row = 0
            for x2 in block_rows:
                row |= closed_h[y] << (x2 * nh)
            row &= ~(1 << (x * nh + y))
            adj.append(row)
    logger.debug(f"Built strong product {g_graph.n}x{nh} with {size} vertices")
    return Graph(size, tuple(adj))


def delete_edge(graph: Graph, u: int, v: int) -> Graph:
    if not graph.has_edge(u, v):
        raise GraphArgumentError(f"Edge ({u}, {v}) does not exist")
    adj = list(graph.adj)
    adj[u] &= ~(1 << v)
    adj[v] &= ~(1 << u)
    return Graph(graph.n, tuple(adj), graph.names)


def add_edge(graph: Graph, u: int, v: int) -> Graph:
    if u == v:
        graph.check_vertex(u)
        raise GraphArgumentError(f"Self-loop at vertex {u} is not allowed")
    if graph.has_edge(u, v):
        raise GraphArgumentError(f"Edge ({u}, {v}) already exists")
    adj = list(graph.adj)
    adj[u] |= 1 << v
    adj[v] |= 1 << u
    return Graph(graph.n, tuple(adj), graph.names)


def delete_vertex(graph: Graph, v: int) -> Tuple[Graph, Dict[int, int]]:
    """
    頂点削除
    v より大きい頂点は1つ詰めて番号を振り直す

    Returns:
        (新しいグラフ, 旧番号→新番号の対応)
    """
    graph.check_vertex(v)
    low_mask = (1 << v) - 1
    adj: List[int] = []
    mapping: Dict[int, int] = {}
    for w in range(graph.n):
        if w == v:
            continue
        mapping[w] = w if w < v else w - 1
        row = graph.adj[w]
        adj.append((row & low_mask) | ((row >> (v + 1)) << v))
    names = None
    if graph.names is not None:
        names = graph.names[:v] + graph.names[v + 1:]
    return Graph(graph.n - 1, tuple(adj), names), mapping


def induced_subgraph(graph: Graph, vertices: Iterable[int]) -> Tuple[Graph, List[int]]:
    """
    誘導部分グラフ

    Returns:
        (部分グラフ, 新番号→旧番号のリスト)
    """
    keep = sorted(set(vertices))
    for v in keep:
        graph.check_vertex(v)
    index = {v: i for i, v in enumerate(keep)}
    keep_mask = mask_of(keep)
    edges = []
    for v in keep:
        for w in iter_bits(graph.adj[v] & keep_mask):
            if v < w:
                edges.append((index[v], index[w]))
    names = None
    if graph.names is not None:
        names = [graph.names[v] for v in keep]
    return Graph.from_edges(len(keep), edges, names), keep


def disjoint_union(g_graph: Graph, h_graph: Graph) -> Graph:
    """非交和。Hの頂点は |V(G)| だけずらす"""
    shift = g_graph.n
    adj = list(g_graph.adj) + [row << shift for row in h_graph.adj]
    return Graph(g_graph.n + h_graph.n, tuple(adj))


def connected_components(graph: Graph) -> List[List[int]]:
    """連結成分（各成分は昇順、成分は最小頂点順）"""
    components = []
    remaining = graph.full_mask
    while remaining:
        start = (remaining & -remaining).bit_length() - 1
        component = 1 << start
        frontier = component
        while frontier:
            reached = 0
            for v in iter_bits(frontier):
                reached |= graph.adj[v]
            frontier = reached & ~component
            component |= frontier
        components.append(list(iter_bits(component)))
        remaining &= ~component
    return components


def is_connected(graph: Graph) -> bool:
    return len(connected_components(graph)) <= 1


def is_complete(graph: Graph) -> bool:
    return all(graph.closed_mask(v) == graph.full_mask for v in range(graph.n))


def is_forest(graph: Graph) -> bool:
    return graph.m == graph.n - len(connected_components(graph))


def is_tree(graph: Graph) -> bool:
    return graph.n >= 1 and graph.m == graph.n - 1 and is_connected(graph)


def is_caterpillar(graph: Graph) -> bool:
    """
    毛虫判定
    木であり、葉をすべて除くと道（または1頂点以下）になる
    """
    if not is_tree(graph):
        return False
    core = [v for v in range(graph.n) if popcount(graph.adj[v]) >= 2]
    core_mask = mask_of(core)
    return all(popcount(graph.adj[v] & core_mask) <= 2 for v in core)


def is_simplicial(graph: Graph, v: int) -> bool:
    """近傍がクリークをなすか"""
    graph.check_vertex(v)
    neighborhood = graph.adj[v]
    return all(neighborhood & ~graph.closed_mask(u) == 0 for u in iter_bits(neighborhood))


def is_twin(graph: Graph, u: int, v: int) -> bool:
    """N[u] = N[v] となる異なる2頂点か"""
    graph.check_vertex(u)
    graph.check_vertex(v)
    return u != v and graph.closed_mask(u) == graph.closed_mask(v)


def has_twin(graph: Graph, u: int) -> bool:
    graph.check_vertex(u)
    target = graph.closed_mask(u)
    return any(w != u and graph.closed_mask(w) == target for w in iter_bits(graph.adj[u]))


def simplicial_vertices(graph: Graph) -> List[int]:
    return [v for v in range(graph.n) if is_simplicial(graph, v)]


def twin_classes(graph: Graph) -> List[List[int]]:
    """閉近傍が等しい頂点のクラス（2頂点以上のもののみ）"""
    classes: Dict[int, List[int]] = {}
    for v in range(graph.n):
        classes.setdefault(graph.closed_mask(v), []).append(v)
    return sorted(group for group in classes.values() if len(group) > 1)


def leaf_edges(graph: Graph) -> List[Edge]:
    """少なくとも一方の端点が葉である辺"""
    return [
        (u, v) for u, v in graph.edges()
        if popcount(graph.adj[u]) == 1 or popcount(graph.adj[v]) == 1
    ]


# ---------------- 代表的なグラフの構築 ----------------

def empty_graph(n: int) -> Graph:
    return Graph.from_edges(n, [])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphArgumentError(f"A cycle needs at least 3 vertices, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def star_graph(leaves: int) -> Graph:
    """中心 0、葉 1..leaves の星"""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def spider_graph(legs: Sequence[int]) -> Graph:
    """
    蜘蛛グラフ
    中心 0 から各脚を外向きに連番で伸ばす
    """
    edges = []
    next_id = 1
    for length in legs:
        previous = 0
        for _ in range(length):
            edges.append((previous, next_id))
            previous = next_id
            next_id += 1
    return Graph.from_edges(next_id, edges)
