"""
強積の恒等式チェックと構成的定理（全域木・全支配的な最大正当列・摂動の窓）
"""

import logging
from collections import Counter
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .config import EXACT_VERTEX_CAP
from .errors import (
    CapacityError,
    GraphArgumentError,
    InvariantViolation,
    PreconditionError,
)
from .forest_labeling import grundy_forest
from .graph_core import (
    Edge,
    Graph,
    delete_edge,
    delete_vertex,
    has_twin,
    is_complete,
    is_connected,
    is_forest,
    is_simplicial,
    is_tree,
    iter_bits,
    leaf_edges,
    strong_product,
)
from .legal_engine import grundy_exact, is_legal, require_legal
from .types import (
    FiberView,
    GrundyResult,
    LeafEdgeAuditReport,
    LegalSequence,
    PeelBoundReport,
    PerturbationReport,
    ProductCheckReport,
    SpanningTreeCertificate,
    SpanningTreeStep,
    TotalDominationRepair,
    TotalDominationResult,
)

logger = logging.getLogger(__name__)

EDGE_WINDOW = frozenset({-1, 0, 1})
VERTEX_WINDOW = frozenset({-2, -1, 0})
SIMPLICIAL_WINDOW = frozenset({-1, 0})
TWIN_WINDOW = frozenset({0})

SequenceLike = Union[LegalSequence, Sequence[int]]


def _order_of(sequence: SequenceLike) -> List[int]:
    if isinstance(sequence, LegalSequence):
        return list(sequence.order)
    return list(sequence)


def _edge_key(edge: Edge) -> str:
    return f"{edge[0]}-{edge[1]}"


def grundy_value(graph: Graph, cap: Optional[int] = None) -> GrundyResult:
    """森なら森パイプライン、それ以外は厳密DP"""
    if is_forest(graph):
        return grundy_forest(graph, cap)
    return grundy_exact(graph, cap)


def product_sequence(
    g_graph: Graph, h_graph: Graph, s_order: SequenceLike, d_order: SequenceLike
) -> LegalSequence:
    """
    G の正当列 S と H の正当列 D から、(s, d) を辞書式に並べた G⊠H の正当列を作る
    長さ |S|·|D| なので γ(G⊠H) ≥ γ(G)γ(H) の構成的な証拠になる
    """
    s_seq = require_legal(g_graph, _order_of(s_order))
    d_seq = require_legal(h_graph, _order_of(d_order))
    product = strong_product(g_graph, h_graph, cap=g_graph.n * h_graph.n)
    order = [s * h_graph.n + d for s in s_seq.order for d in d_seq.order]
    try:
        return require_legal(product, order)
    except GraphArgumentError as e:
        raise InvariantViolation(f"Lexicographic product sequence is not legal: {e}") from e


def fiber_footprint_bound(
    g_graph: Graph,
    h_graph: Graph,
    sequence: SequenceLike,
    v: int,
    cap: Optional[int] = None,
    product: Optional[Graph] = None,
    gamma_product: Optional[int] = None,
    gamma_h: Optional[int] = None,
) -> FiberView:
    """
    H-ファイバー {v}×H にフットプリントを持つ列中の頂点 F_v を数える

    Args:
        g_graph: 因子G
        h_graph: 因子H
        sequence: G⊠H の最大正当列
        v: 固定するGの頂点
        cap: 厳密解の頂点数上限
        product: 構築済みの G⊠H（省略時は構築）
        gamma_product: 既知の γ(G⊠H)
        gamma_h: 既知の γ(H)

    Returns:
        F_v、その H 座標への射影と上界 γ(H)
    """
    g_graph.check_vertex(v)
    if product is None:
        product = strong_product(g_graph, h_graph)
    order = _order_of(sequence)
    legal = require_legal(product, order)
    if gamma_product is None:
        gamma_product = grundy_exact(product, cap).value
    if len(legal) != gamma_product:
        raise PreconditionError(
            f"Sequence of length {len(legal)} is not maximum in the product "
            f"(gamma = {gamma_product})"
        )
    if gamma_h is None:
        gamma_h = grundy_exact(h_graph, cap).value

    nh = h_graph.n
    start = v * nh
    fiber_mask = ((1 << nh) - 1) << start
    view = FiberView(v=v, start=start, size=nh, bound=gamma_h)
    for x, footprint in zip(legal.order, legal.footprints):
        if start <= x < start + nh:
            view.members.append(x)
        if any(fiber_mask >> y & 1 for y in footprint):
            view.footprinters.append(x)
            view.by_fiber.setdefault(x // nh, []).append(x)
            view.projection.append(x % nh)

    view.projection_legal = (
        len(set(view.projection)) == len(view.projection)
        and is_legal(h_graph, view.projection)
    )
    if not view.ok:
        logger.error(
            f"Fiber bound fails at v={v}: |F_v|={len(view.footprinters)}, "
            f"bound={gamma_h}, projection legal={view.projection_legal}"
        )
    return view


def check_product_identity(
    g_graph: Graph, h_graph: Graph, cap: Optional[int] = None
) -> ProductCheckReport:
    """
    γ(G⊠H) と γ(G)·γ(H) を比較
    下界は常に、等号は少なくとも一方の因子が森のときに成り立つはず
    """
    cap = EXACT_VERTEX_CAP if cap is None else cap
    size = g_graph.n * h_graph.n
    if size > cap:
        raise CapacityError(
            f"Product of {g_graph.n}x{h_graph.n} = {size} vertices is above the exact cap "
            f"of {cap}; sample smaller factors"
        )

    gamma_g = grundy_value(g_graph, cap)
    gamma_h = grundy_value(h_graph, cap)
    product = strong_product(g_graph, h_graph)
    gamma_p = grundy_exact(product, cap)
    lexicographic = product_sequence(g_graph, h_graph, gamma_g.witness, gamma_h.witness)

    expected = gamma_g.value * gamma_h.value
    report = ProductCheckReport(
        n_g=g_graph.n,
        n_h=h_graph.n,
        gamma_g=gamma_g.value,
        gamma_h=gamma_h.value,
        gamma_product=gamma_p.value,
        identity_holds=gamma_p.value == expected,
        lower_bound_holds=gamma_p.value >= expected and len(lexicographic) == expected,
        forest_factor=is_forest(g_graph) or is_forest(h_graph),
        witnesses={
            "G": list(gamma_g.witness.order),
            "H": list(gamma_h.witness.order),
            "product": list(gamma_p.witness.order),
        },
        product_sequence=list(lexicographic.order),
    )

    for v in g_graph.vertices():
        view = fiber_footprint_bound(
            g_graph,
            h_graph,
            gamma_p.witness,
            v,
            cap=cap,
            product=product,
            gamma_product=gamma_p.value,
            gamma_h=gamma_h.value,
        )
        if not view.ok:
            report.fiber_bound_violations.append(v)

    if not report.lower_bound_holds:
        logger.error(f"Product lower bound fails: {gamma_p.value} < {expected}")
    if report.forest_factor and not report.identity_holds:
        logger.error(
            f"Product identity fails with a forest factor: "
            f"{gamma_p.value} != {gamma_g.value}*{gamma_h.value}"
        )
    logger.debug(
        f"Product check {g_graph.n}x{h_graph.n}: {gamma_p.value} vs {expected}, ok={report.ok}"
    )
    return report


def simplicial_peel_bound(
    g_graph: Graph, h_graph: Graph, v: int, cap: Optional[int] = None
) -> PeelBoundReport:
    """単体頂点 v について γ(G⊠H) ≤ γ(H) + γ((G−v)⊠H) を両辺とも計算して確認"""
    g_graph.check_vertex(v)
    if not is_simplicial(g_graph, v):
        raise GraphArgumentError(f"Vertex {v} is not simplicial")
    lhs = grundy_exact(strong_product(g_graph, h_graph), cap).value
    peeled, _ = delete_vertex(g_graph, v)
    rhs = grundy_exact(h_graph, cap).value
    rhs += grundy_exact(strong_product(peeled, h_graph), cap).value
    if lhs > rhs:
        logger.error(f"Simplicial peel bound fails at v={v}: {lhs} > {rhs}")
    return PeelBoundReport(v=v, lhs=lhs, rhs=rhs, ok=lhs <= rhs)


def spanning_tree_ge(graph: Graph, cap: Optional[int] = None) -> SpanningTreeCertificate:
    """
    γ を減らさない全域木を、閉路辺を1本ずつ削除して求める
    各ステップでは閉路の辺をID順に試し、γ が減らない最初の辺を削除する

    Returns:
        全域木の辺と、削除の連鎖（各ステップで γ は単調非減少）
    """
    if graph.n == 0 or not is_connected(graph):
        raise GraphArgumentError("Spanning tree extraction needs a connected graph")

    gamma_graph = grundy_exact(graph, cap).value
    current = graph
    gamma_current = gamma_graph
    steps: List[SpanningTreeStep] = []
    while not is_tree(current):
        cycle_edges = nx.find_cycle(current.to_networkx(), source=0)
        cycle = [u for u, _ in cycle_edges]
        candidates = sorted((min(u, w), max(u, w)) for u, w in cycle_edges)
        for u, w in candidates:
            reduced = delete_edge(current, u, w)
            gamma_after = grundy_exact(reduced, cap).value
            if gamma_after >= gamma_current:
                steps.append(
                    SpanningTreeStep(
                        edge=(u, w),
                        cycle=cycle,
                        gamma_before=gamma_current,
                        gamma_after=gamma_after,
                    )
                )
                current = reduced
                gamma_current = gamma_after
                break
        else:
            logger.error(f"No cycle edge keeps gamma >= {gamma_current} on cycle {cycle}")
            raise InvariantViolation(
                f"Every edge of cycle {cycle} decreases the Grundy domination number"
            )

    logger.debug(f"Spanning tree after {len(steps)} deletions: {gamma_graph} -> {gamma_current}")
    return SpanningTreeCertificate(
        tree_edges=current.edges(),
        gamma_graph=gamma_graph,
        gamma_tree=gamma_current,
        steps=steps,
    )


def _require_total_domination_input(graph: Graph) -> None:
    if graph.m == 0:
        raise GraphArgumentError("Total-dominating Grundy set needs at least one edge")
    if not is_connected(graph):
        raise GraphArgumentError("Total-dominating Grundy set needs a connected graph")
    if is_complete(graph):
        raise GraphArgumentError("Total-dominating Grundy set is undefined for complete graphs")


def _isolated_in(graph: Graph, order: Sequence[int]) -> Optional[int]:
    chosen = 0
    for v in order:
        chosen |= 1 << v
    for v in order:
        if not graph.adj[v] & chosen:
            return v
    return None


def _bridge(graph: Graph, v: int, order: Sequence[int]) -> Optional[Tuple[int, int]]:
    """v から距離2にある列中の最小頂点 x と、共通の隣接頂点の最小 u"""
    closed = graph.closed_mask(v)
    for x in sorted(order):
        if closed >> x & 1:
            continue
        common = graph.adj[v] & graph.adj[x]
        if common:
            return x, next(iter_bits(common))
    return None


def repair_total_domination(
    graph: Graph, order: SequenceLike, cap: Optional[int] = None
) -> TotalDominationResult:
    """
    最大正当列から、選ばれた頂点の誘導部分グラフの孤立点を取り除く
    孤立点 v を列から外し、距離2の頂点 x との共通隣接頂点 u を末尾に加える

    Args:
        graph: 連結で完全でないグラフ
        order: 最大正当列
        cap: 厳密解の頂点数上限

    Returns:
        修復後の列と修復の記録
    """
    _require_total_domination_input(graph)
    start = _order_of(order)
    sequence = require_legal(graph, start)
    gamma = grundy_exact(graph, cap).value
    if len(sequence) != gamma:
        raise PreconditionError(
            f"Sequence of length {len(sequence)} is not maximum (gamma = {gamma})"
        )

    current = list(start)
    repairs: List[TotalDominationRepair] = []
    for _ in range(len(start) + 1):
        v = _isolated_in(graph, current)
        if v is None:
            break
        bridge = _bridge(graph, v, current)
        if bridge is None:
            logger.error(f"Isolated vertex {v} has no chosen vertex at distance 2")
            raise InvariantViolation(
                f"Vertex {v} is isolated among {current} with no chosen vertex at distance 2"
            )
        x, u = bridge
        current = [w for w in current if w != v] + [u]
        repairs.append(TotalDominationRepair(removed=v, anchor=x, appended=u))
        logger.debug(f"Replaced isolated vertex {v} by {u} (via {x})")
    else:
        raise InvariantViolation(f"Repair did not terminate within {len(start)} steps")

    try:
        repaired = require_legal(graph, current)
    except GraphArgumentError as e:
        raise InvariantViolation(f"Repaired sequence is not legal: {e}") from e
    if len(repaired) != gamma:
        raise InvariantViolation(f"Repair changed the sequence length to {len(repaired)}")
    return TotalDominationResult(sequence=repaired, start=start, repairs=repairs)


def total_dominating_grundy_set(
    graph: Graph, start: Optional[SequenceLike] = None, cap: Optional[int] = None
) -> TotalDominationResult:
    """誘導部分グラフに孤立点のない最大正当列（省略時は厳密解の証拠列から修復）"""
    _require_total_domination_input(graph)
    if start is None:
        start = grundy_exact(graph, cap).witness
    return repair_total_domination(graph, start, cap)


def perturbation_audit(graph: Graph, cap: Optional[int] = None) -> PerturbationReport:
    """
    全ての辺削除・頂点削除について Δ = γ(G−x) − γ(G) を計算し、窓に入るか確認
    辺は {−1,0,1}、頂点は {−2,−1,0}、単体頂点は {−1,0}、双子を持つ頂点は {0}
    """
    gamma = grundy_exact(graph, cap).value
    report = PerturbationReport(gamma=gamma)

    for u, w in graph.edges():
        key = _edge_key((u, w))
        delta = grundy_exact(delete_edge(graph, u, w), cap).value - gamma
        report.edge_deltas[key] = delta
        if delta not in EDGE_WINDOW:
            report.violations.append(f"edge {key}: delta {delta}")

    # 1頂点のグラフから頂点を消すと空グラフになるので対象外
    if graph.n > 1:
        for v in graph.vertices():
            reduced, _ = delete_vertex(graph, v)
            delta = grundy_exact(reduced, cap).value - gamma
            report.vertex_deltas[v] = delta
            window = VERTEX_WINDOW
            if is_simplicial(graph, v):
                report.simplicial.append(v)
                window = SIMPLICIAL_WINDOW
            if has_twin(graph, v):
                report.twins.append(v)
                window = TWIN_WINDOW
            if delta not in window:
                report.violations.append(
                    f"vertex {v}: delta {delta} outside {sorted(window)}"
                )

    report.edge_histogram = dict(sorted(Counter(report.edge_deltas.values()).items()))
    report.vertex_histogram = dict(sorted(Counter(report.vertex_deltas.values()).items()))
    for violation in report.violations:
        logger.error(f"Perturbation window violated: {violation}")
    return report


def leaf_edge_audit(forest: Graph, cap: Optional[int] = None) -> LeafEdgeAuditReport:
    """森の葉辺を削除しても γ が減らないことを確認"""
    if not is_forest(forest):
        raise GraphArgumentError("Leaf-edge audit needs a forest")
    gamma = grundy_exact(forest, cap).value
    report = LeafEdgeAuditReport(gamma=gamma)
    for u, w in leaf_edges(forest):
        key = _edge_key((u, w))
        delta = grundy_exact(delete_edge(forest, u, w), cap).value - gamma
        report.deltas[key] = delta
        if delta < 0:
            report.violations.append(f"leaf edge {key}: delta {delta}")
            logger.error(f"Leaf-edge deletion decreased gamma: {key} ({delta})")
    return report


def fiber_views(
    g_graph: Graph, h_graph: Graph, cap: Optional[int] = None
) -> Dict[int, FiberView]:
    """厳密解の証拠列に対する全ての v の FiberView"""
    product = strong_product(g_graph, h_graph)
    witness = grundy_exact(product, cap)
    gamma_h = grundy_exact(h_graph, cap).value
    return {
        v: fiber_footprint_bound(
            g_graph,
            h_graph,
            witness.witness,
            v,
            cap=cap,
            product=product,
            gamma_product=witness.value,
            gamma_h=gamma_h,
        )
        for v in g_graph.vertices()
    }
