"""
サブコマンドごとの処理（バッチワーカーからプロセス越しに呼ばれる）
"""

import logging
from typing import Any, Callable, Dict, Tuple

from ..engine.caterpillar_partition import (
    canopy_graph,
    classify_leaf_caterpillars,
    is_caterpillar_critical,
    minimum_caterpillar_partition,
)
from ..engine.errors import (
    CapacityError,
    GraphArgumentError,
    GraphParseError,
    InvariantViolation,
    PreconditionError,
)
from ..engine.forest_labeling import forest_labeling, grundy_forest
from ..engine.graph_core import Graph, is_forest, is_tree
from ..engine.graph_io import parse_graph
from ..engine.legal_engine import end_support_lower_bound, grundy_exact, is_legal
from ..engine.product_theorems import (
    check_product_identity,
    grundy_value,
    perturbation_audit,
    spanning_tree_ge,
    total_dominating_grundy_set,
)
from ..engine.types import GrundyResult, RunConfig
from .reports import to_payload

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVARIANT = 2

CommandResult = Tuple[Dict[str, Any], int]


def exit_code_for(error: BaseException) -> int:
    """例外を終了コードに対応付け（不変条件違反のみ 2）"""
    if isinstance(error, InvariantViolation):
        return EXIT_INVARIANT
    return EXIT_ERROR


def _finish(payload: Dict[str, Any], ok: bool) -> CommandResult:
    payload["ok"] = ok
    return payload, EXIT_OK if ok else EXIT_INVARIANT


def _gamma(graph: Graph, config: RunConfig) -> Dict[str, Any]:
    method = config.options.get("method")
    result: GrundyResult
    if method == "exact":
        result = grundy_exact(graph, config.cap)
    elif method == "forest":
        result = grundy_forest(graph, config.cap)
    else:
        result = grundy_value(graph, config.cap)
    payload: Dict[str, Any] = {
        "n": graph.n,
        "m": graph.m,
        "gamma": result.value,
        "method": result.method.value,
        "witness": list(result.witness.order),
        "fallback": result.fallback,
    }
    if is_tree(graph) and graph.n >= 2:
        bound = end_support_lower_bound(graph)
        payload["end_support_bound"] = bound
        if bound > result.value:
            logger.warning(
                f"End-support bound {bound} exceeds gamma {result.value} (reported only)"
            )
    return payload


def _partition(graph: Graph, config: RunConfig) -> Dict[str, Any]:
    if not is_forest(graph):
        raise GraphArgumentError("Caterpillar partitions are defined for forests")
    partition = minimum_caterpillar_partition(graph)
    canopy = canopy_graph(graph, partition)
    return {
        "n": graph.n,
        "size": partition.size,
        "gamma": graph.n - partition.size,
        "blocks": partition.blocks,
        "branch_edges": [list(edge) for edge in partition.branch_edges],
        "spines": [spine.path for spine in partition.spines],
        "isolates": partition.isolates,
        "canopy_edges": [list(edge) for edge in canopy.edges],
        "leaf_caterpillars": [
            to_payload(leaf) for leaf in classify_leaf_caterpillars(graph, partition)
        ],
        "caterpillar_critical": is_caterpillar_critical(graph),
    }


def _label(graph: Graph, config: RunConfig) -> Dict[str, Any]:
    trace = forest_labeling(graph, cap=config.cap)
    sequence = trace.sequence
    return {
        "n": graph.n,
        "partition_size": trace.partition_size,
        "length": len(sequence),
        "sequence": sequence,
        "legal": is_legal(graph, sequence),
        "unlabeled": to_payload(trace)["unlabeled"],
        "iterations": [to_payload(snapshot) for snapshot in trace.iterations],
        "retries": trace.retries,
        "fallback": trace.fallback,
    }


def _spanning_tree(graph: Graph, config: RunConfig) -> Dict[str, Any]:
    return to_payload(spanning_tree_ge(graph, config.cap))


def _total_set(graph: Graph, config: RunConfig) -> Dict[str, Any]:
    result = total_dominating_grundy_set(graph, cap=config.cap)
    return {
        "sequence": list(result.sequence.order),
        "start": result.start,
        "repairs": [to_payload(repair) for repair in result.repairs],
    }


def _perturb(graph: Graph, config: RunConfig) -> Dict[str, Any]:
    return to_payload(perturbation_audit(graph, config.cap))


GRAPH_COMMANDS: Dict[str, Callable[[Graph, RunConfig], Dict[str, Any]]] = {
    "gamma": _gamma,
    "partition": _partition,
    "label": _label,
    "spanning-tree": _spanning_tree,
    "total-set": _total_set,
    "perturb": _perturb,
}


def run_graph_command(config: RunConfig, source: str, text: str) -> CommandResult:
    """
    1つのグラフファイルに対してサブコマンドを実行

    Args:
        config: 実行設定
        source: 入力名（レポートの instance）
        text: ファイル内容

    Returns:
        (レポート, 終了コード)
    """
    handler = GRAPH_COMMANDS.get(config.subcommand)
    if handler is None:
        raise GraphArgumentError(f"Unknown subcommand: {config.subcommand}")
    graph = parse_graph(text, source)
    payload: Dict[str, Any] = {"command": config.subcommand, "instance": source}
    payload.update(handler(graph, config))
    ok = True
    if config.subcommand == "label":
        ok = bool(payload["legal"]) and payload["length"] == graph.n - payload["partition_size"]
    elif config.subcommand == "perturb":
        ok = not payload["violations"]
    return _finish(payload, ok)


def run_product_command(
    config: RunConfig, source_g: str, source_h: str, text_g: str, text_h: str
) -> CommandResult:
    """product-check: 2つのグラフの強積の恒等式を確認"""
    g_graph = parse_graph(text_g, source_g)
    h_graph = parse_graph(text_h, source_h)
    report = check_product_identity(g_graph, h_graph, config.cap)
    payload: Dict[str, Any] = {"command": "product-check", "instance": f"{source_g} x {source_h}"}
    payload.update(to_payload(report))
    return _finish(payload, report.ok)


def error_payload(command: str, source: str, error: BaseException) -> Dict[str, Any]:
    """失敗した項目のレポート"""
    kind = {
        GraphParseError: "parse",
        CapacityError: "capacity",
        PreconditionError: "precondition",
        InvariantViolation: "invariant",
        GraphArgumentError: "argument",
    }
    category = "io" if isinstance(error, OSError) else "error"
    for cls, name in kind.items():
        if isinstance(error, cls):
            category = name
            break
    payload: Dict[str, Any] = {
        "command": command,
        "instance": source,
        "ok": False,
        "error": str(error),
        "error_kind": category,
    }
    if isinstance(error, GraphParseError) and error.line is not None:
        payload["line"] = error.line
    return payload
