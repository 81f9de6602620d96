"""
レポートの整形（JSONとテキスト）
"""

import json
from typing import Any, Dict, List, Sequence

from ..engine.types import BatchItem, ItemStatus, OutputFormat


def to_payload(obj: Any) -> Dict[str, Any]:
    """dataclass_json の型をJSON互換の辞書に変換（タプルは配列、Enumは値）"""
    payload: Dict[str, Any] = json.loads(obj.to_json())
    return payload


def render_json(document: Any) -> str:
    """キー順を固定したJSON（同じ入力なら同じバイト列）"""
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False)


def summarize(items: Sequence[BatchItem]) -> Dict[str, Any]:
    completed = sum(1 for item in items if item.status == ItemStatus.COMPLETED)
    return {
        "total": len(items),
        "completed": completed,
        "failed": len(items) - completed,
        "ok": sum(1 for item in items if item.report.get("ok")),
        "exit_code": overall_exit_code(items),
    }


def overall_exit_code(items: Sequence[BatchItem]) -> int:
    return max((item.exit_code for item in items), default=0)


def _witness(values: Sequence[int]) -> str:
    return " ".join(str(v) for v in values)


def _text_gamma(report: Dict[str, Any]) -> List[str]:
    lines = [
        f"gamma_gr = {report['gamma']}",
        f"method: {report['method']}",
        f"witness: {_witness(report['witness'])}",
    ]
    if "end_support_bound" in report:
        lines.append(f"end-support bound: {report['end_support_bound']}")
    if report.get("fallback"):
        lines.append("fallback: exact witness substituted")
    return lines


def _text_partition(report: Dict[str, Any]) -> List[str]:
    lines = [f"partition size = {report['size']}", f"gamma_gr = {report['gamma']}"]
    for i, (block, spine) in enumerate(zip(report["blocks"], report["spines"]), start=1):
        lines.append(f"C{i}: {_witness(block)}  spine: {_witness(spine)}")
    if report["branch_edges"]:
        edges = ", ".join(f"{u}-{v}" for u, v in report["branch_edges"])
        lines.append(f"branch edges: {edges}")
    if report["isolates"]:
        lines.append(f"isolates: {_witness(report['isolates'])}")
    lines.append(f"caterpillar-critical: {str(report['caterpillar_critical']).lower()}")
    return lines


def _text_label(report: Dict[str, Any]) -> List[str]:
    lines = [
        f"labels = {report['length']} (partition size {report['partition_size']})",
        f"sequence: {_witness(report['sequence'])}",
        f"iterations: {len(report['iterations'])}",
    ]
    for snapshot in report["iterations"]:
        lines.append(f"  j={snapshot['j']}: removed blocks {snapshot['removed_blocks']}")
    if report["retries"]:
        lines.append(f"retries: {report['retries']}")
    if report["fallback"]:
        lines.append("fallback: exact witness substituted")
    return lines


def _text_product(report: Dict[str, Any]) -> List[str]:
    expected = report["gamma_g"] * report["gamma_h"]
    relation = "=" if report["identity_holds"] else ">"
    lines = [
        f"identity_holds = {str(report['identity_holds']).lower()}",
        f"{report['gamma_product']} {relation} {report['gamma_g']}*{report['gamma_h']}"
        f" (= {expected})",
        f"forest factor: {str(report['forest_factor']).lower()}",
    ]
    if report["fiber_bound_violations"]:
        lines.append(f"fiber bound violations: {_witness(report['fiber_bound_violations'])}")
    return lines


def _text_spanning_tree(report: Dict[str, Any]) -> List[str]:
    lines = [f"gamma_gr(G) = {report['gamma_graph']}, gamma_gr(T) = {report['gamma_tree']}"]
    for step in report["steps"]:
        u, v = step["edge"]
        lines.append(f"  delete {u}-{v}: {step['gamma_before']} -> {step['gamma_after']}")
    edges = ", ".join(f"{u}-{v}" for u, v in report["tree_edges"])
    lines.append(f"tree edges: {edges}")
    return lines


def _text_total_set(report: Dict[str, Any]) -> List[str]:
    lines = [f"sequence: {_witness(report['sequence'])}"]
    for repair in report["repairs"]:
        lines.append(
            f"  replaced {repair['removed']} by {repair['appended']} (via {repair['anchor']})"
        )
    return lines


def _text_perturb(report: Dict[str, Any]) -> List[str]:
    lines = [
        f"gamma_gr = {report['gamma']}",
        f"edge deltas: {report['edge_histogram']}",
        f"vertex deltas: {report['vertex_histogram']}",
    ]
    lines.extend(f"violation: {violation}" for violation in report["violations"])
    return lines


def _text_selftest(report: Dict[str, Any]) -> List[str]:
    lines = [f"profile: {report['profile']}, seed: {report['seed']}"]
    for criterion in report["criteria"]:
        mark = "ok" if criterion["ok"] else "FAIL"
        lines.append(
            f"[{mark}] {criterion['criterion']}. {criterion['name']}: "
            f"instances={criterion['instances']}, violations={criterion['violations']}"
        )
        lines.extend(f"    {note}" for note in criterion["notes"])
    return lines


_TEXT_RENDERERS = {
    "gamma": _text_gamma,
    "partition": _text_partition,
    "label": _text_label,
    "product-check": _text_product,
    "spanning-tree": _text_spanning_tree,
    "total-set": _text_total_set,
    "perturb": _text_perturb,
    "selftest": _text_selftest,
}


def render_text(report: Dict[str, Any]) -> str:
    """1項目のテキストレポート"""
    header = f"== {report.get('instance', report.get('command', ''))}"
    if "error" in report:
        return "\n".join([header, f"error ({report['error_kind']}): {report['error']}"])
    renderer = _TEXT_RENDERERS.get(report.get("command", ""))
    body = renderer(report) if renderer else [render_json(report)]
    return "\n".join([header] + body)


def render(items: Sequence[BatchItem], output_format: OutputFormat, batch: bool) -> str:
    """
    バッチ結果を出力形式に合わせて整形
    batch でなければ単一のレポートをそのまま出力する
    """
    if output_format == OutputFormat.JSON:
        if not batch and len(items) == 1:
            return render_json(items[0].report)
        return render_json(
            {"reports": [item.report for item in items], "summary": summarize(items)}
        )

    blocks = [render_text(item.report) for item in items]
    if batch:
        summary = summarize(items)
        blocks.append(
            f"== summary: {summary['completed']}/{summary['total']} completed, "
            f"{summary['ok']} ok, exit code {summary['exit_code']}"
        )
    return "\n".join(blocks)
