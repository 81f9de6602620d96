"""
受け入れ基準のセルフテスト
"""

import json
import logging
import random
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Set, Tuple

from ..engine.caterpillar_partition import (
    minimum_caterpillar_partition,
    partition_from_branch_edges,
)
from ..engine.config import SELFTEST_PROFILES
from ..engine.corpus import (
    all_labeled_trees,
    random_connected_graph,
    random_forest,
    random_graph,
    random_non_complete_connected_graph,
    random_tree,
)
from ..engine.errors import GraphArgumentError, GrundyToolkitError, InvariantViolation
from ..engine.forest_labeling import forest_labeling, grundy_forest, step_three_safety_violations
from ..engine.graph_core import Graph, is_tree, mask_of
from ..engine.legal_engine import grundy_exact, is_legal
from ..engine.product_theorems import (
    check_product_identity,
    fiber_views,
    leaf_edge_audit,
    perturbation_audit,
    spanning_tree_ge,
    total_dominating_grundy_set,
)
from ..engine.types import CriterionResult, SpanningTreeCertificate
from ..engine.worked_examples import worked_examples
from .reports import to_payload

logger = logging.getLogger(__name__)

Profile = Dict[str, int]

MAX_NOTES = 10  # 1項目に残す注記の上限
FALLBACK_RATE_LIMIT = 0.001

# 例 → (ラベル数, ブロック数, 反復数)
WORKED_EXAMPLE_EXPECTATIONS = {
    "path-blocks": (40, 7, 3),
    "leaf-branch": (16, 3, 2),
}


def _rng(seed: int, stream: int) -> random.Random:
    return random.Random(seed * 1000 + stream)


def _note(result: CriterionResult, message: str) -> None:
    if len(result.notes) < MAX_NOTES:
        result.notes.append(message)


def _violation(result: CriterionResult, message: str) -> None:
    result.violations += 1
    _note(result, message)
    logger.error(f"Criterion {result.criterion}: {message}")


def forest_corpus(profile: Profile, seed: int) -> Iterator[Graph]:
    """全列挙した木、ランダム木、ランダムな森（基準1と2で共有）"""
    rng = _rng(seed, 1)
    exhaustive = profile["exhaustive_tree_max_n"]
    for n in range(2, exhaustive + 1):
        yield from all_labeled_trees(n)
    for n in range(exhaustive + 1, profile["random_tree_max_n"] + 1):
        for _ in range(profile["random_trees_per_n"]):
            yield random_tree(rng, n)
    for _ in range(profile["random_forests"]):
        yield random_forest(rng, rng.randint(1, profile["forest_max_n"]))


def product_pairs(profile: Profile, seed: int) -> Iterator[Tuple[Graph, Graph]]:
    """|V(G)|·|V(H)| が上限以下の (森G, グラフH) の組"""
    rng = _rng(seed, 4)
    limit = profile["product_max_vertices"]
    for _ in range(profile["product_pairs"]):
        n_g = rng.randint(1, min(limit, 6))
        n_h = rng.randint(1, limit // n_g)
        yield random_forest(rng, n_g), random_graph(rng, n_h)


def criterion_forest_formula(profile: Profile, seed: int) -> CriterionResult:
    result = CriterionResult(criterion=1, name="forest formula")
    for forest in forest_corpus(profile, seed):
        result.instances += 1
        try:
            exact = grundy_exact(forest).value
            value = grundy_forest(forest).value
        except GrundyToolkitError as e:
            _violation(result, f"n={forest.n} edges={forest.edges()}: {e}")
            continue
        if exact != value:
            _violation(result, f"n={forest.n} edges={forest.edges()}: forest {value} != {exact}")
    return result


def criterion_labeling(profile: Profile, seed: int) -> CriterionResult:
    result = CriterionResult(criterion=2, name="labeling certification")
    fallbacks = 0
    for forest in forest_corpus(profile, seed):
        result.instances += 1
        try:
            trace = forest_labeling(forest)
        except GrundyToolkitError as e:
            _violation(result, f"n={forest.n} edges={forest.edges()}: {e}")
            continue
        sequence = trace.sequence
        if not is_legal(forest, sequence) or len(sequence) != forest.n - trace.partition_size:
            _violation(result, f"n={forest.n} edges={forest.edges()}: witness not certified")
        if trace.fallback:
            fallbacks += 1
            _note(result, f"fallback on n={forest.n} edges={forest.edges()}")
    if result.instances and fallbacks / result.instances >= FALLBACK_RATE_LIMIT:
        _violation(result, f"fallback rate {fallbacks}/{result.instances} is too high")
    result.notes.append(f"fallbacks: {fallbacks}")
    return result


def criterion_worked_examples(profile: Profile, seed: int) -> CriterionResult:
    result = CriterionResult(criterion=3, name="worked examples")
    for example in worked_examples():
        result.instances += 1
        labels, blocks, iterations = WORKED_EXAMPLE_EXPECTATIONS[example.name]
        partition = partition_from_branch_edges(example.forest, example.branch_edges)
        trace = forest_labeling(example.forest, partition)
        observed = (len(trace), partition.size, len(trace.iterations))
        if observed != (labels, blocks, iterations):
            _violation(result, f"{example.name}: observed {observed}, expected "
                       f"{(labels, blocks, iterations)}")
        if trace.fallback or not is_legal(example.forest, trace.sequence):
            _violation(result, f"{example.name}: witness not certified")
        minimum = minimum_caterpillar_partition(example.forest)
        if minimum.size < partition.size:
            # 印の付いた分割より小さい分割がある場合は、その分割と証拠列を注記する
            best = grundy_forest(example.forest)
            if best.value != example.forest.n - minimum.size or not is_legal(
                example.forest, best.witness.order
            ):
                _violation(result, f"{example.name}: minimum partition witness not certified")
            result.notes.append(
                f"{example.name}: marked partition has {partition.size} blocks, minimum has "
                f"{minimum.size} (branch edges {minimum.branch_edges}), "
                f"witness length {best.value}: {list(best.witness.order)}"
            )
        elif minimum.size > partition.size:
            _violation(result, f"{example.name}: marked partition is smaller than the minimum")
        unsafe = step_three_safety_violations(example.forest, partition, trace)
        adjacent = sum(1 for snapshot in trace.iterations if snapshot.adjacent_rank_one)
        result.notes.append(
            f"{example.name}: step-3 safety violations {len(unsafe)}, "
            f"iterations with adjacent rank-1 pair {adjacent}/{len(trace.iterations)}"
        )
    return result


def criterion_product_identity(profile: Profile, seed: int) -> CriterionResult:
    result = CriterionResult(criterion=4, name="product identity")
    cap = profile["product_max_vertices"]
    for g_graph, h_graph in product_pairs(profile, seed):
        result.instances += 1
        report = check_product_identity(g_graph, h_graph, cap)
        if not (report.identity_holds and report.lower_bound_holds):
            _violation(result, f"forest G={g_graph.edges()} (n={g_graph.n}), "
                       f"H={h_graph.edges()} (n={h_graph.n}): {report.gamma_product} vs "
                       f"{report.gamma_g}*{report.gamma_h}")

    rng = _rng(seed, 40)
    for _ in range(profile["product_pairs"]):
        n_g = rng.randint(1, min(cap, 6))
        n_h = rng.randint(1, cap // n_g)
        g_graph, h_graph = random_graph(rng, n_g), random_graph(rng, n_h)
        result.instances += 1
        report = check_product_identity(g_graph, h_graph, cap)
        if not report.lower_bound_holds:
            _violation(result, f"G={g_graph.edges()}, H={h_graph.edges()}: lower bound fails")
    return result


def criterion_fiber_bound(profile: Profile, seed: int) -> CriterionResult:
    result = CriterionResult(criterion=5, name="fiber footprint bound")
    cap = profile["product_max_vertices"]
    for g_graph, h_graph in product_pairs(profile, seed):
        for v, view in fiber_views(g_graph, h_graph, cap).items():
            result.instances += 1
            if not view.ok:
                _violation(result, f"G={g_graph.edges()}, H={h_graph.edges()}, v={v}: "
                           f"|F_v|={len(view.footprinters)} > {view.bound} or illegal projection")
    return result


def criterion_perturbation(profile: Profile, seed: int) -> CriterionResult:
    result = CriterionResult(criterion=6, name="perturbation windows")
    rng = _rng(seed, 6)
    realized: Dict[str, Set[int]] = {"edge": set(), "vertex": set()}
    for _ in range(profile["perturbation_graphs"]):
        graph = random_graph(rng, rng.randint(1, profile["perturbation_max_n"]))
        result.instances += 1
        report = perturbation_audit(graph)
        realized["edge"].update(report.edge_histogram)
        realized["vertex"].update(report.vertex_histogram)
        for violation in report.violations:
            _violation(result, f"n={graph.n} edges={graph.edges()}: {violation}")
    result.notes.append(
        f"realized edge deltas {sorted(realized['edge'])}, "
        f"vertex deltas {sorted(realized['vertex'])}"
    )
    return result


def criterion_leaf_edges(profile: Profile, seed: int) -> CriterionResult:
    result = CriterionResult(criterion=7, name="leaf-edge deletion")
    rng = _rng(seed, 7)
    for _ in range(profile["leaf_edge_forests"]):
        forest = random_forest(rng, rng.randint(1, profile["forest_max_n"]))
        result.instances += 1
        for violation in leaf_edge_audit(forest).violations:
            _violation(result, f"n={forest.n} edges={forest.edges()}: {violation}")
    return result


def _certificate_problems(graph: Graph, cert: SpanningTreeCertificate) -> List[str]:
    problems = []
    tree = Graph.from_edges(graph.n, cert.tree_edges)
    if not is_tree(tree) or any(not graph.has_edge(u, v) for u, v in cert.tree_edges):
        problems.append("result is not a spanning tree")
    elif grundy_exact(tree).value != cert.gamma_tree:
        problems.append("tree gamma does not match the oracle")
    if cert.gamma_tree < cert.gamma_graph:
        problems.append(f"gamma decreased {cert.gamma_graph} -> {cert.gamma_tree}")
    previous = cert.gamma_graph
    for step in cert.steps:
        if step.gamma_before != previous or step.gamma_after < step.gamma_before:
            problems.append(f"non-monotone step at edge {step.edge}")
        previous = step.gamma_after
    return problems


def criterion_spanning_tree(profile: Profile, seed: int) -> CriterionResult:
    result = CriterionResult(criterion=8, name="spanning tree")
    rng = _rng(seed, 8)
    for _ in range(profile["spanning_tree_graphs"]):
        graph = random_connected_graph(rng, rng.randint(1, profile["spanning_tree_max_n"]))
        result.instances += 1
        try:
            cert = spanning_tree_ge(graph)
        except InvariantViolation as e:
            _violation(result, f"edges={graph.edges()}: {e}")
            continue
        for problem in _certificate_problems(graph, cert):
            _violation(result, f"edges={graph.edges()}: {problem}")
    return result


def criterion_total_domination(profile: Profile, seed: int) -> CriterionResult:
    result = CriterionResult(criterion=9, name="total domination")
    rng = _rng(seed, 9)
    alarms = 0
    for _ in range(profile["total_domination_graphs"]):
        graph = random_non_complete_connected_graph(
            rng, rng.randint(3, profile["total_domination_max_n"])
        )
        result.instances += 1
        try:
            outcome = total_dominating_grundy_set(graph)
        except InvariantViolation as e:
            alarms += 1
            _violation(result, f"edges={graph.edges()}: {e}")
            continue
        order = outcome.sequence.order
        chosen = mask_of(order)
        if len(order) != grundy_exact(graph).value or not is_legal(graph, order):
            _violation(result, f"edges={graph.edges()}: sequence is not maximum and legal")
        elif any(not graph.adj[v] & chosen for v in order):
            _violation(result, f"edges={graph.edges()}: chosen set has an isolated vertex")
    result.notes.append(f"case-2 alarms: {alarms}")
    return result


def criterion_determinism(profile: Profile, seed: int) -> CriterionResult:
    result = CriterionResult(criterion=10, name="determinism")
    small = dict(profile, perturbation_graphs=min(profile["perturbation_graphs"], 10))
    runs = [
        json.dumps(
            [
                to_payload(criterion_worked_examples(small, seed)),
                to_payload(criterion_perturbation(small, seed)),
            ],
            sort_keys=True,
        )
        for _ in range(2)
    ]
    result.instances = 1
    if runs[0] != runs[1]:
        _violation(result, "repeated runs produced different reports")
    return result


CRITERIA: Dict[int, Callable[[Profile, int], CriterionResult]] = {
    1: criterion_forest_formula,
    2: criterion_labeling,
    3: criterion_worked_examples,
    4: criterion_product_identity,
    5: criterion_fiber_bound,
    6: criterion_perturbation,
    7: criterion_leaf_edges,
    8: criterion_spanning_tree,
    9: criterion_total_domination,
    10: criterion_determinism,
}


def resolve_profile(name: str) -> Profile:
    if name not in SELFTEST_PROFILES:
        raise GraphArgumentError(
            f"Unknown selftest profile {name!r}; choose from {sorted(SELFTEST_PROFILES)}"
        )
    return dict(SELFTEST_PROFILES[name])


def select_criteria(only: Optional[Sequence[int]] = None) -> List[int]:
    if not only:
        return sorted(CRITERIA)
    unknown = sorted(set(only) - set(CRITERIA))
    if unknown:
        raise GraphArgumentError(f"Unknown criteria: {unknown}")
    return sorted(set(only))


def run_criterion(criterion: int, profile: Profile, seed: int) -> Tuple[Dict[str, Any], int]:
    """1つの基準を実行（バッチワーカーから呼ばれる）"""
    logger.info(f"Running criterion {criterion}")
    outcome = CRITERIA[criterion](profile, seed)
    payload = to_payload(outcome)
    payload["ok"] = outcome.ok
    return payload, 0 if outcome.ok else 2


def selftest_document(
    profile_name: str, seed: int, criteria: Sequence[Dict[str, Any]]
) -> Dict[str, Any]:
    """セルフテスト全体のレポート（実行時間は含めない）"""
    ordered = sorted(criteria, key=lambda c: c.get("criterion", 0))
    return {
        "command": "selftest",
        "instance": f"selftest/{profile_name}",
        "profile": profile_name,
        "seed": seed,
        "criteria": ordered,
        "ok": all(c.get("ok", False) for c in ordered),
    }
