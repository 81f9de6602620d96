"""
シードから再現可能に生成するグラフコーパス
"""

import itertools
import logging
import random
from typing import Iterator, Optional, Sequence

import networkx as nx

from .errors import GraphArgumentError
from .graph_core import Graph, empty_graph, is_complete

logger = logging.getLogger(__name__)


def tree_from_prufer(sequence: Sequence[int]) -> Graph:
    """Prüfer列から n = len+2 頂点の木"""
    return Graph.from_networkx(nx.from_prufer_sequence(list(sequence)))


def _tree(n: int, sequence: Sequence[int]) -> Graph:
    if n <= 0:
        raise GraphArgumentError(f"A tree needs at least one vertex, got {n}")
    if n == 1:
        return empty_graph(1)
    return tree_from_prufer(sequence)


def all_labeled_trees(n: int) -> Iterator[Graph]:
    """n 頂点のラベル付き木を Prüfer 列の辞書順にすべて列挙（n^(n−2) 本）"""
    if n <= 2:
        yield _tree(n, [])
        return
    logger.debug(f"Enumerating {n ** (n - 2)} labeled trees on {n} vertices")
    for sequence in itertools.product(range(n), repeat=n - 2):
        yield tree_from_prufer(sequence)


def random_tree(rng: random.Random, n: int) -> Graph:
    """一様ランダムな Prüfer 列による木"""
    return _tree(n, [rng.randrange(n) for _ in range(max(n - 2, 0))])


def random_forest(rng: random.Random, n: int, max_cuts: Optional[int] = None) -> Graph:
    """ランダムな木からランダムに辺を除いた森（孤立点を含みうる）"""
    tree = random_tree(rng, n)
    edges = tree.edges()
    limit = len(edges) if max_cuts is None else min(max_cuts, len(edges))
    cuts = rng.randint(0, limit)
    kept = sorted(set(edges) - set(rng.sample(edges, cuts)))
    return Graph.from_edges(n, kept)


def random_graph(rng: random.Random, n: int, p: Optional[float] = None) -> Graph:
    """G(n, p)。networkx の乱数シードも rng から引く"""
    if p is None:
        p = rng.uniform(0.1, 0.9)
    return Graph.from_networkx(nx.gnp_random_graph(n, p, seed=rng.randrange(2**32)))


def random_connected_graph(
    rng: random.Random, n: int, extra_edges: Optional[int] = None
) -> Graph:
    """ランダムな全域木に辺を追加した連結グラフ"""
    tree = random_tree(rng, n)
    present = set(tree.edges())
    missing = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in present]
    if extra_edges is None:
        extra_edges = rng.randint(0, len(missing))
    added = rng.sample(missing, min(extra_edges, len(missing)))
    return Graph.from_edges(n, sorted(present | set(added)))


def random_non_complete_connected_graph(
    rng: random.Random, n: int, attempts: int = 100
) -> Graph:
    """連結で完全でないグラフ（n ≥ 3）"""
    if n < 3:
        raise GraphArgumentError(f"A connected non-complete graph needs n >= 3, got {n}")
    for _ in range(attempts):
        graph = random_connected_graph(rng, n)
        if not is_complete(graph):
            return graph
    return random_tree(rng, n)
