"""
森ラベリングの作業例（道のみの7ブロックの森と、葉の分岐頂点を含む3ブロックの森）
"""

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from .graph_core import Edge, Graph


@dataclass(frozen=True)
class WorkedExample:
    """森と、分割を与える分岐辺"""
    name: str
    forest: Graph
    branch_edges: Tuple[Edge, ...]
    blocks: Tuple[Tuple[int, ...], ...] = field(default=())


def _path_edges(first: int, last: int) -> List[Edge]:
    return [(v, v + 1) for v in range(first, last)]


def _build(name: str, n: int, inner: Sequence[Edge], branch: Sequence[Edge],
           blocks: Sequence[Sequence[int]]) -> WorkedExample:
    forest = Graph.from_edges(n, list(inner) + list(branch))
    return WorkedExample(
        name=name,
        forest=forest,
        branch_edges=tuple(branch),
        blocks=tuple(tuple(block) for block in blocks),
    )


def path_blocks_example() -> WorkedExample:
    """
    7本の道 C1..C7 を6本の分岐辺でつないだ47頂点の木
    ラベリングは3反復で40頂点に番号が付く
    """
    ranges = [(0, 4), (5, 11), (12, 21), (22, 30), (31, 35), (36, 42), (43, 46)]
    inner: List[Edge] = []
    for first, last in ranges:
        inner.extend(_path_edges(first, last))
    branch = [(2, 9), (7, 14), (17, 38), (19, 29), (24, 33), (40, 44)]
    blocks = [list(range(first, last + 1)) for first, last in ranges]
    return _build("path-blocks", 47, inner, branch, blocks)


def leaf_branch_example() -> WorkedExample:
    """
    葉である分岐頂点を含む3ブロックの19頂点の木
    ラベリングは2反復で16頂点に番号が付く
    """
    c1 = [(0, 2), (2, 3), (3, 4), (4, 5), (1, 2), (3, 6)]
    c2 = [(7, 9), (9, 10), (10, 11), (11, 12), (12, 13), (8, 9), (11, 14), (12, 15)]
    c3 = [(16, 17), (17, 18)]
    branch = [(6, 10), (14, 17)]
    blocks = [list(range(0, 7)), list(range(7, 16)), list(range(16, 19))]
    return _build("leaf-branch", 19, c1 + c2 + c3, branch, blocks)


def worked_examples() -> List[WorkedExample]:
    return [path_blocks_example(), leaf_branch_example()]
