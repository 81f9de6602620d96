"""
グラフファイルの読み書き（辺リスト形式とgraph6）
"""

import logging
from pathlib import Path
from typing import List, Tuple, Union

import networkx as nx

from .errors import GraphParseError
from .graph_core import Edge, Graph

logger = logging.getLogger(__name__)

GRAPH6_SUFFIXES = (".g6", ".graph6")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _parse_ints(text: str, line_no: int, source: str) -> List[int]:
    try:
        return [int(token) for token in text.split()]
    except ValueError:
        raise GraphParseError(f"Expected integers, got {text!r}", line_no, source) from None


def parse_edge_list(text: str, source: str = "<string>") -> Graph:
    """
    辺リスト形式を解析
    1行目に "n m"、続く m 行に "u v"（0始まり）。'#' 以降はコメント

    Args:
        text: ファイル内容
        source: エラーメッセージ用の入力名

    Returns:
        解析したグラフ
    """
    header: Tuple[int, int] = (-1, -1)
    header_line = 0
    edges: List[Edge] = []
    seen = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        values = _parse_ints(line, line_no, source)
        if len(values) != 2:
            raise GraphParseError(f"Expected two integers, got {len(values)}", line_no, source)
        if header_line == 0:
            n, m = values
            if n < 0 or m < 0:
                raise GraphParseError(f"Negative header values {n} {m}", line_no, source)
            header = (n, m)
            header_line = line_no
            continue

        n = header[0]
        u, v = values
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"Edge ({u}, {v}) is out of range for n={n}", line_no, source)
        if u == v:
            raise GraphParseError(f"Self-loop at vertex {u}", line_no, source)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(f"Duplicate edge ({u}, {v})", line_no, source)
        seen.add(key)
        edges.append(key)

    if header_line == 0:
        raise GraphParseError("Missing 'n m' header line", None, source)
    if len(edges) != header[1]:
        raise GraphParseError(
            f"Header declares {header[1]} edges but {len(edges)} were given", header_line, source
        )
    return Graph.from_edges(header[0], edges)


def format_edge_list(graph: Graph) -> str:
    lines = [f"{graph.n} {graph.m}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"


def parse_graph6(text: str, source: str = "<string>") -> Graph:
    """graph6形式（先頭の有効行のみ）を解析"""
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">>graph6<<"):
            line = line[len(">>graph6<<"):]
        try:
            return Graph.from_networkx(nx.from_graph6_bytes(line.encode("ascii")))
        except (nx.NetworkXError, ValueError, UnicodeEncodeError) as e:
            raise GraphParseError(f"Invalid graph6 data: {e}", line_no, source) from None
    raise GraphParseError("No graph6 data found", None, source)


def format_graph6(graph: Graph) -> str:
    return nx.to_graph6_bytes(graph.to_networkx(), header=False).decode("ascii")


def parse_graph(text: str, source: str = "<string>") -> Graph:
    """入力名の拡張子で形式を選んで解析（.g6 は graph6、それ以外は辺リスト）"""
    if source.lower().endswith(GRAPH6_SUFFIXES):
        return parse_graph6(text, source)
    return parse_edge_list(text, source)


def load_graph(path: Union[str, Path]) -> Graph:
    """
    グラフファイルを読み込む
    読み込みに失敗した場合は OSError をそのまま送出する
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    graph = parse_graph(text, str(path))
    logger.debug(f"Loaded {path}: n={graph.n}, m={graph.m}")
    return graph


def save_graph(graph: Graph, path: Union[str, Path]) -> None:
    path = Path(path)
    if path.suffix.lower() in GRAPH6_SUFFIXES:
        path.write_text(format_graph6(graph), encoding="utf-8")
    else:
        path.write_text(format_edge_list(graph), encoding="utf-8")
