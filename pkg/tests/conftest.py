"""
pytestのフィクスチャ定義
"""

import json
import logging
from pathlib import Path

import pytest

from grundy_toolkit.engine.graph_core import (
    complete_graph,
    cycle_graph,
    path_graph,
    spider_graph,
    star_graph,
)
from grundy_toolkit.engine.worked_examples import leaf_branch_example, path_blocks_example

FIXTURES = Path(__file__).parent / "fixtures"


# ロギングを無効化
@pytest.fixture(autouse=True)
def disable_logging():
    """テスト中はロギングを無効化"""
    logging.disable(logging.CRITICAL)
    yield
    logging.disable(logging.NOTSET)


@pytest.fixture
def fixtures_dir():
    """テスト用グラフファイルのディレクトリ"""
    return FIXTURES


@pytest.fixture
def p4():
    return path_graph(4)


@pytest.fixture
def c4():
    return cycle_graph(4)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def k13():
    """中心 0 の星 K_{1,3}"""
    return star_graph(3)


@pytest.fixture
def spider333():
    """S(3,3,3)（中心 0）"""
    return spider_graph([3, 3, 3])


@pytest.fixture
def example_one():
    return path_blocks_example()


@pytest.fixture
def example_two():
    return leaf_branch_example()


def _load_golden(name):
    with open(FIXTURES / name, encoding="utf-8") as f:
        return json.load(f)


@pytest.fixture
def golden_one():
    """例1の期待値"""
    return _load_golden("example1.json")


@pytest.fixture
def golden_two():
    """例2の期待値"""
    return _load_golden("example2.json")
