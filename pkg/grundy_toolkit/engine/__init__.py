"""
Grundy Toolkit - Grundy支配数の計算と検証エンジン
"""

from .forest_labeling import forest_labeling, grundy_forest
from .graph_core import Graph, strong_product
from .legal_engine import grundy_exact, validate_sequence
from .product_theorems import check_product_identity, grundy_value

__all__ = [
    "Graph",
    "check_product_identity",
    "forest_labeling",
    "grundy_exact",
    "grundy_forest",
    "grundy_value",
    "strong_product",
    "validate_sequence",
]
