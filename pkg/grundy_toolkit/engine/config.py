"""
Grundy Toolkit設定ファイル
"""

import os
from pathlib import Path

# 基本設定
LOG_LEVEL = os.environ.get("GRUNDY_TOOLKIT_LOG_LEVEL", "WARNING")

# パス設定
BASE_DIR = Path(__file__).parent.parent

LOG_DIR = os.environ.get("GRUNDY_TOOLKIT_LOG_DIR", str(BASE_DIR / "logs"))
LOG_FILE = os.path.join(LOG_DIR, "grundy_toolkit.log")

# ログ出力の詳細設定（環境変数で制御可能）
# 例) GRUNDY_TOOLKIT_LOG_TO_FILE=1 でファイル出力を有効化
LOG_TO_FILE = os.environ.get("GRUNDY_TOOLKIT_LOG_TO_FILE", "0") == "1"
LOG_MAX_BYTES = int(os.environ.get("GRUNDY_TOOLKIT_LOG_MAX_BYTES", "10485760"))  # 10MB
LOG_BACKUP_COUNT = int(os.environ.get("GRUNDY_TOOLKIT_LOG_BACKUP_COUNT", "5"))  # 世代数

# 厳密解法の設定
EXACT_VERTEX_CAP = int(os.environ.get("GRUNDY_TOOLKIT_EXACT_CAP", "24"))  # 部分集合DPの頂点数上限
PRODUCT_VERTEX_CAP = int(os.environ.get("GRUNDY_TOOLKIT_PRODUCT_CAP", "1000000"))  # 強積の頂点数上限

# 森ラベリング設定
LABELING_MAX_RETRIES = 8  # 向き反転による再試行の最大回数

# 並行処理設定
DEFAULT_JOBS = int(os.environ.get("GRUNDY_TOOLKIT_JOBS", "1"))  # バッチの並行ワーカー数
DEFAULT_SEED = int(os.environ.get("GRUNDY_TOOLKIT_SEED", "42"))  # ランダムコーパスのシード

# バッチ入力設定
BATCH_FILE_PATTERNS = ("*.el", "*.txt", "*.g6")  # ディレクトリ入力で読み込むファイル

# セルフテストのコーパス規模
SELFTEST_PROFILES = {
    "full": {
        "exhaustive_tree_max_n": 8,  # Prüfer列を全列挙する木の最大頂点数
        "random_tree_max_n": 10,  # ランダム木の最大頂点数
        "random_trees_per_n": 25000,  # 全列挙より大きい各 n のランダム木の本数
        "random_forests": 5000,
        "forest_max_n": 12,
        "product_pairs": 500,
        "product_max_vertices": 22,
        "perturbation_graphs": 1000,
        "perturbation_max_n": 12,
        "leaf_edge_forests": 1000,
        "spanning_tree_graphs": 500,
        "spanning_tree_max_n": 10,
        "total_domination_graphs": 500,
        "total_domination_max_n": 12,
    },
    "quick": {
        "exhaustive_tree_max_n": 6,
        "random_tree_max_n": 10,
        "random_trees_per_n": 40,
        "random_forests": 60,
        "forest_max_n": 10,
        "product_pairs": 25,
        "product_max_vertices": 12,
        "perturbation_graphs": 25,
        "perturbation_max_n": 7,
        "leaf_edge_forests": 40,
        "spanning_tree_graphs": 20,
        "spanning_tree_max_n": 7,
        "total_domination_graphs": 25,
        "total_domination_max_n": 8,
    },
}
