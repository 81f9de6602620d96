"""
Grundy Toolkitで使用する型定義
"""

from dataclasses import dataclass, field
from enum import Enum, auto
from typing import Any, Dict, List, Optional, Tuple

from dataclasses_json import dataclass_json


class SolveMethod(Enum):
    """Grundy支配数の算出方法"""
    EXACT = "exact"
    FOREST = "forest"


class LeafClass(Enum):
    """葉毛虫の分類"""
    P2 = "P2"
    P5_CENTER = "P5-center"
    OTHER = "other"


class OutputFormat(Enum):
    """レポート出力形式"""
    TEXT = "text"
    JSON = "json"


class ItemStatus(Enum):
    """バッチ項目の処理状態"""
    PENDING = auto()
    PROCESSING = auto()
    COMPLETED = auto()
    FAILED = auto()


# ---------------- 正当列 ----------------

@dataclass_json
@dataclass
class LegalSequence:
    """
    正当列
    footprints[i] は i 番目の頂点が新たに支配した頂点（昇順）
    dominated_after[i] は i 番目までで支配済みの頂点のビット集合
    """
    order: List[int] = field(default_factory=list)
    footprints: List[List[int]] = field(default_factory=list)
    dominated_after: List[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.order)

    @property
    def dominated(self) -> int:
        return self.dominated_after[-1] if self.dominated_after else 0

    def footprinter_of(self, vertex: int) -> Optional[int]:
        """vertex をフットプリントした列中の位置（未支配なら None）"""
        for step, footprint in enumerate(self.footprints):
            if vertex in footprint:
                return step
        return None


@dataclass_json
@dataclass
class SequenceViolation:
    """正当性違反の報告（最初に違反した位置のみ）"""
    index: int
    vertex: int
    reason: str
    footprint: List[int] = field(default_factory=list)
    prefix: List[int] = field(default_factory=list)


@dataclass_json
@dataclass
class GrundyResult:
    """Grundy支配数と長さの等しい証拠列"""
    value: int
    witness: LegalSequence
    method: SolveMethod = SolveMethod.EXACT
    states: int = 0  # DPで評価した状態数
    fallback: bool = False


# ---------------- 毛虫分割 ----------------

@dataclass_json
@dataclass
class Spine:
    """
    ブロックの背骨（最長道）と位置・順位
    path[0] が位置1の頂点
    """
    path: List[int]
    position: Dict[int, int] = field(default_factory=dict)
    branch_vertices: List[int] = field(default_factory=list)  # 順位順（位置, 頂点ID）


@dataclass_json
@dataclass
class CaterpillarPartition:
    """
    森の毛虫分割
    blocks は最小頂点IDの昇順、孤立点は isolates に分けて保持
    """
    blocks: List[List[int]]
    branch_edges: List[Tuple[int, int]] = field(default_factory=list)
    spines: List[Spine] = field(default_factory=list)
    isolates: List[int] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.blocks)

    def block_index(self) -> Dict[int, int]:
        """頂点 → ブロック番号"""
        return {v: i for i, block in enumerate(self.blocks) for v in block}


@dataclass_json
@dataclass
class CanopyGraph:
    """ブロックを1頂点に縮約したキャノピーグラフ"""
    size: int
    edges: List[Tuple[int, int]] = field(default_factory=list)
    blocks: List[List[int]] = field(default_factory=list)  # 頂点 c_i → ブロック


@dataclass_json
@dataclass
class LeafCaterpillar:
    """分岐頂点を1つだけ持つブロック"""
    block: int
    branch_vertex: int
    leaf_class: LeafClass


# ---------------- 森ラベリング ----------------

@dataclass_json
@dataclass
class IterationSnapshot:
    """森ラベリングの1反復の記録"""
    j: int
    rank_one: Dict[int, int] = field(default_factory=dict)  # ブロック → 順位1の分岐頂点
    positions: Dict[int, int] = field(default_factory=dict)  # 残り部分での位置
    step_two: List[int] = field(default_factory=list)
    step_three: List[int] = field(default_factory=list)
    step_four: List[int] = field(default_factory=list)
    removed_blocks: List[int] = field(default_factory=list)
    removed_vertices: List[int] = field(default_factory=list)
    adjacent_rank_one: bool = False


@dataclass_json
@dataclass
class LabelingTrace:
    """
    ラベリング結果
    label は頂点 → 列中の番号（1始まり）
    """
    label: Dict[int, int] = field(default_factory=dict)
    iterations: List[IterationSnapshot] = field(default_factory=list)
    unlabeled: Dict[int, int] = field(default_factory=dict)  # ブロック → ラベルなし頂点
    partition_size: int = 0
    retries: int = 0
    fallback: bool = False

    @property
    def sequence(self) -> List[int]:
        return sorted(self.label, key=self.label.__getitem__)

    def __len__(self) -> int:
        return len(self.label)


# ---------------- 強積と構成的定理 ----------------

@dataclass_json
@dataclass
class FiberView:
    """
    H-ファイバー {v}×H から見た最大正当列
    footprinters は H^v にフットプリントを持つ列中の頂点、projection はそのH座標（列順）
    """
    v: int
    start: int = 0  # ファイバーの先頭インデックス
    size: int = 0
    members: List[int] = field(default_factory=list)  # D_v
    footprinters: List[int] = field(default_factory=list)  # F_v
    by_fiber: Dict[int, List[int]] = field(default_factory=dict)  # u → D_u(F_v)
    projection: List[int] = field(default_factory=list)
    bound: int = 0
    projection_legal: bool = True

    @property
    def ok(self) -> bool:
        return len(self.footprinters) <= self.bound and self.projection_legal


@dataclass_json
@dataclass
class ProductCheckReport:
    """強積の恒等式チェック結果"""
    n_g: int
    n_h: int
    gamma_g: int
    gamma_h: int
    gamma_product: int
    identity_holds: bool
    lower_bound_holds: bool
    forest_factor: bool
    witnesses: Dict[str, List[int]] = field(default_factory=dict)
    product_sequence: List[int] = field(default_factory=list)
    fiber_bound_violations: List[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        identity_required = self.forest_factor
        return (
            self.lower_bound_holds
            and (self.identity_holds or not identity_required)
            and not self.fiber_bound_violations
        )


@dataclass_json
@dataclass
class PeelBoundReport:
    """単体頂点の剥離上界 γ(G⊠H) ≤ γ(H) + γ((G−v)⊠H)"""
    v: int
    lhs: int
    rhs: int
    ok: bool


@dataclass_json
@dataclass
class SpanningTreeStep:
    """閉路辺の削除1回分"""
    edge: Tuple[int, int]
    cycle: List[int]
    gamma_before: int
    gamma_after: int


@dataclass_json
@dataclass
class SpanningTreeCertificate:
    """γを減らさない全域木と削除の連鎖"""
    tree_edges: List[Tuple[int, int]]
    gamma_graph: int
    gamma_tree: int
    steps: List[SpanningTreeStep] = field(default_factory=list)


@dataclass_json
@dataclass
class TotalDominationRepair:
    """孤立した自己フットプリント頂点 v を u に置き換えた記録"""
    removed: int
    anchor: int  # v から距離2の頂点 x
    appended: int


@dataclass_json
@dataclass
class TotalDominationResult:
    """誘導部分グラフに孤立点のない最大正当列"""
    sequence: LegalSequence
    start: List[int] = field(default_factory=list)
    repairs: List[TotalDominationRepair] = field(default_factory=list)


@dataclass_json
@dataclass
class PerturbationReport:
    """辺削除・頂点削除によるγの変化"""
    gamma: int
    edge_deltas: Dict[str, int] = field(default_factory=dict)  # "u-v" → Δ
    vertex_deltas: Dict[int, int] = field(default_factory=dict)
    edge_histogram: Dict[int, int] = field(default_factory=dict)
    vertex_histogram: Dict[int, int] = field(default_factory=dict)
    simplicial: List[int] = field(default_factory=list)
    twins: List[int] = field(default_factory=list)
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass_json
@dataclass
class LeafEdgeAuditReport:
    """森の葉辺削除で γ が減らないことの監査"""
    gamma: int
    deltas: Dict[str, int] = field(default_factory=dict)
    violations: List[str] = field(default_factory=list)


# ---------------- CLI / バッチ ----------------

@dataclass_json
@dataclass
class RunConfig:
    """1回の実行設定"""
    subcommand: str
    inputs: List[str] = field(default_factory=list)
    cap: int = 24
    output_format: OutputFormat = OutputFormat.TEXT
    seed: int = 42
    jobs: int = 1
    options: Dict[str, Any] = field(default_factory=dict)


@dataclass_json
@dataclass
class CriterionResult:
    """セルフテスト1項目の結果"""
    criterion: int
    name: str
    instances: int = 0
    violations: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0


@dataclass_json
@dataclass
class BatchItem:
    """バッチ処理の1項目"""
    index: int
    source: str
    status: ItemStatus = ItemStatus.PENDING
    report: Dict[str, Any] = field(default_factory=dict)
    error_message: Optional[str] = None
    exit_code: int = 0
