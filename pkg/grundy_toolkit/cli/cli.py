"""
コマンドラインのエントリーポイント
"""

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

from ..engine.config import BATCH_FILE_PATTERNS, DEFAULT_JOBS, DEFAULT_SEED, EXACT_VERTEX_CAP
from ..engine.errors import GraphArgumentError, GrundyToolkitError
from ..engine.log_utils import setup_logging
from ..engine.types import BatchItem, ItemStatus, OutputFormat, RunConfig
from .batch import BatchJob, BatchRunner
from .commands import EXIT_ERROR, run_graph_command, run_product_command
from .reports import render, render_json, render_text
from .selftest import resolve_profile, run_criterion, select_criteria, selftest_document

logger = logging.getLogger(__name__)


class UsageError(GrundyToolkitError):
    """コマンドラインの使い方の誤り"""


class _Parser(argparse.ArgumentParser):
    """使い方の誤りで終了せず例外を送出するパーサー"""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=_positive, default=EXACT_VERTEX_CAP,
                        help="vertex cap for the exact solver")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed for randomized corpora")
    common.add_argument("--format", dest="output_format", choices=["text", "json"],
                        default="text", help="report format")
    common.add_argument("--jobs", type=_positive, default=DEFAULT_JOBS,
                        help="number of concurrent workers for batches")
    common.add_argument("--log-level", default=None, help="log level (default from config)")

    parser = _Parser(prog="grundy-toolkit", description="Grundy domination toolkit")
    subparsers = parser.add_subparsers(dest="subcommand", parser_class=_Parser)
    subparsers.required = True

    gamma = subparsers.add_parser("gamma", parents=[common], help="Grundy domination number")
    method = gamma.add_mutually_exclusive_group()
    method.add_argument("--exact", dest="method", action="store_const", const="exact")
    method.add_argument("--forest", dest="method", action="store_const", const="forest")
    gamma.add_argument("inputs", nargs="+", help="graph files or directories")

    helps = {
        "partition": "minimum caterpillar partition of a forest",
        "label": "forest labeling trace",
        "spanning-tree": "spanning tree with no smaller Grundy domination number",
        "total-set": "maximum legal sequence inducing no isolated vertex",
        "perturb": "edge and vertex deletion deltas",
    }
    for name, text in helps.items():
        sub = subparsers.add_parser(name, parents=[common], help=text)
        sub.add_argument("inputs", nargs="+", help="graph files or directories")

    product = subparsers.add_parser("product-check", parents=[common],
                                    help="strong product identity for two graphs")
    product.add_argument("inputs", nargs=2, metavar="GRAPH", help="factor graph files G and H")

    selftest = subparsers.add_parser("selftest", parents=[common], help="acceptance suite")
    selftest.add_argument("--profile", default="full", help="corpus profile (full or quick)")
    selftest.add_argument("--only", type=_positive, nargs="+", default=None,
                          help="run only these criteria")
    return parser


def _config_from(args: argparse.Namespace) -> RunConfig:
    options: Dict[str, Any] = {}
    for key in ("method", "profile", "only"):
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    return RunConfig(
        subcommand=args.subcommand,
        inputs=list(getattr(args, "inputs", []) or []),
        cap=args.cap,
        output_format=OutputFormat(args.output_format),
        seed=args.seed,
        jobs=args.jobs,
        options=options,
    )


def expand_inputs(inputs: Sequence[str]) -> Tuple[List[Path], bool]:
    """
    入力パスを展開（ディレクトリは対象パターンのファイルを整列して列挙）

    Returns:
        (ファイル一覧, ディレクトリを含んだか)
    """
    files: List[Path] = []
    batch = len(inputs) > 1
    for name in inputs:
        path = Path(name)
        if path.is_dir():
            batch = True
            found = {p for pattern in BATCH_FILE_PATTERNS for p in path.glob(pattern)}
            files.extend(sorted(p for p in found if p.is_file()))
        elif path.is_file():
            files.append(path)
        else:
            raise FileNotFoundError(f"No such file or directory: {name}")
    return files, batch


def _graph_jobs(config: RunConfig) -> Tuple[List[BatchJob], bool]:
    files, batch = expand_inputs(config.inputs)
    if not files:
        raise GraphArgumentError("No graph files found in the given inputs")
    jobs = [
        BatchJob(
            source=str(path),
            command=config.subcommand,
            func=run_graph_command,
            args=(config, str(path)),
            paths=(str(path),),
        )
        for path in files
    ]
    return jobs, batch


def _product_jobs(config: RunConfig) -> List[BatchJob]:
    g_path, h_path = (Path(name) for name in config.inputs)
    for path in (g_path, h_path):
        if not path.is_file():
            raise FileNotFoundError(f"No such file: {path}")
    return [
        BatchJob(
            source=f"{g_path} x {h_path}",
            command="product-check",
            func=run_product_command,
            args=(config, str(g_path), str(h_path)),
            paths=(str(g_path), str(h_path)),
        )
    ]


def _selftest(config: RunConfig, out: TextIO) -> int:
    profile_name = str(config.options.get("profile", "full"))
    profile = resolve_profile(profile_name)
    criteria = select_criteria(config.options.get("only"))
    jobs = [
        BatchJob(
            source=f"criterion-{k}",
            command="selftest",
            func=run_criterion,
            args=(k, profile, config.seed),
        )
        for k in criteria
    ]
    items = asyncio.run(BatchRunner(config.jobs).run(jobs))

    results = []
    for k, item in zip(criteria, items):
        if item.status == ItemStatus.COMPLETED:
            results.append(item.report)
        else:
            results.append({
                "criterion": k,
                "name": "error",
                "instances": 0,
                "violations": 1,
                "notes": [item.error_message or "failed"],
                "ok": False,
            })
    document = selftest_document(profile_name, config.seed, results)
    if config.output_format == OutputFormat.JSON:
        out.write(render_json(document) + "\n")
    else:
        out.write(render_text(document) + "\n")
    return max([item.exit_code for item in items] + [0 if document["ok"] else 2])


def execute(config: RunConfig, out: TextIO) -> int:
    """設定に従ってサブコマンドを実行し、レポートを書き出す"""
    logger.info(f"Running {config.subcommand} on {len(config.inputs)} input(s)")
    if config.subcommand == "selftest":
        return _selftest(config, out)

    if config.subcommand == "product-check":
        jobs, batch = _product_jobs(config), False
    else:
        jobs, batch = _graph_jobs(config)
    runner = BatchRunner(config.jobs)
    items: List[BatchItem] = asyncio.run(runner.run(jobs))
    logger.info(f"Batch stats: {runner.get_stats()}")
    out.write(render(items, config.output_format, batch) + "\n")
    return max(item.exit_code for item in items)


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """
    コマンドラインを実行

    Args:
        argv: 引数（省略時は sys.argv[1:]）
        stdout: レポートの出力先（省略時は標準出力）

    Returns:
        終了コード（0: 成功、1: 使い方・入出力・解析エラー、2: 不変条件違反）
    """
    out = stdout if stdout is not None else sys.stdout
    try:
        args = build_parser().parse_args(list(argv) if argv is not None else None)
    except UsageError as e:
        sys.stderr.write(f"grundy-toolkit: error: {e}\n")
        return EXIT_ERROR

    setup_logging(args.log_level)
    try:
        config = _config_from(args)
        return execute(config, out)
    except (GrundyToolkitError, OSError) as e:
        logger.error(f"{args.subcommand} failed: {e}")
        sys.stderr.write(f"grundy-toolkit: error: {e}\n")
        return EXIT_ERROR
