"""
バッチ処理のワーカープール
"""

import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import aiofiles

from ..engine.config import DEFAULT_JOBS
from ..engine.errors import GraphArgumentError, GrundyToolkitError
from ..engine.types import BatchItem, ItemStatus
from .commands import EXIT_ERROR, error_payload, exit_code_for

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BatchJob:
    """
    1項目の処理内容
    func はプロセスプールに渡すためモジュールのトップレベル関数であること
    paths のファイル内容は args の後ろに順に追加して func に渡す
    """
    source: str
    command: str
    func: Callable[..., Tuple[Dict[str, Any], int]]
    args: Tuple[Any, ...] = ()
    paths: Tuple[str, ...] = ()


class BatchRunner:
    """
    asyncio.Queue と複数のワーカーで項目を並行処理
    結果は入力順に返す
    """

    def __init__(self, jobs: int = DEFAULT_JOBS):
        """
        初期化
        jobs: 並行ワーカー数（2以上でプロセスプールを使用）
        """
        if jobs < 1:
            raise GraphArgumentError(f"Number of jobs must be at least 1, got {jobs}")
        self._jobs = jobs
        self._executor: Optional[ProcessPoolExecutor] = None

        # 統計情報
        self._stats = {
            "total_items": 0,
            "completed_items": 0,
            "failed_items": 0,
            "processing_items": 0,
        }

    def get_stats(self) -> Dict[str, int]:
        return self._stats.copy()

    async def run(self, batch: Sequence[BatchJob]) -> List[BatchItem]:
        """
        全項目を処理

        Args:
            batch: 処理する項目（この順でレポートを返す）

        Returns:
            項目ごとの結果
        """
        queue: "asyncio.Queue[Tuple[int, BatchJob]]" = asyncio.Queue()
        results: List[Optional[BatchItem]] = [None] * len(batch)
        for index, job in enumerate(batch):
            queue.put_nowait((index, job))
            self._stats["total_items"] += 1

        if self._jobs > 1:
            self._executor = ProcessPoolExecutor(max_workers=self._jobs)
        workers = [
            asyncio.create_task(self._worker_loop(f"worker_{i}", queue, results))
            for i in range(min(self._jobs, max(len(batch), 1)))
        ]
        logger.info(f"Batch started: {len(batch)} items, {len(workers)} workers")
        try:
            await queue.join()
        finally:
            for worker in workers:
                worker.cancel()
            await asyncio.gather(*workers, return_exceptions=True)
            if self._executor is not None:
                self._executor.shutdown()
                self._executor = None

        logger.info(
            f"Batch finished: {self._stats['completed_items']} completed, "
            f"{self._stats['failed_items']} failed"
        )
        return [item for item in results if item is not None]

    async def _worker_loop(
        self,
        name: str,
        queue: "asyncio.Queue[Tuple[int, BatchJob]]",
        results: List[Optional[BatchItem]],
    ) -> None:
        """キューから項目を取り出して処理するワーカーループ"""
        while True:
            index, job = await queue.get()
            try:
                logger.debug(f"{name} processing item {index} ({job.source})")
                results[index] = await self._process(index, job)
            finally:
                queue.task_done()

    async def _process(self, index: int, job: BatchJob) -> BatchItem:
        item = BatchItem(index=index, source=job.source, status=ItemStatus.PROCESSING)
        self._stats["processing_items"] += 1
        try:
            texts = []
            for path in job.paths:
                async with aiofiles.open(path, "r", encoding="utf-8") as f:
                    texts.append(await f.read())
            args = job.args + tuple(texts)
            if self._executor is not None:
                loop = asyncio.get_running_loop()
                report, code = await loop.run_in_executor(self._executor, job.func, *args)
            else:
                report, code = job.func(*args)
            item.report = report
            item.exit_code = code
            item.status = ItemStatus.COMPLETED
        except (GrundyToolkitError, OSError) as e:
            item.status = ItemStatus.FAILED
            item.error_message = str(e)
            item.exit_code = exit_code_for(e)
            item.report = error_payload(job.command, job.source, e)
            logger.error(f"Item {index} ({job.source}) failed: {e}")
        except Exception as e:
            item.status = ItemStatus.FAILED
            item.error_message = str(e)
            item.exit_code = EXIT_ERROR
            item.report = error_payload(job.command, job.source, e)
            logger.error(f"Unexpected error in item {index} ({job.source}): {e}", exc_info=True)
        finally:
            self._stats["processing_items"] = max(0, self._stats["processing_items"] - 1)
            if item.status == ItemStatus.COMPLETED:
                self._stats["completed_items"] += 1
            else:
                self._stats["failed_items"] += 1
        return item
