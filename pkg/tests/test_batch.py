"""
BatchRunnerのユニットテスト
"""

import pytest

from grundy_toolkit.cli.batch import BatchJob, BatchRunner
from grundy_toolkit.cli.commands import run_graph_command
from grundy_toolkit.engine.errors import GraphArgumentError, InvariantViolation
from grundy_toolkit.engine.types import ItemStatus, RunConfig


def _echo(value):
    return {"value": value, "ok": True}, 0


def _broken(value):
    raise InvariantViolation(f"broken {value}")


def _crash(value):
    raise RuntimeError("unexpected")


def _jobs(func, values):
    return [BatchJob(source=f"item-{v}", command="test", func=func, args=(v,)) for v in values]


class TestBatchRunner:
    """キューとワーカーによる並行処理"""

    def test_rejects_zero_workers(self):
        """ワーカー数0を拒否することを確認"""
        with pytest.raises(GraphArgumentError):
            BatchRunner(0)

    @pytest.mark.asyncio
    async def test_results_keep_input_order(self):
        """処理順によらず入力順で結果が返ることを確認"""
        runner = BatchRunner(1)
        items = await runner.run(_jobs(_echo, [3, 1, 2]))
        assert [item.report["value"] for item in items] == [3, 1, 2]
        assert [item.index for item in items] == [0, 1, 2]
        assert all(item.status == ItemStatus.COMPLETED for item in items)

    @pytest.mark.asyncio
    async def test_stats(self):
        """成功と失敗の件数が統計に反映されることを確認"""
        runner = BatchRunner(1)
        await runner.run(_jobs(_echo, [1, 2]) + _jobs(_broken, [3]))
        stats = runner.get_stats()
        assert stats["total_items"] == 3
        assert stats["completed_items"] == 2
        assert stats["failed_items"] == 1
        assert stats["processing_items"] == 0

    @pytest.mark.asyncio
    async def test_invariant_failure_maps_to_exit_two(self):
        """不変条件違反は終了コード2になることを確認"""
        items = await BatchRunner(1).run(_jobs(_broken, [7]))
        item = items[0]
        assert item.status == ItemStatus.FAILED
        assert item.exit_code == 2
        assert item.report["error_kind"] == "invariant"
        assert "broken 7" in item.error_message

    @pytest.mark.asyncio
    async def test_unexpected_error_maps_to_exit_one(self):
        """想定外の例外は終了コード1になることを確認"""
        items = await BatchRunner(1).run(_jobs(_crash, [1]))
        assert items[0].status == ItemStatus.FAILED
        assert items[0].exit_code == 1
        assert items[0].report["error_kind"] == "error"

    @pytest.mark.asyncio
    async def test_empty_batch(self):
        """空のバッチは空のリストを返すことを確認"""
        assert await BatchRunner(2).run([]) == []

    @pytest.mark.asyncio
    async def test_reads_files_for_job(self, fixtures_dir):
        """ジョブの入力ファイルが読み込まれることを確認"""
        path = str(fixtures_dir / "p4.el")
        config = RunConfig(subcommand="gamma", inputs=[path])
        job = BatchJob(
            source=path, command="gamma", func=run_graph_command,
            args=(config, path), paths=(path,),
        )
        items = await BatchRunner(1).run([job])
        assert items[0].report["gamma"] == 3

    @pytest.mark.asyncio
    async def test_missing_file_is_io_error(self, tmp_path):
        """存在しないファイルは io エラーとして記録されることを確認"""
        path = str(tmp_path / "missing.el")
        config = RunConfig(subcommand="gamma", inputs=[path])
        job = BatchJob(
            source=path, command="gamma", func=run_graph_command,
            args=(config, path), paths=(path,),
        )
        items = await BatchRunner(1).run([job])
        assert items[0].status == ItemStatus.FAILED
        assert items[0].report["error_kind"] == "io"
        assert items[0].exit_code == 1

    @pytest.mark.asyncio
    async def test_process_pool(self, fixtures_dir):
        """2ワーカーではプロセスプールで実行しても入力順に返る"""
        names = ["spider.el", "p4.el", "k4.el"]
        jobs = []
        for name in names:
            path = str(fixtures_dir / name)
            config = RunConfig(subcommand="gamma", inputs=[path], jobs=2)
            jobs.append(BatchJob(
                source=path, command="gamma", func=run_graph_command,
                args=(config, path), paths=(path,),
            ))
        items = await BatchRunner(2).run(jobs)
        assert [item.report["gamma"] for item in items] == [8, 3, 1]
