#!/usr/bin/env python3
"""
验收批量运行脚本

功能：
1. 对 data/ 中的每个样例空间依次运行 cohomology / deloc / pairing
2. 运行内置 assembly 语料、umkehr 语料与 DNC 数值检查
3. 每个任务的报告写到输出目录，最后打印汇总表

使用方法:
    # 运行全部验收任务
    python scripts/run_acceptance.py

    # 指定输出目录
    python scripts/run_acceptance.py --output-dir output/acceptance

    # 跳过较慢的 DNC 检查
    python scripts/run_acceptance.py --skip-dnc
"""

import argparse
import json
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List

# 添加项目根目录到路径
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from loguru import logger

from config.config import DATA_DIR, OUTPUT_DIR
from config.logging_config import setup_logger
from orchestrator import EXIT_OK, Job, JobOrchestrator

# 配置日志
LOG_FILE = setup_logger("run_acceptance")

SPACE_COMMANDS = ("cohomology", "deloc", "pairing")


def build_jobs(data_dir: Path, skip_dnc: bool) -> List[Job]:
    jobs = [Job(command="hp-group", group=path) for path in sorted((data_dir / "groups").glob("*.json"))]
    for path in sorted((data_dir / "spaces").glob("*.json")):
        jobs.extend(Job(command=command, space=path) for command in SPACE_COMMANDS)
    jobs.append(Job(command="assembly-check", corpus="builtin"))
    jobs.append(Job(command="umkehr", corpus="builtin"))
    if not skip_dnc:
        jobs.append(Job(command="dnc-check"))
    return jobs


def job_label(job: Job) -> str:
    target = job.group or job.space
    return f"{job.command}:{target.stem}" if target is not None else f"{job.command}:{job.corpus or 'suite'}"


def run_job(orchestrator: JobOrchestrator, job: Job, output_dir: Path) -> Dict[str, Any]:
    """运行单个任务并保存报告"""
    label = job_label(job)
    logger.info(f"运行: {label}")
    start = time.perf_counter()
    try:
        code, report = orchestrator.run(job)
        raised = None
    except Exception as exc:
        # 记为失败，其余任务照常运行
        code, report, raised = None, orchestrator.last_report, f"{type(exc).__name__}: {exc}"
        logger.error(f"任务 {label} 抛出异常: {raised}")
    elapsed = time.perf_counter() - start

    report_file = output_dir / f"{label.replace(':', '_')}.json"
    if report is not None:
        report_file.write_text(report.to_json(), encoding="utf-8")
    return {
        "label": label,
        "exit_code": code,
        "ok": code == EXIT_OK,
        "raised": raised,
        "seconds": round(elapsed, 3),
        "summary": orchestrator.last_summary,
        "report": report_file.name,
    }


def print_summary(results: List[Dict[str, Any]]):
    """打印汇总表"""
    print("\n" + "=" * 100)
    print("验收汇总")
    print("=" * 100)
    print(f"\n{'任务':<36} {'退出码':>6} {'耗时(s)':>9}  摘要")
    print("-" * 100)
    for r in results:
        first_line = r["summary"].splitlines()[0] if r["summary"] else ""
        code = "异常" if r["raised"] else r["exit_code"]
        print(f"{r['label']:<36} {code!s:>6} {r['seconds']:>9.3f}  {first_line[:60]}")
    print("-" * 100)

    failed = [r for r in results if not r["ok"]]
    print(f"\n统计信息:")
    print(f"  任务数量: {len(results)}")
    print(f"  通过: {len(results) - len(failed)}")
    print(f"  失败: {len(failed)}")
    for r in failed:
        if r["raised"]:
            print(f"    - {r['label']} 抛出异常: {r['raised']}")
        else:
            print(f"    - {r['label']} (exit {r['exit_code']})")
    raised = [r for r in results if r["raised"]]
    if raised:
        print(f"\n!!! {len(raised)} 个任务抛出异常，详见日志: {LOG_FILE}")


def main() -> int:
    parser = argparse.ArgumentParser(
        description="验收批量运行",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
    python scripts/run_acceptance.py
    python scripts/run_acceptance.py --output-dir output/acceptance --skip-dnc
        """
    )
    parser.add_argument("--data-dir", type=str, default=str(DATA_DIR), help="样例目录 (默认: data)")
    parser.add_argument("--output-dir", type=str, default=str(OUTPUT_DIR / "acceptance"), help="报告输出目录")
    parser.add_argument("--skip-dnc", action="store_true", help="跳过 DNC 数值检查")
    args = parser.parse_args()

    data_dir = Path(args.data_dir)
    output_dir = Path(args.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    print("\n" + "=" * 60)
    print("验收批量运行")
    print("=" * 60)
    print(f"样例目录: {data_dir}")
    print(f"输出目录: {output_dir}")
    print(f"日志文件: {LOG_FILE}")

    orchestrator = JobOrchestrator()
    results = [run_job(orchestrator, job, output_dir) for job in build_jobs(data_dir, args.skip_dnc)]
    print_summary(results)

    summary_file = output_dir / f"summary_{datetime.now().strftime('%Y%m%d_%H%M%S')}.json"
    summary_file.write_text(json.dumps({
        "timestamp": datetime.now().isoformat(),
        "data_dir": str(data_dir),
        "total_jobs": len(results),
        "failed": sum(not r["ok"] for r in results),
        "results": results,
    }, ensure_ascii=False, indent=2), encoding="utf-8")
    print(f"\n汇总文件: {summary_file}")
    return 0 if all(r["ok"] for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
