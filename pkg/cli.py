#!/usr/bin/env python3
"""
命令行入口

使用方法:
    python cli.py hp-group --group data/groups/s3.json
    python cli.py cohomology --space data/spaces/torus7.json
    python cli.py deloc --space data/spaces/circle_reflection.json
    python cli.py pairing --space data/spaces/circle_reflection.json
    python cli.py assembly-check --corpus builtin --out output/assembly.json
    python cli.py assembly-check --space data/spaces/point_z2.json --bundle data/bundles/z2_sign.json
    python cli.py umkehr --corpus builtin
    python cli.py dnc-check --seed 7

人类可读摘要写到 stdout，日志写到 stderr 与 logs/，--out 写机器可读 JSON 报告。
退出码: 0 成功 / 1 检查失败 / 2 输入错误
"""
# 必须在所有其他导入之前加载环境变量（DELOC_CAP 等在 config 导入时读取）
from dotenv import load_dotenv
load_dotenv()

import argparse
import sys
from pathlib import Path
from typing import List, Optional

# 添加项目根目录到路径
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from loguru import logger

from config.logging_config import setup_logger
from core.schemas import RunReport
from orchestrator import COMMANDS, EXIT_INPUT_ERROR, Job, JobOrchestrator

COMMAND_HELP = {
    "hp-group": "群代数的周期循环同调（Burghelea 分解）与 HH0 oracle",
    "cohomology": "神经双复形的全上同调，与不变上链、商复形两个 oracle 比较",
    "deloc": "逐共轭类的 delocalized 上同调维数",
    "pairing": "不动点子复形上的 Poincaré 配对 Gram 矩阵",
    "assembly-check": "Chern-assembly 恒等式（内置语料或给定空间与丛）",
    "umkehr": "umkehr 映射的函子性、投影公式与圈等价检查",
    "dnc-check": "法锥形变坐标卡与函子性的数值检查",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deloc",
        description="有限群作用的 delocalized 上同调、umkehr 映射与指标配对",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        sub = subparsers.add_parser(command, help=COMMAND_HELP[command])
        sub.add_argument("--group", type=Path, help="群文件 (JSON)")
        sub.add_argument("--space", type=Path, help="G-复形文件 (JSON)")
        sub.add_argument("--bundle", type=Path, help="平坦等变丛文件 (JSON)")
        sub.add_argument("--corpus", type=str, help="语料名（builtin）")
        sub.add_argument("--degree", type=int, help="只计算这一次数")
        sub.add_argument("--out", type=Path, help="机器可读报告输出路径")
        sub.add_argument("--threads", type=int, help="求秩并行线程数（默认 DELOC_THREADS）")
        sub.add_argument("--seed", type=int, help="随机检查的种子（默认 DELOC_SEED）")
        sub.add_argument("--samples", type=int, help="dnc-check 的抽样点数")
        sub.add_argument("--quiet", action="store_true", help="不向 stderr 输出日志")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """主函数，返回退出码"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse 用法错误同样属于输入错误
        return EXIT_INPUT_ERROR if exc.code else 0

    setup_logger(f"deloc_{args.command.replace('-', '_')}", console=not args.quiet)
    job = Job(
        command=args.command,
        group=args.group,
        space=args.space,
        bundle=args.bundle,
        corpus=args.corpus,
        degree=args.degree,
        out=args.out,
        threads=args.threads,
        seed=args.seed,
        samples=args.samples,
    )

    orchestrator = JobOrchestrator()
    try:
        code, report = orchestrator.run(job)
    except Exception:
        # 内部错误也留下 ok=false 的报告
        if orchestrator.last_report is not None:
            save_report(orchestrator.last_report, job.out)
        print(orchestrator.last_summary)
        raise
    print(orchestrator.last_summary)
    save_report(report, job.out)
    return code


def save_report(report: RunReport, out: Optional[Path]) -> None:
    if out is None:
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(report.to_json(), encoding="utf-8")
    logger.info(f"报告已保存: {out}")


if __name__ == "__main__":
    sys.exit(main())
