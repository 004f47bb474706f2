"""
主协调器 - 把一次 CLI 调用（Job）分派给各计算模块，汇总成机器可读报告

退出码:
    0  运行成功且所有检查通过
    1  检查失败（报告中带见证）
    2  输入错误（文件缺失、格式非法、输入对象不满足前提）
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from loguru import logger
from pydantic import BaseModel

from config.config import RUNTIME_CONFIG, get_dnc_config
from core.assembly import CorpusEntry, chern_assembly_check, trivial_bundle
from core.corpus import ComposablePair, assembly_corpus, umkehr_corpus
from core.deloc import DelocClass, deloc_basis, deloc_cohomology, hh0_groupoid_oracle
from core.dnc import run_dnc_suite
from core.exceptions import CapExceeded, DelocError, InputError, NotOriented
from core.grp import burghelea_hp, centralizer, conjugacy_classes, hh0_group_oracle
from core.gspace import GComplex, fixed_subcomplex
from core.linalg import combine
from core.loaders import load_bundle, load_group, load_space
from core.nervecoh import invariant_oracle, quotient_cohomology, total_cohomology
from core.pushpair import (
    check_cycle_equivalence,
    check_functoriality,
    check_projection_formula,
    constant_map,
    gram_matrix,
    identity_map,
    UmkehrMap,
)
from core.schemas import (
    ClassInfo,
    CohomologyReport,
    DelocComponent,
    DelocReport,
    GroupReport,
    PairingReport,
    RunReport,
    UmkehrBatchReport,
    UmkehrReport,
)

COMMANDS = ("hp-group", "cohomology", "deloc", "pairing", "assembly-check", "umkehr", "dnc-check")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


@dataclass
class Job:
    """一次命令调用：命令名、输入文件与选项"""
    command: str
    group: Optional[Path] = None
    space: Optional[Path] = None
    bundle: Optional[Path] = None
    corpus: Optional[str] = None
    degree: Optional[int] = None
    out: Optional[Path] = None
    threads: Optional[int] = None
    seed: Optional[int] = None
    samples: Optional[int] = None


# 处理函数返回 (检查是否通过, 报告体, 人类可读摘要)
Outcome = Tuple[bool, BaseModel, str]


class JobOrchestrator:
    """
    任务编排器

    每个命令对应一个 _run_<command> 方法；加载阶段与计算阶段抛出的 DelocError
    都按输入错误处理，检查失败只体现在报告的 ok 字段与退出码上。
    """

    def __init__(self):
        self._handlers: Dict[str, Callable[[Job], Outcome]] = {
            "hp-group": self._run_hp_group,
            "cohomology": self._run_cohomology,
            "deloc": self._run_deloc,
            "pairing": self._run_pairing,
            "assembly-check": self._run_assembly_check,
            "umkehr": self._run_umkehr,
            "dnc-check": self._run_dnc_check,
        }
        self.last_summary = ""
        self.last_report: Optional[RunReport] = None

    def run(self, job: Job) -> Tuple[int, RunReport]:
        """
        执行一个任务

        Returns:
            (退出码, RunReport)
        """
        if job.command not in self._handlers:
            report = RunReport(command=job.command, ok=False, payload={"error": f"未知命令: {job.command}"})
            self.last_report = report
            return EXIT_INPUT_ERROR, report
        if job.threads is not None:
            RUNTIME_CONFIG["threads"] = max(1, job.threads)

        logger.info(f"[orchestrator] 运行 {job.command}")
        try:
            ok, payload, summary = self._handlers[job.command](job)
        except DelocError as exc:
            logger.error(f"[orchestrator] {job.command} 输入错误: {type(exc).__name__}: {exc}")
            self.last_summary = f"{job.command}: 输入错误 ({type(exc).__name__}: {exc})"
            report = RunReport(
                command=job.command, ok=False,
                payload={"error": str(exc), "error_type": type(exc).__name__},
            )
            self.last_report = report
            return EXIT_INPUT_ERROR, report
        except Exception as exc:
            # 非领域异常是程序错误：记录堆栈并留下 ok=false 的报告，然后继续抛出
            logger.exception(f"[orchestrator] {job.command} 内部错误: {type(exc).__name__}: {exc}")
            self.last_summary = f"{job.command}: 内部错误 ({type(exc).__name__}: {exc})"
            self.last_report = RunReport(
                command=job.command, ok=False,
                payload={"error": str(exc), "error_type": type(exc).__name__, "internal": True},
            )
            raise

        self.last_summary = summary
        report = RunReport(command=job.command, ok=ok, payload=payload.model_dump(mode="json"))
        self.last_report = report
        if ok:
            logger.info(f"[orchestrator] {job.command} 完成: 全部检查通过")
        else:
            logger.warning(f"[orchestrator] {job.command} 完成: 存在失败的检查")
        return (EXIT_OK if ok else EXIT_CHECK_FAILED), report

    # ==================== 输入 ====================

    @staticmethod
    def _require(job: Job, attr: str):
        value = getattr(job, attr)
        if value is None:
            raise InputError(f"{job.command} 需要 --{attr}")
        return value

    def _load_space(self, job: Job) -> GComplex:
        group = load_group(job.group) if job.group is not None else None
        return load_space(self._require(job, "space"), group)

    # ==================== 各命令 ====================

    def _run_hp_group(self, job: Job) -> Outcome:
        G = load_group(self._require(job, "group"))
        hp = burghelea_hp(G)
        classes = [
            ClassInfo(
                representative=c.representative,
                size=len(c.members),
                centralizer_order=centralizer(G, c.representative).order,
                element_order=G.element_order(c.representative),
            )
            for c in conjugacy_classes(G)
        ]
        try:
            oracle = hh0_group_oracle(G)
        except CapExceeded as exc:
            logger.warning(f"[orchestrator] 跳过群代数 oracle: {exc}")
            oracle = None
        agreement = oracle is None or oracle == hp.even_dim == len(classes)
        report = GroupReport(
            order=G.order, exponent=G.exponent, classes=classes,
            hp_even=hp.even_dim, hp_odd=hp.odd_dim, hh0_oracle=oracle, agreement=agreement,
        )
        summary = f"|G|={G.order}, classes={len(classes)}, HP even={hp.even_dim}, odd={hp.odd_dim}, oracle={oracle}"
        return agreement, report, summary

    def _run_cohomology(self, job: Job) -> Outcome:
        K = self._load_space(job)
        degrees = [job.degree] if job.degree is not None else list(range(K.complex.dim + 1))
        total, invariant, quotient = {}, {}, {}
        for n in degrees:
            total[str(n)] = total_cohomology(K, n, with_basis=False).dim
            invariant[str(n)] = invariant_oracle(K, n)
            quotient[str(n)] = quotient_cohomology(K, n)
        agreement = total == invariant == quotient
        report = CohomologyReport(
            space=K.name, total=total, invariant_oracle=invariant, quotient_oracle=quotient, agreement=agreement,
        )
        dims = ", ".join(f"H^{n}={total[str(n)]}" for n in degrees)
        return agreement, report, f"{K.name}: {dims}, oracle agreement={agreement}"

    def _run_deloc(self, job: Job) -> Outcome:
        K = self._load_space(job)
        result = deloc_cohomology(K, method="total")
        cross = deloc_cohomology(K, method="invariant")
        agreement = [c.dims for c in result.components] == [c.dims for c in cross.components]
        oracle = None
        if K.complex.dim == 0:
            try:
                oracle = hh0_groupoid_oracle(K)
                agreement = agreement and oracle == result.degree_zero_total()
            except CapExceeded as exc:
                logger.warning(f"[orchestrator] 跳过群胚代数 oracle: {exc}")
        components = [
            DelocComponent(
                representative=c.representative,
                centralizer_order=c.centralizer_order,
                fixed_f_vector=c.fixed_f_vector,
                dims=c.dims,
            )
            for c in result.components
        ]
        report = DelocReport(
            space=K.name, components=components, even=result.even, odd=result.odd,
            hh0_groupoid_oracle=oracle, agreement=agreement,
        )
        per_class = "; ".join(f"[g={c.representative}] {c.dims}" for c in components)
        return agreement, report, f"{K.name}: even={result.even}, odd={result.odd} ({per_class})"

    def _run_pairing(self, job: Job) -> Outcome:
        K = self._load_space(job)
        blocks, skipped = [], {}
        for cls in conjugacy_classes(K.group):
            g = cls.representative
            fixed, _ = fixed_subcomplex(K, g)
            if fixed.is_empty():
                continue
            degrees = [job.degree] if job.degree is not None else range(fixed.dim + 1)
            try:
                for k in degrees:
                    blocks.append(gram_matrix(K, g, k).to_block())
            except NotOriented as exc:
                logger.warning(f"[orchestrator] 配对跳过 [g={g}]: {exc}")
                skipped[str(g)] = str(exc)
        perfect = all(b.perfect for b in blocks)
        report = PairingReport(space=K.name, blocks=blocks, skipped=skipped, perfect=perfect)
        return perfect, report, f"{K.name}: {len(blocks)} 个 Gram 块, perfect={perfect}, skipped={len(skipped)}"

    def _assembly_entries(self, job: Job) -> List[CorpusEntry]:
        if job.corpus is not None:
            if job.corpus != "builtin":
                raise InputError(f"未知语料: {job.corpus}（目前只支持 builtin）")
            return assembly_corpus()
        K = self._load_space(job)
        E = load_bundle(job.bundle, K) if job.bundle is not None else trivial_bundle(K)
        return [
            CorpusEntry(f"{K.name}/{E.name}/[{c.representative}]", K, E, c.representative)
            for c in conjugacy_classes(K.group)
        ]

    def _run_assembly_check(self, job: Job) -> Outcome:
        report = chern_assembly_check(self._assembly_entries(job))
        summary = f"{report.passed}/{report.total} 个恒等式成立"
        for failure in report.failures:
            summary += f"\n  FAIL {failure.name}: {failure.witness}"
        return not report.failures, report, summary

    def _umkehr_pairs(self, job: Job) -> List[ComposablePair]:
        if job.corpus is not None:
            if job.corpus != "builtin":
                raise InputError(f"未知语料: {job.corpus}（目前只支持 builtin）")
            return umkehr_corpus()
        K = self._load_space(job)
        identity = identity_map(K)
        return [
            ComposablePair("id∘id", identity, identity),
            ComposablePair("id→point", identity, constant_map(K)),
        ]

    def _run_umkehr(self, job: Job) -> Outcome:
        reports = []
        for pair in self._umkehr_pairs(job):
            u = UmkehrMap(pair.first)
            reports.append(UmkehrReport(
                name=pair.name,
                degree_shifts={str(g): s for g, s in u.degree_shifts.items()},
                parity_mismatch=u.parity_mismatch,
                skipped={str(g): reason for g, reason in u.skipped.items()},
                functoriality=[check_functoriality(pair.first, pair.second)],
                projection_formula=check_projection_formula(pair.first) and check_projection_formula(pair.second),
                cycle_equivalence=check_cycle_equivalence(pair.first, full_class(pair.first.source)),
            ))
        ok = all(
            r.projection_formula and r.cycle_equivalence and all(f.equal for f in r.functoriality)
            for r in reports
        )
        lines = [
            f"  {r.name}: functorial={all(f.equal for f in r.functoriality)}, "
            f"projection={r.projection_formula}, cycles={r.cycle_equivalence}"
            for r in reports
        ]
        return ok, UmkehrBatchReport(pairs=reports), "\n".join([f"{len(reports)} 个可复合映射对"] + lines)

    def _run_dnc_check(self, job: Job) -> Outcome:
        samples = job.samples if job.samples is not None else get_dnc_config()["samples"]
        seed = job.seed if job.seed is not None else RUNTIME_CONFIG["seed"]
        report = run_dnc_suite(samples=samples, seed=seed)
        worst = ", ".join(f"{k}={v:.2e}" for k, v in sorted(report.residuals.items()))
        return report.passed, report, f"passed={report.passed} ({worst})"


def full_class(K: GComplex) -> DelocClass:
    """所有基上闭链之和（每个分量每个次数一个求和项）"""
    parts = {}
    for rep, graded in deloc_basis(K).items():
        for k, vectors in graded.items():
            if vectors:
                parts.setdefault(rep, {})[k] = combine([(1, v) for v in vectors])
    return DelocClass(K, parts)
