"""命令行入口：只负责解析参数、装配配置并分派到 handlers。"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from core.config import apply_overrides, load_run_config, worker_count
from core.logger import configure_logging, logger
from core.types import EXIT_CONFIG, TnilmError, exit_code_for
from handlers import cmd_curves, cmd_fit, cmd_simulate, cmd_summarize, cmd_validate

COMMANDS = ("simulate", "fit", "summarize", "curves", "validate")


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--verbose", action="store_true", help="输出 DEBUG 级日志")
    parser.add_argument("--workers", default=None, help="进程数，默认读取 TNILM_WORKERS 或 CPU 数")
    parser.add_argument("--output-dir", default=None, help="覆盖输出目录")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tnilm", description="个体水平传染病模型的模拟与贝叶斯推断")
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="按配置模拟流行并生成观测")
    simulate.add_argument("config")
    simulate.add_argument("--seed", default=None)
    simulate.add_argument("--replicates", default=None)
    simulate.add_argument("--tmax", default=None)
    _common(simulate)

    fit = sub.add_parser("fit", help="对观测运行数据增广 MCMC")
    fit.add_argument("config")
    fit.add_argument("--observations", default=None, help="覆盖 fit.observations")
    fit.add_argument("--seed", default=None)
    fit.add_argument("--iterations", default=None)
    fit.add_argument("--chains", default=None)
    fit.add_argument("--spill", default=None, help="样本写入 SQLite (true/false)")
    _common(fit)

    for name, help_text in (("summarize", "参数与传播网络的后验汇总"), ("curves", "各状态人数的后验分位数曲线")):
        command = sub.add_parser(name, help=help_text)
        command.add_argument("run_dir")
        command.add_argument("--burnin", type=int, default=None)
        command.add_argument("--thin", type=int, default=None)
        _common(command)
    sub.choices["curves"].add_argument("--points", type=int, default=None)
    sub.choices["curves"].add_argument("--state", default=None, help="只输出某一状态，如 I")

    validate = sub.add_parser("validate", help="校验模型配置")
    validate.add_argument("config")
    validate.add_argument("--verbose", action="store_true")
    return parser


def _load_config(args: argparse.Namespace):
    config = load_run_config(args.config)
    config = apply_overrides(
        config,
        seed=getattr(args, "seed", None),
        iterations=getattr(args, "iterations", None),
        output_dir=getattr(args, "output_dir", None),
        chains=getattr(args, "chains", None),
        replicates=getattr(args, "replicates", None),
        tmax=getattr(args, "tmax", None),
        spill=getattr(args, "spill", None),
    )
    observations = getattr(args, "observations", None)
    if observations and config.fit is not None:
        config = config.model_copy(update={"fit": config.fit.model_copy(update={"observations": observations})})
    return config


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    workers = worker_count(getattr(args, "workers", None))

    if args.command in ("summarize", "curves"):
        options = {"burnin": args.burnin, "thin": args.thin, "output_dir": args.output_dir}
        if args.command == "summarize":
            return cmd_summarize(args.run_dir, **options)
        return cmd_curves(args.run_dir, points=args.points, state=args.state, **options)

    try:
        config = _load_config(args)
    except TnilmError as exc:
        logger.error(f"配置加载失败: {exc}")
        return exit_code_for(exc)
    except OSError as exc:
        logger.error(f"无法读取配置 {args.config}: {exc}")
        return EXIT_CONFIG

    if args.command == "simulate":
        return cmd_simulate(config, workers=workers)
    if args.command == "fit":
        return cmd_fit(config, workers=workers)
    return cmd_validate(config)


if __name__ == "__main__":
    sys.exit(main())
