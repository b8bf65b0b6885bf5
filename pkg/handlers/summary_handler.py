from __future__ import annotations

from pathlib import Path

from core.logger import logger
from core.types import EXIT_OK, ModelClass
from posterior import (
    ChainSamples,
    curve_table,
    epidemic_curves,
    load_chains,
    network_posterior,
    posterior_grid,
    summarize,
    write_curves,
    write_network_posterior,
    write_summary,
)
from rendering import render_run_report

from .exit_codes import guarded
from .manifest import read_manifest


def load_fit(run_dir: str | Path) -> tuple[dict, list[ChainSamples]]:
    manifest = read_manifest(run_dir, "fit")
    chains = load_chains(
        run_dir,
        ModelClass.parse(manifest["model_class"]),
        len(manifest.get("chains", [])),
        int(manifest["n"]),
    )
    return manifest, chains


def retention(manifest: dict, burnin: int | None, thin: int | None) -> tuple[int, int]:
    """命令行未给出时沿用拟合配置里的 [summary] 设置。"""
    section = manifest.get("config", {}).get("summary") or {}
    burnin = int(section.get("burnin", 0)) if burnin is None else burnin
    thin = int(section.get("thin", 1)) if thin is None else thin
    return burnin, thin


@guarded
def cmd_summarize(
    run_dir: str | Path,
    *,
    burnin: int | None = None,
    thin: int | None = None,
    output_dir: str | Path | None = None,
) -> int:
    manifest, chains = load_fit(run_dir)
    burnin, thin = retention(manifest, burnin, thin)
    target = Path(output_dir or run_dir)
    summary = summarize(chains, burnin, thin)
    distribution = network_posterior(chains, burnin, thin)
    write_summary(summary, target, burnin=burnin, thin=thin)
    write_network_posterior(distribution, target)
    render_run_report(
        target,
        dict(manifest, burnin=burnin, thin=thin),
        summary,
        distribution.out_degree_frame(),
    )
    for row in summary.itertuples(index=False):
        logger.info(
            f"{row.parameter}: 均值 {row.mean:.6g}, 方差 {row.variance:.6g}, "
            f"95% 区间 [{row.ci_lower:.6g}, {row.ci_upper:.6g}]"
        )
    logger.success(f"后验汇总写入 {target}, 保留样本 {distribution.samples} 个")
    return EXIT_OK


@guarded
def cmd_curves(
    run_dir: str | Path,
    *,
    burnin: int | None = None,
    thin: int | None = None,
    points: int | None = None,
    state: str | None = None,
    output_dir: str | Path | None = None,
) -> int:
    manifest, chains = load_fit(run_dir)
    burnin, thin = retention(manifest, burnin, thin)
    target = Path(output_dir or run_dir)
    if points is None:
        points = int((manifest.get("config", {}).get("summary") or {}).get("curve_points", 201))
    grid = posterior_grid(chains, burnin, thin, float(manifest["start_time"]), points)
    if state is None:
        curves = curve_table(chains, burnin, thin, grid)
    else:
        curves = epidemic_curves(chains, burnin, thin, state, grid)
    path = write_curves(curves, target)
    logger.success(f"流行曲线写入 {path}")
    return EXIT_OK
