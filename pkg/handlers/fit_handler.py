from __future__ import annotations

from pathlib import Path

from core.logger import logger
from core.models import RunConfig
from core.types import EXIT_OK, ConfigError, ModelClass
from likelihood import tnilm_from_values
from mcmc import MarkovChain, McmcRun, McmcSettings, create_run, iterate, start
from posterior import SPILL_FILE, chain_directory, write_chain
from rendering import render_run_report
from simulate import read_observations_csv, write_frame_csv

from .context import load_model_context
from .exit_codes import guarded
from .manifest import new_manifest, write_manifest, write_run_info

TERMS_FILE = "loglik_terms.csv"


def build_run(config: RunConfig) -> McmcRun:
    section = config.fit
    if section is None:
        raise ConfigError("config has no [fit] section")
    if not section.observations:
        raise ConfigError("fit.observations is not set")
    context = load_model_context(config)
    model_class = ModelClass.parse(config.model.model_class)
    observations = read_observations_csv(model_class, section.observations)
    return create_run(
        observations,
        context.require_extents(),
        context.population,
        context.risk_functions,
        context.require_priors(),
        McmcSettings.from_config(section, config.seed),
        start_time=section.start_time,
    )


def write_likelihood_terms(run: McmcRun, chain: MarkovChain, directory: str | Path) -> Path:
    """链末状态的逐事件对数似然项，用于排查哪些事件拉低了似然。"""
    state = chain.state
    result = tnilm_from_values(state.values, state.events, state.network, start_time=run.start_time)
    return write_frame_csv(result.to_frame(), Path(directory) / TERMS_FILE)


def chain_entries(run: McmcRun) -> list[dict]:
    entries = []
    for chain in run.chains:
        entries.append(
            {
                "index": chain.index + 1,
                "seed": chain.seed,
                "iterations": chain.iterations,
                "acceptance": chain.acceptance_summary(),
                "log_posterior": chain.state.log_posterior,
            }
        )
    return entries


@guarded
def cmd_fit(config: RunConfig, *, workers: int = 1) -> int:
    run = build_run(config)
    output_dir = Path(config.output.directory)
    settings = run.settings
    logger.info(
        f"开始推断: {run.model_class.value}, n={run.population.n}, 链数 {settings.chains}, "
        f"迭代 {settings.iterations}, 窗口起点 {run.start_time:.4f}"
    )
    start(run, workers=workers)
    if settings.spill:
        for chain in run.chains:
            directory = chain_directory(output_dir, chain.index)
            directory.mkdir(parents=True, exist_ok=True)
            chain.enable_spill(str(directory / SPILL_FILE))
    iterate(run, settings.iterations, workers=workers)

    files: list[str] = []
    for chain in run.chains:
        files.extend(str(path) for path in write_chain(chain, chain_directory(output_dir, chain.index)))
        if config.fit.dump_terms:
            files.append(str(write_likelihood_terms(run, chain, chain_directory(output_dir, chain.index))))

    manifest = new_manifest(
        "fit",
        config,
        n=run.population.n,
        start_time=run.start_time,
        iterations=settings.iterations,
        labels=run.chains[0].labels if run.chains else [],
        settings=settings.as_dict(),
        chains=chain_entries(run),
        files=files,
    )
    write_manifest(output_dir, manifest)
    write_run_info(output_dir, "fit", elapsed=[round(chain.elapsed, 3) for chain in run.chains])
    render_run_report(output_dir, manifest)
    logger.success(f"推断完成, 样本写入 {output_dir}")
    return EXIT_OK
