from __future__ import annotations

from pathlib import Path

from core.logger import logger
from core.models import RunConfig
from core.types import EXIT_OK, ConfigError
from model import Distribution, validate_model
from simulate import (
    ReplicateResult,
    SimulationJob,
    StopCondition,
    default_grid,
    simulate_replicates,
    starting_codes,
    state_counts,
    write_events_csv,
    write_frame_csv,
    write_network_csv,
    write_observations_csv,
)

from .context import load_model_context
from .exit_codes import guarded
from .manifest import new_manifest, write_manifest, write_run_info

STATES_FILE = "states.csv"


def _replicate_directory(output_dir: Path, result: ReplicateResult, replicates: int) -> Path:
    if replicates == 1:
        return output_dir
    return output_dir / f"replicate_{result.index + 1}"


def _write_replicate(directory: Path, result: ReplicateResult, start_time: float, points: int) -> list[str]:
    written = [
        write_events_csv(result.events, directory / "events.csv"),
        write_network_csv(result.network, directory / "network.csv"),
    ]
    if result.observations is not None:
        written.append(write_observations_csv(result.observations, directory / "observations.csv"))
    grid = default_grid(result.events, start_time, points)
    written.append(write_frame_csv(state_counts(result.events, grid), directory / STATES_FILE))
    return [str(path) for path in written]


def build_jobs(config: RunConfig) -> list[SimulationJob]:
    section = config.simulate
    if section is None:
        raise ConfigError("config has no [simulate] section")
    context = load_model_context(config)
    parameters = context.require_parameters()
    validate_model(
        context.risk_functions.model_class, context.risk_functions, parameters, pop=context.population
    ).raise_if_failed()
    if (section.infection_delay is None) != (section.removal_delay is None):
        raise ConfigError("infection_delay and removal_delay must be given together")
    infection_delay = Distribution.from_spec(section.infection_delay) if section.infection_delay else None
    removal_delay = Distribution.from_spec(section.removal_delay) if section.removal_delay else None
    codes = starting_codes(context.population.n, section.starting_states)
    stop = StopCondition(
        tmax=section.tmax,
        max_iterations=section.max_iterations,
        max_wall_time=section.max_wall_time,
    )
    return [
        SimulationJob(
            population=context.population,
            risk_functions=context.risk_functions,
            risk_parameters=parameters,
            starting_states=codes,
            stop=stop,
            seed=config.seed,
            index=index,
            start_time=section.start_time,
            resync_interval=section.resync_interval,
            infection_delay=infection_delay,
            removal_delay=removal_delay,
            force=section.force,
        )
        for index in range(section.replicates)
    ]


@guarded
def cmd_simulate(config: RunConfig, *, workers: int = 1) -> int:
    jobs = build_jobs(config)
    section = config.simulate
    output_dir = Path(config.output.directory)
    logger.info(f"开始模拟: {len(jobs)} 个重复, seed={config.seed}, 输出目录 {output_dir}")
    results = simulate_replicates(jobs, workers)

    files: list[str] = []
    replicates = []
    for result in results:
        directory = _replicate_directory(output_dir, result, len(results))
        files.extend(_write_replicate(directory, result, section.start_time, section.curve_points))
        infected = int(result.events.ever_infected().sum())
        replicates.append(
            {
                "index": result.index + 1,
                "seed": result.seed,
                "iterations": result.iterations,
                "end_time": result.end_time,
                "ever_infected": infected,
            }
        )
        logger.info(
            f"重复 {result.index + 1}: {result.iterations} 个事件, 结束时刻 {result.end_time:.4f}, "
            f"累计感染 {infected}/{result.events.n}"
        )

    manifest = new_manifest(
        "simulate",
        config,
        n=results[0].events.n if results else 0,
        start_time=section.start_time,
        replicates=replicates,
        files=files,
    )
    write_manifest(output_dir, manifest)
    write_run_info(output_dir, "simulate")
    logger.success(f"模拟完成, 结果写入 {output_dir}")
    return EXIT_OK
