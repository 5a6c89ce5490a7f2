import asyncio
import time
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import structlog

from bayesmix.config import settings
from bayesmix.errors import BayesmixError, ConfigurationError, SamplerError
from bayesmix.models.dataset import Dataset
from bayesmix.models.likelihood import mixture_log_likelihood
from bayesmix.models.prior import FixedK, PriorConfig, RandomK, SparseK
from bayesmix.pipeline import steps
from bayesmix.pipeline.context import SweepContext
from bayesmix.pipeline.init import init_from_kmeans
from bayesmix.pipeline.records import ChainOutput, SweepRecord
from bayesmix.schemas.chain import ChainConfig, SamplerMode

log = structlog.get_logger()


def _classify(ctx: SweepContext) -> None:
    steps.step_classify(ctx.data, ctx.state, ctx.rng)


def _compact(ctx: SweepContext) -> None:
    steps.compact_filled(ctx.state)


def _params_all(ctx: SweepContext) -> None:
    steps.step_component_params(ctx.data, ctx.state, ctx.prior, ctx.rng)


def _params_filled(ctx: SweepContext) -> None:
    filled = np.flatnonzero(ctx.state.counts > 0)
    steps.step_component_params(ctx.data, ctx.state, ctx.prior, ctx.rng, components=filled)


def _hyper_all(ctx: SweepContext) -> None:
    steps.step_hyper(ctx.state, ctx.prior, ctx.rng, filled_only=False)


def _hyper_filled(ctx: SweepContext) -> None:
    steps.step_hyper(ctx.state, ctx.prior, ctx.rng, filled_only=True)


def _sample_K(ctx: SweepContext) -> None:
    ctx.next_K = steps.step_sample_K(ctx.state, ctx.prior, ctx.rng)


def _add_empty(ctx: SweepContext) -> None:
    assert ctx.next_K is not None
    steps.step_add_empty(ctx.state, ctx.next_K, ctx.prior, ctx.rng)


def _weights(ctx: SweepContext) -> None:
    gamma_K = float(ctx.prior.gamma_spec.gamma_for(ctx.state.K))
    steps.step_weights(ctx.state, gamma_K, ctx.rng)


def _permute(ctx: SweepContext) -> None:
    if ctx.permutation_step:
        steps.permute_labels_random(ctx.state, ctx.rng)


def _validate(ctx: SweepContext) -> None:
    ctx.state.validate()


Step = tuple[str, Callable[[SweepContext], None]]

# Ordered sweep stages per sampler
FIXED_K_STEPS: list[Step] = [
    ("classify", _classify),
    ("component_params", _params_all),
    ("hyper", _hyper_all),
    ("weights", _weights),
    ("permute", _permute),
]

TELESCOPING_STEPS: list[Step] = [
    ("classify", _classify),
    ("compact", _compact),
    ("component_params", _params_filled),
    ("sample_K", _sample_K),
    ("add_empty", _add_empty),
    ("weights", _weights),
    ("hyper", _hyper_filled),
    ("permute", _permute),
]


def _check_mode(prior: PriorConfig, mode: SamplerMode) -> None:
    match mode, prior.k_prior:
        case SamplerMode.FIXED_K, FixedK():
            pass
        case SamplerMode.SFM, SparseK() | FixedK():
            pass
        case SamplerMode.TELESCOPING, RandomK():
            pass
        case _:
            raise ConfigurationError(
                f"mode '{mode}' is incompatible with prior on K {type(prior.k_prior).__name__}"
            )


def run_sweep(ctx: SweepContext, stages: list[Step], step_seconds: dict[str, float]) -> None:
    """Run the stages of one sweep in order. The first failure aborts the chain."""
    for step_name, step_fn in stages:
        start = time.perf_counter()
        try:
            step_fn(ctx)
        except BayesmixError as e:
            log.error(
                "sweep_step_failed", iteration=ctx.iteration, step=step_name, error=str(e)
            )
            raise SamplerError(ctx.iteration, step_name, str(e)) from e
        elapsed = time.perf_counter() - start
        step_seconds[step_name] = step_seconds.get(step_name, 0.0) + elapsed


def run_chain(
    data: Dataset,
    prior: PriorConfig,
    chain_config: ChainConfig,
    mode: SamplerMode,
    rng: np.random.Generator | None = None,
    initial_K: int | None = None,
) -> ChainOutput:
    """Run one chain and keep the post-burn-in sweeps (1-based iterations) at the thinning rate.

    ``initial_K`` is the number of k-means clusters the telescoping sampler starts from; the
    fixed-K samplers always start from the K of the prior.
    """
    _check_mode(prior, mode)
    if prior.r != data.r:
        raise ConfigurationError(f"prior has dimension {prior.r}, data has {data.r}")
    if mode is SamplerMode.TELESCOPING:
        if initial_K is None:
            raise ConfigurationError("the telescoping sampler needs a starting number of clusters")
        start_K = initial_K
        stages = TELESCOPING_STEPS
    else:
        start_K = prior.initial_K
        stages = FIXED_K_STEPS
    if settings.validate_states:
        stages = [*stages, ("validate", _validate)]
    rng = rng if rng is not None else np.random.default_rng(chain_config.seed)

    started = time.monotonic()
    state = init_from_kmeans(data, start_K, prior, rng)
    ctx = SweepContext(
        data=data,
        prior=prior,
        state=state,
        rng=rng,
        permutation_step=chain_config.permutation_step,
    )
    step_seconds: dict[str, float] = {}
    records: list[SweepRecord] = []
    log.info(
        "chain_started",
        mode=str(mode),
        seed=chain_config.seed,
        n_iter=chain_config.n_iter,
        burn_in=chain_config.burn_in,
        K=start_K,
    )

    every = settings.progress_every
    for iteration in range(1, chain_config.n_iter + 1):
        ctx.iteration = iteration
        run_sweep(ctx, stages, step_seconds)
        if chain_config.stores(iteration):
            records.append(
                SweepRecord.from_state(
                    iteration,
                    ctx.state,
                    mixture_log_likelihood(data, ctx.state),
                    chain_config.store_assignments,
                )
            )
        if every and iteration % every == 0:
            log.info(
                "chain_progress",
                iteration=iteration,
                K=ctx.state.K,
                K_plus=ctx.state.K_plus,
                seed=chain_config.seed,
            )
    wall_time = time.monotonic() - started
    log.info("chain_finished", seed=chain_config.seed, stored=len(records), wall_time=wall_time)
    return ChainOutput(
        records=records,
        config=chain_config,
        mode=mode,
        prior=prior,
        wall_time=wall_time,
        seed=chain_config.seed,
        step_seconds=step_seconds,
    )


async def run_chains(
    data: Dataset,
    prior: PriorConfig,
    chain_configs: list[ChainConfig],
    mode: SamplerMode,
    initial_K: int | None = None,
    max_workers: int | None = None,
) -> list[ChainOutput]:
    """Run independent chains concurrently in worker processes; results keep input order."""
    if not chain_configs:
        return []
    loop = asyncio.get_running_loop()
    workers = max_workers or settings.max_workers or len(chain_configs)
    with ProcessPoolExecutor(max_workers=min(workers, len(chain_configs))) as pool:
        futures = [
            loop.run_in_executor(pool, run_chain, data, prior, config, mode, None, initial_K)
            for config in chain_configs
        ]
        return list(await asyncio.gather(*futures))
