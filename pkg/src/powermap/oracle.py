"""Monte-Carlo oracle for the rejection probability at one grid point.

The estimate is a pure function of (chromosome, oracle settings, master seed):
every replication draws from a substream derived from the master seed and the
chromosome's integer coordinates, so repeated queries agree bit-for-bit
regardless of call order or worker placement.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Sequence

import numpy as np

from .grid import Chromosome, SearchSpace
from .regression import (
    DegenerateFitError,
    SingularDesignError,
    TestSpec,
    REGRESSOR_SCHEMES,
    generate_mlr_sample,
    ols_fit,
    run_test,
)

_MAX_REDRAWS = 10


class OracleError(RuntimeError):
    """A power estimate could not be produced."""


@dataclass(frozen=True)
class OracleConfig:
    """Monte-Carlo settings: replication count, test level, noise variance,
    the tested hypothesis, and the regressor scheme."""

    nsim: int
    alpha: float
    sigma2: float
    test: TestSpec
    scheme: str = "normal"

    def __post_init__(self) -> None:
        if self.nsim < 1:
            raise ValueError(f"nsim must be >= 1, got {self.nsim}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if not (self.sigma2 > 0 and np.isfinite(self.sigma2)):
            raise ValueError(f"sigma2 must be positive and finite, got {self.sigma2}")
        if self.scheme not in REGRESSOR_SCHEMES:
            raise ValueError(f"unknown regressor scheme {self.scheme!r}")


def _restricted_columns(p: int, tested: tuple[int, ...]) -> list[int]:
    # Intercept plus every untested slope; slope j sits in design column j.
    return [0] + [j for j in range(1, p + 1) if j not in tested]


def _one_replication(
    stream: np.random.SeedSequence,
    beta: np.ndarray,
    n: int,
    config: OracleConfig,
) -> bool:
    """Rejection indicator for a single replication.

    A degenerate draw (rank-deficient design or zero standard error) is
    re-drawn from the replication's next substream, at most _MAX_REDRAWS
    times; such draws are measure-zero under both schemes, so the retry
    cannot bias the estimate.
    """
    rng = np.random.default_rng(stream)
    for _ in range(_MAX_REDRAWS + 1):
        try:
            X, y = generate_mlr_sample(beta, n, config.sigma2, config.scheme, rng)
            fit = ols_fit(X, y)
            restricted_sse = None
            if config.test.kind == "f_joint":
                keep = _restricted_columns(len(beta), config.test.tested_indices)
                restricted_sse = ols_fit(X[:, keep], y).sse
            return run_test(fit, config.test, config.alpha, restricted_sse).reject
        except (SingularDesignError, DegenerateFitError):
            rng = np.random.default_rng(stream.spawn(1)[0])
    raise OracleError(
        f"replication still degenerate after {_MAX_REDRAWS} re-draws "
        f"(beta={beta.tolist()}, n={n})"
    )


def estimate_power(
    chromosome: Chromosome,
    space: SearchSpace,
    config: OracleConfig,
    master_seed: int,
) -> float:
    """Fraction of nsim replications in which the test rejects.

    Deterministic in (chromosome, config, master_seed); always an exact
    multiple of 1 / nsim.
    """
    beta, n = space.decode_params(chromosome)
    p = len(beta)
    if n < p + 2:
        raise OracleError(
            f"decoded sample size {n} cannot fit {p} slopes plus intercept"
        )
    if max(config.test.tested_indices) > p:
        raise ValueError(
            f"test indices {config.test.tested_indices} exceed the {p} coefficients"
        )
    root = np.random.SeedSequence((master_seed, *chromosome.genes))
    rejections = 0
    for stream in root.spawn(config.nsim):
        rejections += _one_replication(stream, beta, n, config)
    return rejections / config.nsim


@dataclass
class QueryCounter:
    """Monotone count of oracle calls; increments exactly once per estimate."""

    total_queries: int = 0

    def increment(self, by: int = 1) -> None:
        self.total_queries += by


class PowerOracle:
    """Counting front-end over estimate_power, optionally fanned out to
    worker processes.

    Because each estimate depends only on (master_seed, chromosome), results
    are identical for any worker count; the counter is incremented at the
    submission barrier, once per chromosome.
    """

    def __init__(
        self,
        space: SearchSpace,
        config: OracleConfig,
        master_seed: int,
        worker_count: int = 1,
    ) -> None:
        if worker_count < 1:
            raise ValueError(f"worker_count must be >= 1, got {worker_count}")
        if master_seed < 0:
            raise ValueError(f"master_seed must be >= 0, got {master_seed}")
        self.space = space
        self.config = config
        self.master_seed = master_seed
        self.worker_count = worker_count
        self.counter = QueryCounter()
        self._executor: ProcessPoolExecutor | None = None

    @property
    def total_queries(self) -> int:
        return self.counter.total_queries

    def evaluate(self, chromosome: Chromosome) -> float:
        self.counter.increment()
        return estimate_power(chromosome, self.space, self.config, self.master_seed)

    def evaluate_many(self, chromosomes: Sequence[Chromosome]) -> list[float]:
        """Estimates in input order; one query counted per chromosome."""
        self.counter.increment(len(chromosomes))
        func = partial(
            estimate_power,
            space=self.space,
            config=self.config,
            master_seed=self.master_seed,
        )
        if self.worker_count == 1 or len(chromosomes) < 2:
            return [func(c) for c in chromosomes]
        if self._executor is None:
            self._executor = ProcessPoolExecutor(max_workers=self.worker_count)
        chunk = max(1, len(chromosomes) // (4 * self.worker_count))
        return list(self._executor.map(func, chromosomes, chunksize=chunk))

    def close(self) -> None:
        if self._executor is not None:
            self._executor.shutdown()
            self._executor = None

    def __enter__(self) -> "PowerOracle":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
