"""Monte Carlo sweeps of the logical failure rate.

Every trial draws from its own PCG64 stream keyed by
``(master seed, L, parameter value, trial index)``.  A point stops at the
trial where the ``F``-th failure occurs (or at the trial cap), so the
counts depend only on the seed and never on how many workers ran.
"""

from dataclasses import dataclass, field
import math
import multiprocessing
import struct

import numpy as np

from ..decoder import CorrelationAware, Manhattan, trial
from ..lattice import CodeParams
from ..noise import PairCorrelated, model_name, with_param

WILSON_Z95 = 1.959963984540054
DECODER_P1_FLOOR = 1e-6
MIN_FAILURES = 100


def wilson_interval(failures: int, trials: int, z: float = WILSON_Z95):
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return 0.0, 1.0
    phat = failures / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    centre = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom
    # the interval touches 0 (or 1) exactly when no (or every) trial failed
    lo = 0.0 if failures == 0 else max(0.0, centre - half)
    hi = 1.0 if failures == trials else min(1.0, centre + half)
    return lo, hi


def matched_decoder(model, decoder: str):
    """Decoder kind for ``model``: ``manhattan`` or ``correlated``.

    The correlated decoder is tuned to the pair model's own ``(p1, p2)``.
    A zero ``p1`` is lifted to a tiny floor so odd anyon offsets keep a
    finite weight.
    """
    if decoder == "manhattan":
        return Manhattan()
    if decoder == "correlated":
        if not isinstance(model, PairCorrelated):
            raise ValueError("the correlated decoder is defined for the pair model only")
        p1 = max(model.p1, DECODER_P1_FLOOR)
        return CorrelationAware(p1, model.p2)
    raise ValueError(f"unknown decoder {decoder!r}")


def _float_key(value: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", float(value)))[0]


def trial_rng(master_seed: int, L: int, param: float, index: int):
    ss = np.random.SeedSequence(entropy=master_seed,
                                spawn_key=(int(L), _float_key(param), int(index)))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass
class SweepConfig:
    model: object
    axis: str
    values: list
    decoder: str = "manhattan"
    L_list: list = field(default_factory=lambda: [8, 12, 16, 24])
    failures: int = 1000
    max_trials: int = 200_000
    seed: int = 12345
    workers: int = 1
    chunk: int = 200

    def validate(self):
        if list(self.L_list) != sorted(self.L_list):
            raise ValueError("L_list must be ascending")
        if self.failures < MIN_FAILURES:
            raise ValueError(f"failures must be at least {MIN_FAILURES}")
        if self.workers < 1 or self.chunk < 1:
            raise ValueError("workers and chunk must be positive")
        if self.max_trials < 1:
            raise ValueError("max_trials must be positive")
        with_param(self.model, self.axis, self.values[0] if self.values else 0)


@dataclass(frozen=True)
class PointResult:
    L: int
    param: float
    trials: int
    failures: int

    @property
    def rate(self) -> float:
        return self.failures / self.trials if self.trials else 0.0

    @property
    def interval(self):
        return wilson_interval(self.failures, self.trials)


@dataclass
class SweepResult:
    model: str = ""
    axis: str = ""
    decoder: str = ""
    points: list = field(default_factory=list)


def _run_chunk(args):
    model, decoder, L, param, seed, start, stop = args
    c = CodeParams(L)
    kind = matched_decoder(model, decoder)
    fails = np.zeros(stop - start, dtype=bool)
    for k, index in enumerate(range(start, stop)):
        outcome = trial(model, kind, c, trial_rng(seed, L, param, index))
        fails[k] = not outcome.success
    return fails


class PointRunner:
    """Incrementally extendable trial counter for one ``(L, param)`` point."""

    def __init__(self, model, decoder, L, param, seed, chunk=200, pool=None, workers=1):
        self.model = model
        self.decoder = decoder
        self.L = L
        self.param = param
        self.seed = seed
        self.chunk = chunk
        self.pool = pool
        self.workers = workers
        self.trials = 0
        self.failures = 0

    def result(self) -> PointResult:
        return PointResult(self.L, self.param, self.trials, self.failures)

    def extend(self, target_failures: int, trial_cap: int):
        """Run further trials until ``target_failures`` or ``trial_cap``.

        Trials are issued in rounds of ``chunk`` consecutive indices, each
        round split evenly across the workers, so the sequence of states
        visited is the same for any worker count.
        """
        while self.failures < target_failures and self.trials < trial_cap:
            start = self.trials
            stop = min(start + self.chunk, trial_cap)
            pieces = max(1, min(self.workers, stop - start))
            edges = np.linspace(start, stop, pieces + 1).astype(int)
            jobs = [(self.model, self.decoder, self.L, self.param, self.seed, int(a), int(b))
                    for a, b in zip(edges[:-1], edges[1:]) if b > a]
            if self.pool is not None and len(jobs) > 1:
                outs = self.pool.map(_run_chunk, jobs)
            else:
                outs = [_run_chunk(job) for job in jobs]
            fails = np.concatenate(outs)
            cum = self.failures + np.cumsum(fails)
            hit = np.flatnonzero(cum >= target_failures)
            used = int(hit[0]) + 1 if hit.size else fails.size
            self.trials += used
            self.failures = int(cum[used - 1])
        return self.result()

    def done(self, target_failures: int, trial_cap: int) -> bool:
        return self.failures >= target_failures or self.trials >= trial_cap


def _pool(workers):
    if workers and workers > 1:
        return multiprocessing.get_context("fork").Pool(workers)
    return None


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """Run every ``(L, value)`` point of ``cfg`` to its stop rule."""
    cfg.validate()
    out = SweepResult(model_name(cfg.model), cfg.axis, cfg.decoder)
    pool = _pool(cfg.workers)
    try:
        for value in cfg.values:
            model = with_param(cfg.model, cfg.axis, value)
            for L in cfg.L_list:
                runner = PointRunner(model, cfg.decoder, L, float(value), cfg.seed,
                                     cfg.chunk, pool, cfg.workers)
                out.points.append(runner.extend(cfg.failures, cfg.max_trials))
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    return out
