"""Bisection search for the error threshold of a swept model parameter.

At each candidate value only the two largest code sizes are simulated.
The candidate counts as above threshold when the larger code fails more
often than the smaller one.

Two rates are "separated" when their difference exceeds the Wilson
half-widths of the facing sides added in quadrature.  Both sizes grow in
rounds of ``chunk`` trials until each has ``F`` failures (or hits the trial
cap).  The comparison stops early once the rates are separated at about
3.9 sigma, a level strict enough to survive checking after every round.
A candidate that is still not separated at 95% at the end is called by the
sign of the point estimates and marked unresolved.

The reported interval runs from the largest resolved below-threshold
candidate to the smallest resolved above-threshold candidate (falling back
to the bracket ends), so unresolved calls can only widen it.
"""

from dataclasses import dataclass, field
import math

from ..noise import with_param
from .sweep import WILSON_Z95, PointResult, PointRunner, SweepConfig, _pool, wilson_interval

EARLY_STOP_Z = 3.89
MIN_EARLY_FAILURES = 50


class NoSignChange(ValueError):
    """The bracket does not straddle the threshold."""


@dataclass(frozen=True)
class Decision:
    value: float
    above: bool
    resolved: bool
    small: PointResult
    large: PointResult


@dataclass
class ThresholdResult:
    axis: str
    estimate: float
    interval: tuple
    bracket: tuple
    decisions: list = field(default_factory=list)


def separated(a: PointResult, b: PointResult, z: float) -> bool:
    """Whether the rates of ``a`` and ``b`` differ beyond combined Wilson widths."""
    if a.rate == b.rate:
        return False
    if a.rate > b.rate:
        a, b = b, a
    _, hi_a = wilson_interval(a.failures, a.trials, z)
    lo_b, _ = wilson_interval(b.failures, b.trials, z)
    return b.rate - a.rate > math.hypot(hi_a - a.rate, b.rate - lo_b)


def compare_sizes(cfg: SweepConfig, value: float, pool=None) -> Decision:
    """Simulate the two largest sizes at ``value`` and compare their rates."""
    model = with_param(cfg.model, cfg.axis, value)
    L_small, L_large = cfg.L_list[-2], cfg.L_list[-1]
    runners = [PointRunner(model, cfg.decoder, L, float(value), cfg.seed, cfg.chunk,
                           pool, cfg.workers) for L in (L_small, L_large)]
    while True:
        active = [r for r in runners if not r.done(cfg.failures, cfg.max_trials)]
        if not active:
            break
        for r in active:
            r.extend(cfg.failures, min(cfg.max_trials, r.trials + cfg.chunk))
        small, large = runners[0].result(), runners[1].result()
        if (small.failures + large.failures >= MIN_EARLY_FAILURES
                and separated(small, large, EARLY_STOP_Z)):
            break
    small, large = runners[0].result(), runners[1].result()
    return Decision(float(value), large.rate > small.rate,
                    separated(small, large, WILSON_Z95), small, large)


def find_threshold(cfg: SweepConfig, bracket, width: float = 1e-3,
                   log=None) -> ThresholdResult:
    """Locate the parameter value where the size trend flips.

    ``bracket = (lo, hi)`` must have the large code winning at ``lo`` and
    losing at ``hi``.  Bisection stops when the bracket is narrower than
    ``width``.
    """
    cfg.validate()
    if len(cfg.L_list) < 2:
        raise ValueError("threshold search needs at least two code sizes")
    lo, hi = map(float, bracket)
    bracket_lo, bracket_hi = lo, hi
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    pool = _pool(cfg.workers)
    decisions = []

    def decide(value):
        d = compare_sizes(cfg, value, pool)
        decisions.append(d)
        if log is not None:
            log(d)
        return d

    try:
        if decide(lo).above:
            raise NoSignChange(f"already above threshold at the lower end {lo}")
        if not decide(hi).above:
            raise NoSignChange(f"still below threshold at the upper end {hi}")
        while hi - lo > width:
            mid = 0.5 * (lo + hi)
            if decide(mid).above:
                hi = mid
            else:
                lo = mid
    finally:
        if pool is not None:
            pool.close()
            pool.join()

    low, high = bracket_lo, bracket_hi
    for d in decisions:
        if d.resolved and not d.above:
            low = max(low, d.value)
        elif d.resolved and d.above:
            high = min(high, d.value)
    estimate = 0.5 * (lo + hi)
    # statistically contradictory calls must not exclude the estimate itself
    low, high = min(low, lo), max(high, hi)
    return ThresholdResult(cfg.axis, estimate, (low, high),
                           tuple(map(float, bracket)), decisions)
