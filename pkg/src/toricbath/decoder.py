"""Matching decoders for the bit-flip toric code.

Two edge-weight rules are available.  ``Manhattan`` charges each anyon pair
its torus distance.  ``CorrelationAware`` charges ``-log`` of the relative
probability that a pair of anyons at a given offset was created by a chain
of single flips and/or diagonal pair flips; it is the decoder matched to the
:class:`~toricbath.noise.PairCorrelated` model.

For each matched pair the decoder also records which torus image of the
displacement produced the weight; the correction runs along the
horizontal-first staircase of that image.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from . import lattice
from .lattice import CodeParams
from .matching import min_weight_perfect_matching
from .noise import sample


@dataclass(frozen=True)
class Manhattan:
    pass


@dataclass(frozen=True)
class CorrelationAware:
    p1: float
    p2: float

    def __post_init__(self):
        for name in ("p1", "p2"):
            value = getattr(self, name)
            if not 0.0 <= value < 1.0:
                raise ValueError(f"{name} must lie in [0, 1), got {value}")
        if self.p1 == 0.0 and self.p2 == 0.0:
            raise ValueError("p1 and p2 cannot both be zero")


@dataclass(frozen=True)
class TrialOutcome:
    success: bool
    anyon_count: int
    residual_class: tuple


def parse_decoder(name: str, p1=None, p2=None):
    key = name.strip().lower()
    if key == "manhattan":
        return Manhattan()
    if key in ("correlated", "correlation-aware", "correlation_aware"):
        if p1 is None or p2 is None:
            raise ValueError("the correlated decoder needs p1 and p2")
        return CorrelationAware(float(p1), float(p2))
    raise ValueError(f"unknown decoder {name!r}")


def _as_sites(s):
    s = np.asarray(s, dtype=np.int64).reshape(-1, 2)
    if len(s) % 2:
        raise ValueError(f"syndrome has odd size {len(s)}")
    return s


def _raw_offsets(s, L):
    """Offsets ``(d, e)`` in ``[0, L)`` from every anyon to every other."""
    d = np.mod(s[None, :, 0] - s[:, None, 0], L)
    e = np.mod(s[None, :, 1] - s[:, None, 1], L)
    return d, e


def manhattan_images(s, c: CodeParams):
    """Minimal-image weights and displacements for all anyon pairs."""
    s = _as_sites(s)
    L = c.L
    d, e = _raw_offsets(s, L)
    dx = np.where(2 * d > L, d - L, d)
    dy = np.where(2 * e > L, e - L, e)
    w = (np.abs(dx) + np.abs(dy)).astype(float)
    return w, dx, dy


def weights_manhattan(s, c: CodeParams) -> np.ndarray:
    """Torus Manhattan distance between every pair of anyons."""
    return manhattan_images(s, c)[0]


# ---------------------------------------------------------------------------
# correlation-aware weights


def _log_binom(n, k):
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _log_odds(p):
    return math.log(p) - math.log1p(-p) if p > 0 else -math.inf


def _chain_log_terms(a, b, lq1, lq2):
    """Log of each contributing chain family for an anyon offset ``(a, b)``.

    ``a <= b`` are the absolute offsets along the two axes.  The families
    are: only single flips; only diagonal pair flips; pair flips plus one
    single flip; single flips plus one pair flip.
    """
    n = a + b
    terms = []
    if lq1 > -math.inf:
        terms.append(_log_binom(n, a) + n * lq1)
    if lq2 > -math.inf and n % 2 == 0:
        terms.append(_log_binom(b, (b - a) // 2) + b * lq2)
    if lq1 > -math.inf and lq2 > -math.inf:
        if n % 2 == 1 and n >= 3:
            terms.append(math.log((n + 1) // 2) + _log_binom(b, (b - a - 1) // 2)
                         + lq1 + (b - 1) * lq2)
        if a >= 1 and n >= 4:
            terms.append(math.log(n - 1) + _log_binom(n - 2, a - 1)
                         + (n - 2) * lq1 + lq2)
    return terms


def pair_chain_log_probability(a: int, b: int, p1: float, p2: float) -> float:
    """Natural log of :func:`pair_chain_probability` (``-inf`` if zero)."""
    a, b = sorted((int(a), int(b)))
    if a < 0 or a + b == 0:
        raise ValueError("offsets must be nonnegative and not both zero")
    terms = _chain_log_terms(a, b, _log_odds(p1), _log_odds(p2))
    if not terms:
        return -math.inf
    top = max(terms)
    return top + math.log(sum(math.exp(t - top) for t in terms))


def pair_chain_probability(a: int, b: int, p1: float, p2: float) -> float:
    """Relative probability that two anyons at offset ``(a, b)`` share a chain.

    The value is a likelihood ratio against the error-free configuration,
    summed over the lowest-order chain families.  Zero means no chain of
    those families connects the pair (for example an odd offset with
    ``p1 = 0``).
    """
    return math.exp(pair_chain_log_probability(a, b, p1, p2))


@lru_cache(maxsize=64)
def correlation_weight_table(L: int, p1: float, p2: float) -> np.ndarray:
    """``table[a, b] = -log pair_chain_probability(a, b)`` for ``0 <= a, b <= L``.

    Offset ``L`` occurs for the wrapped image of a zero offset.  Entry
    ``[0, 0]`` and unreachable offsets are ``+inf``.
    """
    table = np.full((L + 1, L + 1), np.inf)
    for a in range(L + 1):
        for b in range(L + 1):
            if a + b:
                table[a, b] = -pair_chain_log_probability(a, b, p1, p2)
    table.setflags(write=False)
    return table


def correlation_images(s, c: CodeParams, p1: float, p2: float):
    """Best-image weights and displacements under the correlation-aware rule.

    Each pair is tried at the four images ``{d, d-L} x {e, e-L}``; the image
    with the smallest weight (largest chain probability) wins, the first
    listed winning ties.
    """
    s = _as_sites(s)
    L = c.L
    table = correlation_weight_table(L, float(p1), float(p2))
    d, e = _raw_offsets(s, L)
    cand_dx = np.stack([d, d - L, d, d - L])
    cand_dy = np.stack([e, e, e - L, e - L])
    ax = np.abs(cand_dx)
    ay = np.abs(cand_dy)
    weights = table[np.minimum(ax, ay), np.maximum(ax, ay)]
    best = np.argmin(weights, axis=0)
    w = np.take_along_axis(weights, best[None], axis=0)[0]
    dx = np.take_along_axis(cand_dx, best[None], axis=0)[0]
    dy = np.take_along_axis(cand_dy, best[None], axis=0)[0]
    n = len(s)
    off = ~np.eye(n, dtype=bool)
    if n and not np.all(np.isfinite(w[off])):
        raise ValueError("some anyon pair has zero chain probability at every image")
    np.fill_diagonal(w, 0.0)
    return w, dx, dy


def weights_correlation_aware(s, c: CodeParams, p1: float, p2: float) -> np.ndarray:
    """``-log`` chain probability for every anyon pair (best torus image)."""
    return correlation_images(s, c, p1, p2)[0]


# ---------------------------------------------------------------------------
# decoding


def _images(s, kind, c):
    if isinstance(kind, Manhattan):
        return manhattan_images(s, c)
    if isinstance(kind, CorrelationAware):
        return correlation_images(s, c, kind.p1, kind.p2)
    raise TypeError(f"unknown decoder kind {kind!r}")


def match_syndrome(s, kind, c: CodeParams, **matching_options):
    """Matched anyon pairs and the displacement used for each.

    Returns ``(pairs, dx, dy)``: ``pairs`` is an ``(k, 2)`` array of row
    indices into ``s`` and ``dx, dy`` the chosen displacements from the
    first anyon of each pair to the second.
    """
    s = _as_sites(s)
    if len(s) == 0:
        empty = np.zeros(0, dtype=np.int64)
        return np.zeros((0, 2), dtype=np.int64), empty, empty
    w, dx, dy = _images(s, kind, c)
    off = ~np.eye(len(s), dtype=bool)
    # a uniform shift keeps every perfect matching's rank; keeps weights >= 0
    w = w - min(0.0, float(w[off].min()))
    np.fill_diagonal(w, 0.0)
    pairs = np.asarray(min_weight_perfect_matching(w, **matching_options), dtype=np.int64)
    return pairs, dx[pairs[:, 0], pairs[:, 1]], dy[pairs[:, 0], pairs[:, 1]]


def decode(s, kind, c: CodeParams, **matching_options) -> np.ndarray:
    """Correction configuration whose syndrome equals ``s``."""
    s = _as_sites(s)
    pairs, dx, dy = match_syndrome(s, kind, c, **matching_options)
    correction = lattice.empty_config(c)
    bonds = [lattice.path_bonds(s[i], int(x), int(y), c.L)
             for (i, _), x, y in zip(pairs, dx, dy)]
    if bonds:
        lattice.toggle(correction, np.concatenate(bonds))
    return correction


def trial(model, kind, c: CodeParams, rng, **matching_options) -> TrialOutcome:
    """Sample an error, decode its syndrome, and report the residual class.

    The residual homology is computed from cut-crossing parities of the
    error and of each correction staircase, which avoids materialising the
    correction.
    """
    e = sample(model, c, rng)
    s = lattice.syndrome_of(e, c)
    pairs, dx, dy = match_syndrome(s, kind, c, **matching_options)
    ex, ey = lattice.crossing_parity(e, c)
    if len(pairs):
        cx, cy = lattice.staircase_crossings(s[pairs[:, 0]], dx, dy, c.L)
    else:
        cx = cy = 0
    residual = (ex ^ cx, ey ^ cy)
    return TrialOutcome(residual == (0, 0), int(len(s)), residual)
