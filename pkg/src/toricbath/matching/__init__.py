"""Exact minimum-weight perfect matching on complete graphs.

The blossom core runs on integer weights (real weights are multiplied by
``scale`` and rounded).  Two interchangeable cores exist: a compiled one
(``_blossom_ext``) and a pure-Python one (``_blossom_py``).  The compiled
core is preferred when importable; set ``TORICBATH_PURE_PYTHON=1`` to force
the fallback.

Large syndromes are solved on a sparse candidate graph (each vertex's
``k`` lightest edges).  The resulting dual solution is then checked against
every pair of the complete graph; any edge with negative reduced cost is
added and the problem is re-solved.  The result is therefore exactly
optimal for the complete graph, not a heuristic.  Passing ``truncate_k``
skips that certificate step and is an approximation.
"""

import os

import numpy as np

from . import _blossom_py

try:
    from . import _blossom_ext
except ImportError:  # pragma: no cover - exercised when the build is skipped
    _blossom_ext = None

__all__ = [
    "BACKEND",
    "available_backends",
    "brute_force_matching",
    "matching_weight",
    "min_weight_perfect_matching",
]

DEFAULT_SCALE = 1e6
BRUTE_FORCE_MAX_N = 12
_DENSE_BELOW = 24
_INITIAL_K = 8


def available_backends():
    names = ["python"]
    if _blossom_ext is not None:
        names.insert(0, "ext")
    return names


def _default_backend():
    if os.environ.get("TORICBATH_PURE_PYTHON", "") not in ("", "0"):
        return "python"
    return "ext" if _blossom_ext is not None else "python"


BACKEND = _default_backend()


def _core(backend):
    name = backend or BACKEND
    if name == "ext":
        if _blossom_ext is None:
            raise RuntimeError("compiled matching core is not built")
        return _blossom_ext.max_weight_matching
    if name == "python":
        return _blossom_py.max_weight_matching
    raise ValueError(f"unknown matching backend {name!r}")


def _integer_weights(w, scale):
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("weight table must be a square matrix")
    n = w.shape[0]
    if n % 2:
        raise ValueError(f"perfect matching needs an even vertex count, got {n}")
    off = ~np.eye(n, dtype=bool)
    if not np.all(np.isfinite(w[off])):
        raise ValueError("weights must be finite")
    if np.any(w[off] < 0):
        raise ValueError("weights must be nonnegative")
    wi = np.rint(w * scale).astype(np.int64)
    wi = np.minimum(wi, wi.T)  # guard against asymmetric rounding noise
    np.fill_diagonal(wi, 0)
    return wi


def _pairs_from_mate(mate):
    return [(int(i), int(j)) for i, j in enumerate(mate) if i < j]


def _blossom_leaves(n, blossomparent):
    """Map each nontrivial blossom id to the array of its leaf vertices."""
    members = {}
    for v in range(n):
        b = blossomparent[v]
        while b != -1:
            members.setdefault(int(b), []).append(v)
            b = blossomparent[b]
    return {b: np.asarray(vs, dtype=np.intp) for b, vs in members.items()}


def _reduced_costs(profit, dual, blossomparent):
    """Reduced costs of all pairs under the blossom dual solution.

    ``profit`` is the maximisation weight.  Nonnegative entries everywhere
    (off the diagonal) certify that the matching is optimal on the full graph.
    """
    n = profit.shape[0]
    red = dual[:n, None] + dual[None, :n] - 2 * profit
    for b, leaves in _blossom_leaves(n, blossomparent).items():
        zb = dual[b]
        if zb:
            red[np.ix_(leaves, leaves)] += 2 * zb
    np.fill_diagonal(red, 0)
    return red


def _knn_edges(wi, k):
    n = wi.shape[0]
    k = min(k, n - 1)
    masked = wi.astype(float)
    np.fill_diagonal(masked, np.inf)
    nearest = np.argpartition(masked, k - 1, axis=1)[:, :k]
    mask = np.zeros((n, n), dtype=bool)
    rows = np.repeat(np.arange(n), k)
    mask[rows, nearest.ravel()] = True
    return mask | mask.T


def _solve(wi, backend, truncate_k):
    """Exact MWPM on integer weights; returns ``mate`` array."""
    n = wi.shape[0]
    core = _core(backend)
    profit = wi.max() - wi  # maximising profit == minimising weight
    if n <= _DENSE_BELOW and truncate_k is None:
        ii, jj = np.triu_indices(n, 1)
        mate, *_ = core(n, ii, jj, profit[ii, jj], True)
        return mate

    k = truncate_k if truncate_k is not None else _INITIAL_K
    mask = _knn_edges(wi, k)
    while True:
        ii, jj = np.nonzero(np.triu(mask, 1))
        mate, dual, bparent, _ = core(n, ii, jj, profit[ii, jj], True)
        if np.any(mate < 0):
            if k >= n - 1:
                raise RuntimeError("no perfect matching found on the complete graph")
            k = min(2 * k, n - 1)
            mask |= _knn_edges(wi, k)
            continue
        if truncate_k is not None:
            return mate
        red = _reduced_costs(profit, dual, bparent)
        bad = red < 0
        if not bad.any():
            return mate
        mask |= bad | bad.T


def _canonical(wi, backend, truncate_k):
    """Lexicographically smallest optimal pair set, by fixing pairs in order."""
    n = wi.shape[0]

    def optimum(vertices):
        if not len(vertices):
            return 0
        sub = wi[np.ix_(vertices, vertices)]
        mate = _solve(sub, backend, truncate_k)
        return int(sum(sub[i, mate[i]] for i in range(len(vertices)) if i < mate[i]))

    remaining = list(range(n))
    best = optimum(np.asarray(remaining))
    pairs = []
    while remaining:
        v = remaining[0]
        rest = remaining[1:]
        for u in rest:
            others = [x for x in rest if x != u]
            value = int(wi[v, u]) + optimum(np.asarray(others, dtype=np.intp))
            if value == best:
                pairs.append((v, u))
                best -= int(wi[v, u])
                remaining = others
                break
        else:  # pragma: no cover - would mean the solver is not optimal
            raise RuntimeError("canonical matching search failed")
    return pairs


def min_weight_perfect_matching(w, scale=DEFAULT_SCALE, truncate_k=None,
                                canonical=False, backend=None):
    """Minimum-weight perfect matching of a complete weighted graph.

    Parameters
    ----------
    w : (n, n) array_like
        Symmetric table of nonnegative finite weights; diagonal ignored.
        ``n`` must be even.
    scale : float
        Weights are multiplied by ``scale`` and rounded to integers; the
        returned matching is optimal for the rounded weights.
    truncate_k : int, optional
        Restrict to each vertex's ``truncate_k`` lightest edges and skip the
        optimality certificate.  Faster for large inputs but approximate.
    canonical : bool
        Among all optimal matchings return the lexicographically smallest
        sorted pair list.  Costs O(n^2) extra solves; meant for small inputs.
    backend : {"ext", "python"}, optional
        Override the core selected at import.

    Returns
    -------
    list of (int, int)
        Pairs ``(i, j)`` with ``i < j``, sorted.
    """
    wi = _integer_weights(w, scale)
    n = wi.shape[0]
    if n == 0:
        return []
    if canonical:
        return sorted(_canonical(wi, backend, truncate_k))
    return _pairs_from_mate(_solve(wi, backend, truncate_k))


def matching_weight(w, pairs):
    """Total weight of ``pairs`` under table ``w``."""
    w = np.asarray(w, dtype=float)
    return float(sum(w[i, j] for i, j in pairs))


def brute_force_matching(w, scale=DEFAULT_SCALE):
    """Exhaustive minimum-weight perfect matching (testing oracle).

    Enumerates all (n-1)!! perfect matchings in lexicographic order of their
    sorted pair lists and keeps the first minimum, so ties resolve to the
    lexicographically smallest pair set.  Uses the same integer rounding as
    :func:`min_weight_perfect_matching`.
    """
    wi = _integer_weights(w, scale)
    n = wi.shape[0]
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    best_cost = None
    best_pairs = None

    def recurse(free, cost, pairs):
        nonlocal best_cost, best_pairs
        if not free:
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_pairs = list(pairs)
            return
        v = free[0]
        for idx in range(1, len(free)):
            u = free[idx]
            pairs.append((v, u))
            recurse(free[1:idx] + free[idx + 1:], cost + int(wi[v, u]), pairs)
            pairs.pop()

    recurse(list(range(n)), 0, [])
    return best_pairs
