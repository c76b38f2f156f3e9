"""Error models on the toric-code bonds and their single-qubit rates.

Five families are supported: independent flips, ballistic strings,
diffusive strings, random subsets of lattice blocks, and nearest-neighbour
pair flips.  Every sampler takes a ``numpy.random.Generator`` and returns a
flat boolean configuration (see :mod:`toricbath.lattice` for indexing).
"""

from dataclasses import dataclass, fields, replace
import math

import numpy as np

from .lattice import H, V, CodeParams, QubitId, qubit_index


@dataclass(frozen=True)
class IID:
    p: float

    def validate(self, c=None):
        _check_prob("p", self.p)


@dataclass(frozen=True)
class Ballistic:
    """Straight error strings: ``f`` events per qubit, mean length ``l``."""

    f: float
    l: float

    def validate(self, c=None):
        _check_nonneg("f", self.f)
        _check_nonneg("l", self.l)


@dataclass(frozen=True)
class Diffusive:
    """Random-walk error strings: ``f`` events per qubit, mean ``l`` steps."""

    f: float
    l: float

    def validate(self, c=None):
        _check_nonneg("f", self.f)
        _check_nonneg("l", self.l)


@dataclass(frozen=True)
class Cluster:
    """Each ``m x m`` block fires with probability ``f`` and flips ``l`` of its qubits."""

    m: int
    l: int
    f: float

    def validate(self, c=None):
        if self.m < 1:
            raise ValueError("cluster edge m must be >= 1")
        if not 1 <= self.l <= self.m * self.m:
            raise ValueError(f"cluster needs 1 <= l <= m^2, got l={self.l}, m={self.m}")
        _check_prob("f", self.f)
        if c is not None and self.m > c.L:
            raise ValueError(f"cluster edge m={self.m} exceeds lattice size L={c.L}")


@dataclass(frozen=True)
class PairCorrelated:
    """Single flips with ``p1`` plus pair flips with ``p2`` on each neighbour pair."""

    p1: float
    p2: float
    separation: int = 0

    def validate(self, c=None):
        _check_prob("p1", self.p1)
        _check_prob("p2", self.p2)
        if self.separation < 0 or int(self.separation) != self.separation:
            raise ValueError("separation must be a nonnegative integer")
        if c is not None and self.separation and self.separation % c.L == 0:
            raise ValueError("separation must not be a multiple of L")


MODEL_TYPES = {
    "iid": IID,
    "ballistic": Ballistic,
    "diffusive": Diffusive,
    "cluster": Cluster,
    "pair": PairCorrelated,
}


def _check_prob(name, value):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be a probability, got {value}")


def _check_nonneg(name, value):
    if value < 0:
        raise ValueError(f"{name} must be nonnegative, got {value}")


def model_name(model) -> str:
    for key, cls in MODEL_TYPES.items():
        if isinstance(model, cls):
            return key
    raise TypeError(f"not a noise model: {model!r}")


def parse_model(text: str):
    """Parse ``"family:key=value,..."``, e.g. ``"cluster:m=2,l=4,f=0.05"``."""
    family, _, rest = text.strip().partition(":")
    family = family.strip().lower()
    if family not in MODEL_TYPES:
        raise ValueError(f"unknown model family {family!r}; choose from {sorted(MODEL_TYPES)}")
    cls = MODEL_TYPES[family]
    types = {f.name: f.type for f in fields(cls)}
    kwargs = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        key = key.strip()
        if not eq or key not in types:
            raise ValueError(f"bad parameter {item!r} for {family}")
        kwargs[key] = int(value) if types[key] in (int, "int") else float(value)
    try:
        model = cls(**kwargs)
    except TypeError as exc:
        raise ValueError(f"incomplete parameters for {family}: {exc}") from None
    model.validate()
    return model


def format_model(model) -> str:
    parts = ",".join(f"{f.name}={getattr(model, f.name)}" for f in fields(model))
    return f"{model_name(model)}:{parts}"


def with_param(model, axis: str, value):
    """Copy of ``model`` with field ``axis`` set to ``value``."""
    names = [f.name for f in fields(model)]
    if axis not in names:
        raise ValueError(f"{model_name(model)} has no parameter {axis!r}")
    current = getattr(model, axis)
    return replace(model, **{axis: type(current)(value)})


# ---------------------------------------------------------------------------
# neighbour pairs


def neighbor_pair_indices(c: CodeParams, separation: int = 0) -> np.ndarray:
    """``(4 L^2, 2)`` flat-index pairs on which pair errors act.

    With ``separation == 0`` these are the perpendicular bonds meeting at a
    site (four per site).  For ``separation = d > 0`` each bond is paired
    with the same-orientation bonds displaced by ``(d, 0)`` and ``(0, d)``.
    Either way every qubit belongs to exactly four pairs.
    """
    L = c.L
    x, y = np.meshgrid(np.arange(L), np.arange(L), indexing="ij")
    x = x.ravel()
    y = y.ravel()
    if separation == 0:
        h_here = qubit_index(H, x, y, L)  # bond leaving the site to the right
        h_left = qubit_index(H, x - 1, y, L)
        v_here = qubit_index(V, x, y, L)  # bond leaving the site upwards
        v_down = qubit_index(V, x, y - 1, L)
        blocks = [(h_here, v_here), (h_here, v_down), (h_left, v_here), (h_left, v_down)]
    else:
        d = separation
        blocks = []
        for o in (H, V):
            here = qubit_index(o, x, y, L)
            blocks.append((here, qubit_index(o, x + d, y, L)))
            blocks.append((here, qubit_index(o, x, y + d, L)))
    first = np.concatenate([b[0] for b in blocks])
    second = np.concatenate([b[1] for b in blocks])
    return np.stack([first, second], axis=1).astype(np.int64)


def neighbor_pairs(c: CodeParams, separation: int = 0):
    """All pair-error supports as ``(QubitId, QubitId)`` tuples."""
    L = c.L
    out = []
    for i, j in neighbor_pair_indices(c, separation):
        qi = QubitId(*_unflatten(i, L))
        qj = QubitId(*_unflatten(j, L))
        out.append((qi, qj))
    return out


def _unflatten(idx, L):
    o, rest = divmod(int(idx), L * L)
    x, y = divmod(rest, L)
    return o, x, y


# ---------------------------------------------------------------------------
# samplers


def _parity_config(indices, n):
    counts = np.bincount(np.asarray(indices, dtype=np.int64), minlength=n)
    return (counts & 1).astype(bool)


def _segment_offsets(lengths):
    """For concatenated segments, position of each element inside its segment."""
    lengths = np.asarray(lengths, dtype=np.int64)
    total = int(lengths.sum())
    starts = np.cumsum(lengths) - lengths
    return np.arange(total) - np.repeat(starts, lengths)


def _sample_iid(model, c, rng):
    return rng.random(c.n_qubits) < model.p


def _sample_ballistic(model, c, rng):
    L = c.L
    n_events = rng.poisson(2.0 * model.f * L * L)
    sx = rng.integers(0, L, size=n_events)
    sy = rng.integers(0, L, size=n_events)
    phi = rng.uniform(0.0, 2.0 * np.pi, size=n_events)
    cos, sin = np.cos(phi), np.sin(phi)
    lh = rng.poisson(model.l * np.abs(cos))
    lv = rng.poisson(model.l * np.abs(sin))
    step_x = np.where(cos >= 0, 1, -1)
    step_y = np.where(sin >= 0, 1, -1)

    # horizontal leg: k-th bond sits at x0 + k (right) or x0 - 1 - k (left)
    kh = _segment_offsets(lh)
    ex = np.repeat(step_x, lh)
    hx = np.repeat(sx, lh) + np.where(ex > 0, kh, -1 - kh)
    h_idx = qubit_index(H, hx, np.repeat(sy, lh), L)

    # vertical leg starts where the horizontal leg ended
    turn_x = sx + step_x * lh
    kv = _segment_offsets(lv)
    ey = np.repeat(step_y, lv)
    vy = np.repeat(sy, lv) + np.where(ey > 0, kv, -1 - kv)
    v_idx = qubit_index(V, np.repeat(turn_x, lv), vy, L)
    return _parity_config(np.concatenate([h_idx, v_idx]), c.n_qubits)


_WALK_DIRS = np.array([[1, 0], [-1, 0], [0, 1], [0, -1]], dtype=np.int64)


def _sample_diffusive(model, c, rng):
    L = c.L
    n_events = rng.poisson(2.0 * model.f * L * L)
    sx = rng.integers(0, L, size=n_events)
    sy = rng.integers(0, L, size=n_events)
    steps = rng.poisson(model.l, size=n_events)
    total = int(steps.sum())
    dirs = rng.integers(0, 4, size=total)
    move = _WALK_DIRS[dirs]
    # position before each step = start + sum of earlier steps in the same walk
    cum = np.cumsum(move, axis=0) - move
    seg_start = np.cumsum(steps) - steps
    base = cum[np.repeat(seg_start, steps)]
    px = np.repeat(sx, steps) + cum[:, 0] - base[:, 0]
    py = np.repeat(sy, steps) + cum[:, 1] - base[:, 1]
    # +x uses H(x,y), -x uses H(x-1,y), +y uses V(x,y), -y uses V(x,y-1)
    horiz = dirs < 2
    bx = np.where(dirs == 1, px - 1, px)
    by = np.where(dirs == 3, py - 1, py)
    idx = np.where(horiz, qubit_index(H, bx, by, L), qubit_index(V, bx, by, L))
    return _parity_config(idx, c.n_qubits)


def cluster_blocks(m: int, c: CodeParams) -> np.ndarray:
    """``(2 L^2, m^2)`` flat indices of every cluster block.

    Bonds are placed on a doubled grid, ``H(x, y) -> (2x+1, 2y)`` and
    ``V(x, y) -> (2x, 2y+1)``; on that grid the qubits form a square lattice
    rotated by 45 degrees.  A block is the ``m x m`` square of that rotated
    lattice whose corner is the anchor qubit, i.e. the anchor shifted by
    ``a (1, 1) + b (-1, 1)`` for ``0 <= a, b < m``.  Every qubit anchors one
    block.  For ``m = 2`` the blocks anchored on H bonds are face boundaries
    and those anchored on V bonds are the four bonds around a site.
    """
    L = c.L
    if m > L:
        raise ValueError(f"cluster edge m={m} exceeds lattice size L={L}")
    anchors = np.arange(c.n_qubits)
    o, rest = np.divmod(anchors, L * L)
    ax, ay = np.divmod(rest, L)
    gx = np.where(o == H, 2 * ax + 1, 2 * ax)
    gy = np.where(o == H, 2 * ay, 2 * ay + 1)
    a, b = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    ox = (a - b).ravel()
    oy = (a + b).ravel()
    X = np.mod(gx[:, None] + ox[None, :], 2 * L)
    Y = np.mod(gy[:, None] + oy[None, :], 2 * L)
    is_h = (X % 2) == 1
    qx = np.where(is_h, (X - 1) // 2, X // 2)
    qy = np.where(is_h, Y // 2, (Y - 1) // 2)
    return qubit_index(np.where(is_h, H, V), qx, qy, L).astype(np.int64)


_BLOCK_CACHE = {}


def _blocks(m, c):
    key = (m, c.L)
    if key not in _BLOCK_CACHE:
        _BLOCK_CACHE[key] = cluster_blocks(m, c)
    return _BLOCK_CACHE[key]


def _sample_cluster(model, c, rng):
    blocks = _blocks(model.m, c)
    fire = np.flatnonzero(rng.random(blocks.shape[0]) < model.f)
    msq = model.m * model.m
    if model.l == msq:
        chosen = blocks[fire]
    else:
        order = np.argsort(rng.random((fire.size, msq)), axis=1)[:, : model.l]
        chosen = np.take_along_axis(blocks[fire], order, axis=1)
    return _parity_config(chosen.ravel(), c.n_qubits)


_PAIR_CACHE = {}


def _pairs(c, separation):
    key = (c.L, separation)
    if key not in _PAIR_CACHE:
        _PAIR_CACHE[key] = neighbor_pair_indices(c, separation)
    return _PAIR_CACHE[key]


def _sample_pair(model, c, rng):
    single = rng.random(c.n_qubits) < model.p1
    pairs = _pairs(c, model.separation)
    hit = pairs[rng.random(pairs.shape[0]) < model.p2]
    return single ^ _parity_config(hit.ravel(), c.n_qubits)


_SAMPLERS = {
    IID: _sample_iid,
    Ballistic: _sample_ballistic,
    Diffusive: _sample_diffusive,
    Cluster: _sample_cluster,
    PairCorrelated: _sample_pair,
}


def sample(model, c: CodeParams, rng) -> np.ndarray:
    """Draw one error configuration from ``model`` on lattice ``c``."""
    model.validate(c)
    return _SAMPLERS[type(model)](model, c, rng)


# ---------------------------------------------------------------------------
# single-qubit error rates


@dataclass(frozen=True)
class RateEstimate:
    p_hat: float
    stderr: float
    samples: int


def pair_model_rate(p1: float, p2: float) -> float:
    """Flip probability of one qubit under independent single and pair errors.

    A qubit is hit by its own single error and by four pair events; it ends
    flipped when an odd number of them fire.
    """
    return 0.5 - 0.5 * (1.0 - 2.0 * p1) * (1.0 - 2.0 * p2) ** 4


def cluster_rate(m: int, l: int, f: float) -> float:
    """Flip probability under the cluster model.

    Every qubit lies in ``m^2`` blocks, and each of them flips it
    independently with probability ``f l / m^2``.
    """
    hit = f * l / (m * m)
    return 0.5 - 0.5 * (1.0 - 2.0 * hit) ** (m * m)


def single_qubit_rate(model) -> float:
    """Analytic flip rate for the models where it is closed form."""
    if isinstance(model, IID):
        return float(model.p)
    if isinstance(model, PairCorrelated):
        return pair_model_rate(model.p1, model.p2)
    if isinstance(model, Cluster):
        return cluster_rate(model.m, model.l, model.f)
    raise NotImplementedError(
        f"no closed-form rate for {model_name(model)}; use estimate_px")


def ballistic_small_density_rate(f: float, l: float) -> float:
    """Low-density flip rate of the ballistic model, ``(4/pi) l f``."""
    return 4.0 / math.pi * l * f


def estimate_px(model, c: CodeParams, trials: int, rng) -> RateEstimate:
    """Empirical fraction of flipped qubits over ``trials`` samples.

    ``samples`` counts qubit observations (``trials * 2 L^2``) and the
    standard error is the binomial one for that count.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    flipped = 0
    for _ in range(trials):
        flipped += int(sample(model, c, rng).sum())
    n = trials * c.n_qubits
    p_hat = flipped / n
    return RateEstimate(p_hat, math.sqrt(p_hat * (1.0 - p_hat) / n), n)
