"""Torus geometry for the bit-flip toric code.

Qubits live on the bonds of an L x L periodic square lattice and anyons on
its sites.  A horizontal bond ``H(x, y)`` joins sites ``(x, y)`` and
``(x+1, y)``; a vertical bond ``V(x, y)`` joins ``(x, y)`` and ``(x, y+1)``
(all coordinates mod L).

An error configuration is a flat boolean vector of length ``2 L^2``.  The
flat index of bond ``(orientation, x, y)`` is ``orientation * L^2 + x * L + y``
with ``orientation`` 0 for H and 1 for V, so ``config.reshape(2, L, L)``
gives ``[orientation, x, y]`` views.
"""

from dataclasses import dataclass

import numpy as np

H = 0
V = 1
_ORIENT_NAMES = {H: "H", V: "V"}


@dataclass(frozen=True)
class CodeParams:
    """Linear size of the torus (lattice constant 1)."""

    L: int

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 2:
            raise ValueError(f"L must be an integer >= 2, got {self.L!r}")

    @property
    def n_qubits(self) -> int:
        return 2 * self.L * self.L

    @property
    def n_sites(self) -> int:
        return self.L * self.L

    @property
    def n_stabilizers(self) -> int:
        # one independent check per site of the relevant anyon type
        return self.L * self.L


@dataclass(frozen=True, order=True)
class QubitId:
    orientation: int  # H or V
    x: int
    y: int

    def index(self, L: int) -> int:
        return qubit_index(self.orientation, self.x, self.y, L)

    def __str__(self):
        return f"{_ORIENT_NAMES[self.orientation]}({self.x},{self.y})"


def qubit_index(orientation, x, y, L):
    """Flat index of a bond; works elementwise on arrays."""
    return orientation * L * L + np.mod(x, L) * L + np.mod(y, L)


def qubit_from_index(idx: int, L: int) -> QubitId:
    o, rest = divmod(int(idx), L * L)
    x, y = divmod(rest, L)
    return QubitId(o, x, y)


def bond_sites(q: QubitId, L: int):
    """The two sites joined by bond ``q``."""
    if q.orientation == H:
        return (q.x, q.y), ((q.x + 1) % L, q.y)
    return (q.x, q.y), (q.x, (q.y + 1) % L)


def empty_config(c: CodeParams) -> np.ndarray:
    return np.zeros(c.n_qubits, dtype=bool)


def config_from_qubits(qubits, c: CodeParams) -> np.ndarray:
    """Configuration with the given bonds flipped (repeats cancel)."""
    e = empty_config(c)
    for q in qubits:
        e[q.index(c.L)] ^= True
    return e


def flipped_qubits(e, c: CodeParams):
    return [qubit_from_index(i, c.L) for i in np.flatnonzero(e)]


def _check_size(e, c):
    e = np.asarray(e)
    if e.shape != (c.n_qubits,):
        raise ValueError(f"config has shape {e.shape}, expected ({c.n_qubits},) for L={c.L}")
    return e.astype(bool, copy=False)


def syndrome_grid(e, c: CodeParams) -> np.ndarray:
    """Boolean L x L array marking anyon sites ``[x, y]``."""
    e = _check_size(e, c)
    hb, vb = e.reshape(2, c.L, c.L)
    return hb ^ np.roll(hb, 1, axis=0) ^ vb ^ np.roll(vb, 1, axis=1)


def syndrome_of(e, c: CodeParams) -> np.ndarray:
    """Anyon sites of configuration ``e`` as an ``(k, 2)`` int array.

    Rows are ``(x, y)`` sorted by ``x * L + y``; ``k`` is always even.
    """
    return np.argwhere(syndrome_grid(e, c)).astype(np.int64)


def syndrome_set(e, c: CodeParams):
    return {(int(x), int(y)) for x, y in syndrome_of(e, c)}


def torus_displacement(a, b, c: CodeParams):
    """Minimal-image displacement from site ``a`` to site ``b``.

    Each component lies in ``(-L/2, L/2]``; an exact half-way tie resolves
    to ``+L/2``.  Works elementwise when ``a`` and ``b`` are arrays of sites.
    """
    L = c.L
    d = np.mod(np.asarray(b) - np.asarray(a), L)
    d = np.where(2 * d > L, d - L, d)
    if d.ndim == 1:
        return int(d[0]), int(d[1])
    return d


def manhattan_distance(a, b, c: CodeParams) -> int:
    dx, dy = torus_displacement(a, b, c)
    return abs(dx) + abs(dy)


def path_bonds(a, dx: int, dy: int, L: int) -> np.ndarray:
    """Flat indices of the staircase from ``a`` moving ``dx`` then ``dy``.

    ``|dx|`` horizontal bonds are laid from ``a`` first, then ``|dy|``
    vertical bonds from the turning point.  Bonds may repeat when a leg is
    longer than L; callers that build configurations toggle by parity.
    """
    x0, y0 = int(a[0]), int(a[1])
    if dx >= 0:
        xs = x0 + np.arange(dx)
    else:
        xs = x0 - 1 - np.arange(-dx)
    x1 = x0 + dx
    if dy >= 0:
        ys = y0 + np.arange(dy)
    else:
        ys = y0 - 1 - np.arange(-dy)
    h_idx = qubit_index(H, xs, y0, L)
    v_idx = qubit_index(V, x1, ys, L)
    return np.concatenate([h_idx, v_idx]).astype(np.int64)


def toggle(e: np.ndarray, indices) -> np.ndarray:
    """Flip ``e`` in place at ``indices`` (each repeat flips again)."""
    counts = np.bincount(np.asarray(indices, dtype=np.int64), minlength=e.size)
    e ^= (counts & 1).astype(bool)
    return e


def canonical_path(a, b, c: CodeParams) -> np.ndarray:
    """Shortest horizontal-first correction chain joining sites ``a`` and ``b``."""
    dx, dy = torus_displacement(a, b, c)
    e = empty_config(c)
    return toggle(e, path_bonds(a, dx, dy, c.L))


def crossing_parity(e, c: CodeParams):
    """Parities of bonds crossing the two fixed cuts (any configuration)."""
    e = _check_size(e, c)
    hb, vb = e.reshape(2, c.L, c.L)
    return int(hb[0, :].sum() & 1), int(vb[:, 0].sum() & 1)


def winding_class(e, c: CodeParams):
    """Homology class ``(wx, wy)`` of a cycle configuration.

    ``wx`` is the parity of H bonds at ``x = 0`` (crossings of a vertical
    cut) and ``wy`` the parity of V bonds at ``y = 0``.
    """
    if syndrome_grid(e, c).any():
        raise ValueError("winding class is defined only for configurations with empty syndrome")
    return crossing_parity(e, c)


def count_multiples(lo, hi, L):
    """Number of integers in ``[lo, hi)`` divisible by ``L`` (elementwise)."""
    return np.floor_divide(hi - 1, L) - np.floor_divide(lo - 1, L)


def staircase_crossings(a, dx, dy, L):
    """Cut-crossing parities of ``path_bonds(a, dx, dy)`` without building it.

    Accepts arrays of start sites ``a`` (shape ``(k, 2)``) and displacements.
    Returns the XOR over all paths, as ``(wx, wy)``.
    """
    a = np.asarray(a, dtype=np.int64).reshape(-1, 2)
    dx = np.asarray(dx, dtype=np.int64)
    dy = np.asarray(dy, dtype=np.int64)
    x0, y0 = a[:, 0], a[:, 1]
    lo_x = np.where(dx >= 0, x0, x0 + dx)
    hi_x = np.where(dx >= 0, x0 + dx, x0)
    lo_y = np.where(dy >= 0, y0, y0 + dy)
    hi_y = np.where(dy >= 0, y0 + dy, y0)
    wx = int(count_multiples(lo_x, hi_x, L).sum() & 1)
    wy = int(count_multiples(lo_y, hi_y, L).sum() & 1)
    return wx, wy


def plaquette(x: int, y: int, c: CodeParams) -> np.ndarray:
    """The four-bond boundary of the face with lower-left corner ``(x, y)``."""
    L = c.L
    idx = [
        qubit_index(H, x, y, L),
        qubit_index(H, x, y + 1, L),
        qubit_index(V, x, y, L),
        qubit_index(V, x + 1, y, L),
    ]
    return toggle(empty_config(c), idx)


def to_hex(e, c: CodeParams) -> str:
    """Hex string of the packed bit vector (little bit order per byte)."""
    e = _check_size(e, c)
    return np.packbits(e, bitorder="little").tobytes().hex()


def from_hex(text: str, c: CodeParams) -> np.ndarray:
    raw = np.frombuffer(bytes.fromhex(text), dtype=np.uint8)
    bits = np.unpackbits(raw, bitorder="little")
    if bits.size < c.n_qubits or bits[c.n_qubits:].any():
        raise ValueError("hex string does not match the lattice size")
    return bits[: c.n_qubits].astype(bool)
