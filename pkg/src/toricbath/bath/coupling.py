"""Bath-mediated qubit-qubit couplings J_ij(t) and the Ohmic correlator C_ij(t).

Kinds are ``(dim, r)`` tuples with ``dim`` in {2, 3} and ``r`` in
{-1/2, 0, 1/2} for a linear dispersion ``w = v|k|``, or the string
``"ferromagnet"`` for magnons with ``w = D k^2`` in three dimensions.

Three kinds diverge on the light cone ``vt = R``: (2, 1/2), (3, 0) and
(3, 1/2).  Evaluating them within a relative distance ``LIGHT_CONE_SHELL``
of it raises :class:`LightConeSingularity`.
"""

from dataclasses import dataclass
import math

from .special import fresnel_normalised

LIGHT_CONE_SHELL = 1e-6
LINEAR_KINDS = ((2, -0.5), (2, 0.0), (2, 0.5), (3, -0.5), (3, 0.0), (3, 0.5))
SINGULAR_KINDS = ((2, 0.5), (3, 0.0), (3, 0.5))


class LightConeSingularity(ValueError):
    """Raised when a coupling is evaluated on its divergent light-cone shell."""


@dataclass(frozen=True)
class CouplingParams:
    """Coupling strength and bath dispersion.

    ``v`` is the mode velocity of a linear bath; ``omega_c`` the cutoff,
    which only the (3D, r = 1/2) kind needs; ``diffusion`` the magnon
    stiffness ``D`` of the ferromagnet.
    """

    lam: float
    v: float = 1.0
    omega_c: float = math.inf
    diffusion: float = 1.0

    def __post_init__(self):
        if self.lam <= 0 or self.v <= 0 or self.omega_c <= 0 or self.diffusion <= 0:
            raise ValueError("lam, v, omega_c and diffusion must be positive")


def parse_kind(kind):
    """Normalise ``"2d:0"``, ``"3d:-0.5"``, ``(2, 0)`` or ``"ferromagnet"``."""
    if isinstance(kind, str):
        text = kind.strip().lower()
        if text in ("ferromagnet", "magnon"):
            return "ferromagnet"
        dim_text, _, r_text = text.partition(":")
        kind = (int(dim_text.rstrip("d")), float(r_text))
    dim, r = int(kind[0]), float(kind[1])
    if (dim, r) not in LINEAR_KINDS:
        raise ValueError(f"unsupported coupling kind {(dim, r)}; choose from {LINEAR_KINDS} or 'ferromagnet'")
    return dim, r


def _check_shell(kind, R, vt):
    if kind in SINGULAR_KINDS and abs(vt - R) < LIGHT_CONE_SHELL * R:
        raise LightConeSingularity(
            f"coupling {kind} diverges at vt = R; |vt - R| = {abs(vt - R):.3g} < {LIGHT_CONE_SHELL:g} R")


def _linear(kind, prm, R, t):
    lam, v = prm.lam, prm.v
    vt = v * t
    _check_shell(kind, R, vt)
    inside = vt > R
    if kind == (2, -0.5):
        if not inside:
            return 0.0
        root = math.sqrt(vt * vt - R * R)
        return lam ** 2 / (2 * math.pi ** 2 * v ** 2) * (root - vt * math.log((vt + root) / R))
    if kind == (2, 0.0):
        angle = math.pi / 2 if vt >= R else math.asin(vt / R)
        return lam ** 2 / (2 * math.pi ** 2 * v ** 2) * angle
    if kind == (2, 0.5):
        if not inside:
            return 0.0
        return lam ** 2 / (2 * math.pi ** 2 * v ** 2) / math.sqrt(vt * vt - R * R)
    if kind == (3, -0.5):
        if not inside:
            return 0.0
        return -lam ** 2 / (2 * math.pi * R * v ** 2) * (vt - R)
    if kind == (3, 0.0):
        return lam ** 2 / (2 * math.pi ** 2 * R * v ** 2) * (
            math.log(abs((R + vt) / (R - vt))) - 2 * vt / R)
    # (3, 0.5)
    if not math.isfinite(prm.omega_c):
        raise ValueError("the (3D, r = 1/2) coupling needs a finite cutoff omega_c")
    gap = R * R - vt * vt
    return (2 * lam ** 2 / (math.pi ** 2 * R ** 4 * v * prm.omega_c)
            * (2 * R * R - vt * vt) / gap ** 2 * vt ** 3)


def _ferromagnet(prm, R, t):
    lam, D = prm.lam, prm.diffusion
    dt = D * t
    x = R / math.sqrt(2 * math.pi * dt)
    # The Fresnel pair here is the one with kernels cos(pi u^2/2), sin(pi u^2/2).
    c, s = fresnel_normalised(x)
    phase = R * R / (4 * dt)
    bracket = (-2 * math.pi * dt
               - math.pi * (R * R - 2 * dt) * float(c)
               + math.pi * (R * R + 2 * dt) * float(s)
               + math.sqrt(2 * math.pi * dt) * R * (math.cos(phase) + math.sin(phase)))
    return lam ** 2 / (4 * math.pi ** 2 * D ** 2 * R) * bracket


def induced_coupling(kind, params: CouplingParams, R: float, t: float) -> float:
    """Coherent coupling ``J_ij(t)`` between two qubits a distance ``R`` apart."""
    if R <= 0:
        raise ValueError("distance R must be positive")
    if t < 0:
        raise ValueError("time must be nonnegative")
    kind = parse_kind(kind)
    if t == 0:
        return 0.0
    if kind == "ferromagnet":
        return _ferromagnet(params, R, t)
    return _linear(kind, params, R, t)


def ohmic2d_correlator(lam: float, v: float, R: float, t: float) -> float:
    """Zero-temperature correlator ``C_ij(t)`` of the two-dimensional Ohmic bath."""
    if R <= 0:
        raise ValueError("distance R must be positive")
    vt = v * t
    if vt <= R:
        return 0.0
    return -lam ** 2 / (math.pi * v ** 2) * math.acosh(vt / R)
