"""Error budget of a code coupled to a two-dimensional Ohmic bath.

The single-qubit error rate splits into three contributions:

* ``A(t)``, direct decoherence of each qubit;
* ``B(t)``, flips mediated by partners outside the light cone;
* ``C(t)``, flips mediated by partners inside the light cone, ``R < vt``.

From these follow the longest error-correction periods ``tau_d``,
``tau_sub`` and ``tau_super`` at which each contribution alone reaches a
critical rate, and the code-size regime deciding which of them can bind.
"""

from dataclasses import dataclass
import math

from .spectral import SpectralParams
from .special import binary_entropy, lambert_w_m1

P_CRITICAL = 0.109


@dataclass(frozen=True)
class BathParams:
    """Physical bath description in units with hbar = k_B = lattice spacing = 1."""

    lam: float
    v: float = 1.0
    T: float = 0.0
    omega_c: float = 30.0
    omega_0: float = 1.0
    dim: int = 2
    r: float = 0.0

    def __post_init__(self):
        if self.lam <= 0 or self.v <= 0 or self.omega_c <= 0 or self.omega_0 <= 0:
            raise ValueError("lam, v, omega_c and omega_0 must be positive")
        if self.T < 0:
            raise ValueError("temperature must be nonnegative")
        if self.dim not in (2, 3) or self.r not in (-0.5, 0.0, 0.5):
            raise ValueError("dim must be 2 or 3 and r one of -1/2, 0, 1/2")

    @property
    def beta(self) -> float:
        return math.inf if self.T == 0 else 1.0 / self.T

    @property
    def s(self) -> float:
        return self.dim + 2 * self.r - 1

    @property
    def alpha(self) -> float:
        """Dimensionless strength; only defined here for the 2D Ohmic bath."""
        self.require_ohmic_2d()
        return self.lam ** 2 / (2 * math.pi * self.v ** 2)

    def require_ohmic_2d(self):
        if (self.dim, self.r) != (2, 0.0):
            raise NotImplementedError("only the 2D Ohmic bath (dim=2, r=0) is supported here")

    def spectral(self) -> SpectralParams:
        return SpectralParams(s=self.s, alpha=self.alpha, omega_0=self.omega_0,
                              omega_c=self.omega_c, beta=self.beta)


@dataclass(frozen=True)
class ErrorBudget:
    t: float
    A: float
    B: float
    C: float
    m: float
    direct_valid: bool = True

    @property
    def p_x(self) -> float:
        return self.A + self.B + self.C


def _log_sinh(x):
    if x > 20:
        return x - math.log(2) + math.log1p(-math.exp(-2 * x))
    return math.log(math.sinh(x))


def direct_term(t: float, bath: BathParams) -> float:
    """``A(t)``, valid for ``t >> 1/omega_c`` and ``beta omega_c >> 1``; clipped at zero."""
    bath.require_ohmic_2d()
    if t <= 0:
        return 0.0
    if math.isfinite(bath.beta):
        x = math.pi * t / bath.beta
        log_base = math.log(bath.beta * bath.omega_c / math.pi) + _log_sinh(x)
    else:
        log_base = math.log(bath.omega_c * t)
    exponent = -2 * bath.lam ** 2 / (math.pi * bath.v ** 2)
    return max(0.0, -0.5 * math.expm1(exponent * log_base))


def light_cone_radius(t: float, L: float, bath: BathParams) -> float:
    return min(L / 2, bath.v * t)


def superluminal_term(t: float, L: float, bath: BathParams) -> float:
    """``B(t)``: partners outside the light cone."""
    m = light_cone_radius(t, L, bath)
    if t <= 0 or m >= L / 2:
        return 0.0
    return bath.lam ** 4 * t ** 2 / (2 * math.pi ** 3 * bath.v ** 2) * math.log(L / (2 * m))


def subluminal_term(t: float, L: float, bath: BathParams) -> float:
    """``C(t)``: partners inside the light cone."""
    m = light_cone_radius(t, L, bath)
    return bath.lam ** 4 / (16 * math.pi * bath.v ** 4) * m * m


def error_budget(t: float, L: float, bath: BathParams) -> ErrorBudget:
    """All three contributions at time ``t`` for linear code size ``L``."""
    bath.require_ohmic_2d()
    if t < 0:
        raise ValueError("time must be nonnegative")
    return ErrorBudget(
        t=float(t),
        A=direct_term(t, bath),
        B=superluminal_term(t, L, bath),
        C=subluminal_term(t, L, bath),
        m=light_cone_radius(t, L, bath),
        direct_valid=t >= 1 / bath.omega_c,
    )


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QECTimes:
    tau_d: float
    tau_sub: float = None
    tau_super: float = None
    regime: str = "direct"

    @property
    def tau(self) -> float:
        """The binding time allowed by the regime."""
        if self.regime == "direct-or-sub":
            return min(self.tau_d, self.tau_sub)
        if self.regime == "direct-or-super":
            return min(self.tau_d, self.tau_super)
        return self.tau_d


def sub_cutoff(p_tilde_c: float = P_CRITICAL) -> float:
    """Code size, in units of ``v^2/lambda^2``, above which ``C`` can reach ``p_tilde_c``."""
    return 8 * math.sqrt(math.pi * p_tilde_c)


def super_cutoff(p_tilde_c: float = P_CRITICAL) -> float:
    """Code size, in units of ``v^2/lambda^2``, above which ``B`` reaches ``p_tilde_c`` first."""
    return 8 * math.exp(math.pi ** 2 / 8) * math.sqrt(math.pi * p_tilde_c)


def log_rate_constant(p_tilde_c: float = P_CRITICAL) -> float:
    """``(pi/2) log(1/(1 - 2 p))``; sets ``tau_d ~ exp(c v^2/lambda^2)/omega_c`` when cold."""
    return 0.5 * math.pi * -math.log1p(-2 * p_tilde_c)


def tau_direct(bath: BathParams, p_tilde_c: float = P_CRITICAL) -> float:
    """Time at which ``A`` equals ``p_tilde_c``."""
    alpha = bath.alpha
    log_growth = -math.log1p(-2 * p_tilde_c) / (4 * alpha)
    if not math.isfinite(bath.beta):
        if log_growth > 700:
            return math.inf  # beyond float range: the direct term never binds
        return math.exp(log_growth) / bath.omega_c
    beta = bath.beta
    log_arg = math.log(math.pi / (beta * bath.omega_c)) + log_growth
    if log_arg > 300:
        # arcsinh(y) = log(2y) + O(1/y^2) for huge y
        return beta / math.pi * (log_arg + math.log(2))
    return beta / math.pi * math.asinh(math.exp(log_arg))


def tau_subluminal(bath: BathParams, p_tilde_c: float = P_CRITICAL) -> float:
    return 4 * math.sqrt(math.pi * p_tilde_c) * bath.v / bath.lam ** 2


def tau_superluminal(L: float, bath: BathParams, p_tilde_c: float = P_CRITICAL) -> float:
    z = -16 * math.pi ** 3 * p_tilde_c * bath.v ** 4 / (bath.lam ** 4 * L ** 2)
    w = lambert_w_m1(z)
    return 2 * math.pi * math.sqrt(math.pi * p_tilde_c) * bath.v / bath.lam ** 2 / math.sqrt(abs(w))


def qec_times(L: float, bath: BathParams, p_tilde_c: float = P_CRITICAL) -> QECTimes:
    """Maximal error-correction periods and the regime for code size ``L``."""
    bath.require_ohmic_2d()
    if not 0 < p_tilde_c < 0.5:
        raise ValueError("p_tilde_c must lie in (0, 1/2)")
    unit = bath.v ** 2 / bath.lam ** 2
    tau_d = tau_direct(bath, p_tilde_c)
    tau_sub = tau_super = None
    regime = "direct"
    if L > sub_cutoff(p_tilde_c) * unit:
        tau_sub = tau_subluminal(bath, p_tilde_c)
        regime = "direct-or-sub"
    if L > super_cutoff(p_tilde_c) * unit:
        tau_super = tau_superluminal(L, bath, p_tilde_c)
        regime = "direct-or-super"
    return QECTimes(tau_d, tau_sub, tau_super, regime)


def entropic_boundary(p1: float, tol: float = 1e-10) -> float:
    """The ``p2 < 1/2`` solving ``2 h(p1) + 4 h(p2) = 1``."""
    target = 1 - 2 * binary_entropy(p1)
    if target <= 0:
        raise ValueError(f"2 h(p1) >= 1 at p1 = {p1}: no admissible p2")
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if 4 * binary_entropy(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
