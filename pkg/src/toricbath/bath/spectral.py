"""Single-qubit decoherence function Lambda(t) and the flip rate p_d.

For a spectral density ``J(w) = alpha w^s w0^(1-s) exp(-w/wc)`` at inverse
temperature ``beta``::

    Lambda(t) = int_0^inf J(w) coth(beta w / 2) sin^2(w t / 2) / (w / 2)^2 dw

Three evaluation modes are offered.

``closed``
    Exact results for finite cutoff.  Expanding ``coth`` into
    ``1 + 2 sum_n exp(-n beta w)`` turns every term into an elementary
    Laplace transform.  The thermal sums then collapse onto Hurwitz zeta
    (s = 1/2), log-gamma (s = 1), digamma (s = 2) or trigamma (s = 3)
    evaluated at ``eps + i t/beta`` with ``eps = 1/(beta wc)``.
``asymptotic``
    The widely quoted large-cutoff forms for s = 1/2 and s = 1, which drop
    terms of relative order ``1/(beta wc)``.  For s = 2, 3 they coincide
    with ``closed``.
``quadrature``
    Direct numerical integration; used as an independent check.

``beta = inf`` selects zero temperature; ``omega_c = inf`` is allowed
where the integral converges (s < 1).
"""

from dataclasses import dataclass
import cmath
import math

import numpy as np

from .special import ZETA_3_2, digamma, hurwitz_zeta, loggamma, trigamma

SUPPORTED_EXPONENTS = (0.0, 0.5, 1.0, 2.0, 3.0)
MODES = ("closed", "asymptotic", "quadrature")
VALIDITY_BETA_WC = 100.0


@dataclass(frozen=True)
class SpectralParams:
    s: float
    alpha: float
    omega_0: float = 1.0
    omega_c: float = math.inf
    beta: float = math.inf

    def __post_init__(self):
        if self.s not in SUPPORTED_EXPONENTS:
            raise ValueError(f"exponent s must be one of {SUPPORTED_EXPONENTS}, got {self.s}")
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        if self.omega_0 <= 0 or self.omega_c <= 0 or self.beta <= 0:
            raise ValueError("omega_0, omega_c and beta must be positive")

    @property
    def beta_omega_c(self) -> float:
        return self.beta * self.omega_c

    def large_cutoff_ok(self) -> bool:
        """Whether ``beta * omega_c`` is large enough for the asymptotic forms."""
        return self.beta_omega_c >= VALIDITY_BETA_WC


def spectral_density(p: SpectralParams, omega):
    omega = np.asarray(omega, dtype=float)
    cut = np.exp(-omega / p.omega_c) if math.isfinite(p.omega_c) else 1.0
    return p.alpha * omega ** p.s * p.omega_0 ** (1 - p.s) * cut


# ---------------------------------------------------------------------------
# closed forms


def _closed_s0(p, t):
    if math.isfinite(p.beta):
        raise NotImplementedError("s = 0 at finite temperature needs an infrared cutoff")
    if not math.isfinite(p.omega_c):
        return p.alpha * math.pi * p.omega_0 * t
    wc = p.omega_c
    return 2 * p.alpha * p.omega_0 * (t * math.atan(wc * t) - math.log1p((wc * t) ** 2) / (2 * wc))


def _asym_s_half(p, t):
    lead = 2 * p.alpha * math.sqrt(2 * math.pi * p.omega_0 * t)
    if not math.isfinite(p.beta):
        return lead
    z = hurwitz_zeta(-0.5, 1 + 1j * t / p.beta).real
    return lead + 2 * p.alpha * math.sqrt(p.beta * p.omega_0 / math.pi) * (4 * math.pi * z + ZETA_3_2)


def _closed_s_half(p, t):
    if not math.isfinite(p.omega_c):
        return _asym_s_half(p, t)  # exact without a cutoff
    if not math.isfinite(p.beta):
        a = 1 / p.omega_c
        return 4 * p.alpha * math.sqrt(math.pi * p.omega_0) * (
            cmath.sqrt(a - 1j * t).real - math.sqrt(a))
    eps = 1 / p.beta_omega_c
    z = complex(eps, t / p.beta)
    zeta_part = hurwitz_zeta(-0.5, z).real - hurwitz_zeta(-0.5, eps).real
    root_part = cmath.sqrt(z).real - math.sqrt(eps)
    return 4 * p.alpha * math.sqrt(math.pi * p.beta * p.omega_0) * (2 * zeta_part - root_part)


def _require_cutoff(p):
    if not math.isfinite(p.omega_c):
        raise ValueError(f"s = {p.s} needs a finite cutoff omega_c")


def _asym_s1(p, t):
    _require_cutoff(p)
    lead = p.alpha * math.log1p((p.omega_c * t) ** 2)
    if not math.isfinite(p.beta) or t == 0:
        return lead
    x = math.pi * t / p.beta
    # log(sinh(x)/x), written to avoid overflow for large x
    log_sinhc = x + math.log1p(-math.exp(-2 * x)) - math.log(2 * x) if x > 1e-4 else x * x / 6
    return lead + 2 * p.alpha * log_sinhc


def _closed_s1(p, t):
    _require_cutoff(p)
    lead = p.alpha * math.log1p((p.omega_c * t) ** 2)
    if not math.isfinite(p.beta):
        return lead
    eps = 1 / p.beta_omega_c
    thermal = loggamma(1 + eps) - loggamma(complex(1 + eps, t / p.beta)).real
    return lead + 4 * p.alpha * thermal


def _closed_s2(p, t):
    _require_cutoff(p)
    wc, w0 = p.omega_c, p.omega_0
    u = (wc * t) ** 2
    vacuum = 2 * p.alpha / w0 * wc * u / (1 + u)
    if not math.isfinite(p.beta):
        return vacuum
    eps = 1 / p.beta_omega_c
    psi_diff = digamma(complex(eps, t / p.beta)).real - digamma(eps)
    return 4 * p.alpha / (p.beta * w0) * psi_diff - vacuum


def _closed_s3(p, t):
    _require_cutoff(p)
    wc, w0 = p.omega_c, p.omega_0
    u = (wc * t) ** 2
    vacuum = 2 * p.alpha / w0 ** 2 * wc ** 2 * u * (3 + u) / (1 + u) ** 2
    if not math.isfinite(p.beta):
        return vacuum
    eps = 1 / p.beta_omega_c
    tri_diff = trigamma(eps) - trigamma(complex(eps, t / p.beta)).real
    return p.alpha / w0 ** 2 * (4 / p.beta ** 2 * tri_diff) - vacuum


_CLOSED = {0.0: _closed_s0, 0.5: _closed_s_half, 1.0: _closed_s1, 2.0: _closed_s2, 3.0: _closed_s3}
_ASYMPTOTIC = {0.0: _closed_s0, 0.5: _asym_s_half, 1.0: _asym_s1, 2.0: _closed_s2, 3.0: _closed_s3}


# ---------------------------------------------------------------------------
# quadrature oracle

_GL_LO = np.polynomial.legendre.leggauss(20)
_GL_HI = np.polynomial.legendre.leggauss(30)


def _integrand(p, w, t):
    w = np.asarray(w, dtype=float)
    out = np.zeros_like(w)
    pos = w > 0
    wp = w[pos]
    kernel = (2 * np.sin(wp * t / 2) / wp) ** 2
    if math.isfinite(p.beta):
        thermal = 1 / np.tanh(p.beta * wp / 2)
    else:
        thermal = 1.0
    out[pos] = spectral_density(p, wp) * thermal * kernel
    return out


def _panel_sums(p, t, a, b, rule, first):
    """Gauss-Legendre sums over panels ``[a, b]`` (arrays).

    The panel starting at zero is integrated in ``u = sqrt(w)`` to absorb
    the ``w^(s-1)`` behaviour of the thermal integrand near zero.
    """
    x, wts = rule
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = _integrand(p, nodes, t)
    sums = (vals * wts[None, :]).sum(axis=1) * half
    if first is not None and first.any():
        ub = np.sqrt(b[first])
        uh = 0.5 * ub
        un = uh[:, None] + uh[:, None] * x[None, :]
        uvals = _integrand(p, un ** 2, t) * 2 * un
        sums[first] = (uvals * wts[None, :]).sum(axis=1) * uh
    return sums


def lambda_quadrature(p: SpectralParams, t: float, rtol: float = 1e-11, max_rounds: int = 30):
    """Adaptive composite Gauss-Legendre evaluation of the Lambda integral."""
    t = float(t)
    if t == 0:
        return 0.0
    if not math.isfinite(p.omega_c):
        raise ValueError("quadrature needs a finite cutoff omega_c")
    upper = 60.0 * p.omega_c
    width = min(2 * math.pi / t, p.omega_c / 4)
    if math.isfinite(p.beta):
        width = min(width, 4.0 / p.beta * 10)
    n = max(1, int(math.ceil(upper / width)))
    edges = np.linspace(0.0, upper, n + 1)
    a, b = edges[:-1], edges[1:]
    total = 0.0
    for _ in range(max_rounds):
        first = a == 0.0
        lo = _panel_sums(p, t, a, b, _GL_LO, first)
        hi = _panel_sums(p, t, a, b, _GL_HI, first)
        scale = abs(hi.sum()) + total
        bad = np.abs(hi - lo) > rtol * max(scale, 1e-300) / max(len(a), 1) * 0.1
        total += hi[~bad].sum()
        if not bad.any():
            return total
        mid = 0.5 * (a[bad] + b[bad])
        a = np.concatenate([a[bad], mid])
        b = np.concatenate([mid, b[bad]])
    return total + hi[bad].sum()


# ---------------------------------------------------------------------------


def spectral_lambda(p: SpectralParams, t, mode: str = "closed"):
    """Lambda(t) for scalar or array ``t``.

    ``mode`` is ``closed`` (exact, finite cutoff), ``asymptotic`` (large
    ``beta * omega_c`` forms) or ``quadrature`` (numerical oracle).
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if p.s == 0.0 and math.isfinite(p.beta):
        raise NotImplementedError("s = 0 at finite temperature needs an infrared cutoff")
    if mode == "quadrature":
        fn = lambda tt: lambda_quadrature(p, tt)  # noqa: E731
    else:
        fn = (_CLOSED if mode == "closed" else _ASYMPTOTIC)[p.s]
        fn = (lambda f: lambda tt: f(p, tt))(fn)

    def one(tt):
        tt = float(tt)
        if tt < 0:
            raise ValueError("time must be nonnegative")
        return 0.0 if tt == 0 else float(fn(tt))

    if np.ndim(t) == 0:
        return one(t)
    return np.array([one(tt) for tt in np.ravel(t)]).reshape(np.shape(t))


def p_d(lam):
    """Single-qubit flip probability ``(1 - exp(-2 Lambda)) / 2``."""
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(lam_arr < 0):
        raise ValueError("Lambda must be nonnegative")
    out = 0.5 * (-np.expm1(-2 * lam_arr))
    return float(out) if np.ndim(lam) == 0 else out


def lambda_at_rate(p: float) -> float:
    """Inverse of :func:`p_d`: the Lambda giving flip probability ``p``."""
    if not 0 <= p < 0.5:
        raise ValueError("p must lie in [0, 1/2)")
    return -0.5 * math.log1p(-2 * p)
