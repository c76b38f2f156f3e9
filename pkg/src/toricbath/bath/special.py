"""Special functions used by the bath formulas.

Digamma, trigamma and log-gamma accept complex arguments.  They shift the
argument upward with the recurrence until its real part is at least
``_SHIFT_TO`` and then sum the Stirling-type asymptotic series.  The Hurwitz
zeta function uses Euler-Maclaurin summation.  The lower Lambert W branch
uses Halley's iteration.

Fresnel integrals are taken from :func:`scipy.special.fresnel` and
converted to the unnormalised convention ``C(x) = int_0^x cos(t^2) dt``.
"""

import cmath
import math

import numpy as np
from scipy.special import fresnel as _fresnel_normalised

# Bernoulli numbers B_2, B_4, ..., B_20
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
              -3617 / 510, 43867 / 798, -174611 / 330)
_SHIFT_TO = 12.0
ZETA_3_2 = 2.6123753486854883433


def _check_pole(z):
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise ValueError(f"pole at nonpositive integer {z.real}")


def _realify(z, w):
    return w.real if isinstance(z, (int, float)) else w


def digamma(z):
    """psi(z) = Gamma'(z)/Gamma(z); complex input gives complex output."""
    z0 = z
    z = complex(z)
    _check_pole(z)
    acc = 0j
    while z.real < _SHIFT_TO:
        acc -= 1 / z
        z += 1
    inv2 = 1 / (z * z)
    series = 0j
    power = inv2
    for k, b in enumerate(_BERNOULLI[:8], start=1):
        series += b / (2 * k) * power
        power *= inv2
    return _realify(z0, acc + cmath.log(z) - 0.5 / z - series)


def trigamma(z):
    """psi'(z), the derivative of the digamma function."""
    z0 = z
    z = complex(z)
    _check_pole(z)
    acc = 0j
    while z.real < _SHIFT_TO:
        acc += 1 / (z * z)
        z += 1
    inv = 1 / z
    inv2 = inv * inv
    series = inv + 0.5 * inv2
    power = inv2 * inv
    for b in _BERNOULLI[:8]:
        series += b * power
        power *= inv2
    return _realify(z0, acc + series)


def loggamma(z):
    """log Gamma(z) on the principal branch (continuous for Re z > 0)."""
    z0 = z
    z = complex(z)
    _check_pole(z)
    acc = 0j
    while z.real < _SHIFT_TO:
        acc -= cmath.log(z)
        z += 1
    inv = 1 / z
    inv2 = inv * inv
    series = 0j
    power = inv
    for k, b in enumerate(_BERNOULLI[:8], start=1):
        series += b / (2 * k * (2 * k - 1)) * power
        power *= inv2
    value = (z - 0.5) * cmath.log(z) - z + 0.5 * math.log(2 * math.pi) + series + acc
    return _realify(z0, value)


def hurwitz_zeta(s, a, terms=8):
    """Hurwitz zeta ``sum_k (k + a)^(-s)``, analytically continued in ``s``.

    Euler-Maclaurin summation: the first ``N`` terms are added directly
    (``N`` chosen so that ``|a + N|`` is large), followed by the integral
    tail, the half endpoint term and ``terms`` Bernoulli corrections.
    ``a`` may be complex with positive real part.
    """
    s = complex(s)
    a = complex(a)
    if s == 1:
        raise ValueError("Hurwitz zeta has a pole at s = 1")
    if a.real <= 0:
        raise ValueError("Hurwitz zeta needs Re(a) > 0")
    n_direct = max(0, int(math.ceil(2 * terms + 10 - a.real)))
    head = 0j
    for k in range(n_direct):
        head += (a + k) ** (-s)
    x = a + n_direct
    tail = x ** (1 - s) / (s - 1) + 0.5 * x ** (-s)
    # rising factorial s (s+1) ... (s+2j-2) times x^(-s-2j+1) / (2j)!
    rising = s
    power = x ** (-s - 1)
    fact = 2.0
    for j in range(1, terms + 1):
        tail += _BERNOULLI[j - 1] / fact * rising * power
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        power /= x * x
        fact *= (2 * j + 1) * (2 * j + 2)
    return head + tail


def zeta_3_2():
    """Riemann zeta at 3/2."""
    return ZETA_3_2


def fresnel_C(x):
    """``int_0^x cos(t^2) dt``."""
    scale = math.sqrt(2 / math.pi)
    _, c = _fresnel_normalised(np.asarray(x, dtype=float) * scale)
    return c / scale


def fresnel_S(x):
    """``int_0^x sin(t^2) dt``."""
    scale = math.sqrt(2 / math.pi)
    s, _ = _fresnel_normalised(np.asarray(x, dtype=float) * scale)
    return s / scale


def fresnel_normalised(x):
    """``(C, S)`` with kernels ``cos(pi t^2 / 2)`` and ``sin(pi t^2 / 2)``."""
    s, c = _fresnel_normalised(np.asarray(x, dtype=float))
    return c, s


def lambert_w_m1(z, tol=1e-15, max_iter=100):
    """Lower real branch ``W_{-1}`` of the Lambert W function, ``z in [-1/e, 0)``."""
    z = float(z)
    branch = -1.0 / math.e
    if not branch <= z < 0.0:
        if branch - z < 1e-16 and z < 0:  # rounding at the branch point
            return -1.0
        raise ValueError(f"W_-1 is defined on [-1/e, 0), got {z}")
    if z == branch:
        return -1.0
    gap = 1.0 + math.e * z
    if gap < 0.3:
        # series about the branch point in p = -sqrt(2 (1 + e z))
        p = -math.sqrt(2.0 * gap)
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    else:
        lz = math.log(-z)
        w = lz - math.log(-lz)
    for _ in range(max_iter):
        ew = math.exp(w)
        f = w * ew - z
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= step
        if abs(step) <= tol * (1.0 + abs(w)):
            break
    return w


def binary_entropy(p):
    """``h(p) = -p log2 p - (1-p) log2 (1-p)`` with ``h(0) = h(1) = 0``."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"binary entropy needs p in [0, 1], got {p}")
    out = 0.0
    for q in (p, 1.0 - p):
        if q > 0:
            out -= q * math.log2(q)
    return out


_DISPATCH = {
    "digamma": digamma,
    "trigamma": trigamma,
    "loggamma": loggamma,
    "hurwitz_zeta": hurwitz_zeta,
    "hurwitz_zeta_re": lambda s, a: hurwitz_zeta(s, a).real,
    "zeta_3_2": zeta_3_2,
    "fresnel_C": fresnel_C,
    "fresnel_S": fresnel_S,
    "lambert_w_m1": lambert_w_m1,
    "binary_entropy": binary_entropy,
}


def special_function(kind: str, *args):
    """Evaluate a special function by name, e.g. ``special_function("trigamma", 1)``."""
    try:
        fn = _DISPATCH[kind]
    except KeyError:
        raise ValueError(f"unknown special function {kind!r}; choose from {sorted(_DISPATCH)}") from None
    return fn(*args)
