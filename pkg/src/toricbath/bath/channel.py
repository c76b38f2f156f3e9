"""Two-qubit channel generated by a shared bath, and the exact flip rate p_x.

The channel acts on a pair of qubits through five operator families built
from ``X1 = X (x) I`` and ``X2 = I (x) X``::

    rho -> q_id rho
           + q_single (X1 rho X1 + X2 rho X2)
           + q_double X1X2 rho X1X2
           - i q_coherent (X1X2 rho - rho X1X2)
           + q_cross (X1X2 rho + rho X1X2 - X1 rho X2 - X2 rho X1)

with coefficients fixed by the single-qubit decoherence ``Lambda``, the
cross correlator ``C`` and the coherent coupling ``J``.
"""

from dataclasses import dataclass
import math

import numpy as np

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)
X1 = np.kron(_X, _I2)
X2 = np.kron(_I2, _X)
XX = X1 @ X2


@dataclass(frozen=True)
class TwoQubitChannel:
    q_id: float
    q_single: float
    q_double: float
    q_coherent: float
    q_cross: float
    lam: float = 0.0
    corr: float = 0.0
    coupling: float = 0.0

    def trace_weight(self) -> float:
        """Total weight of the trace-carrying families; equals one."""
        return self.q_id + 2 * self.q_single + self.q_double

    def flip_probability(self) -> float:
        """Probability that a given one of the two qubits ends up flipped."""
        return self.q_single + self.q_double


def _check(lam, corr):
    if lam < 0:
        raise ValueError("Lambda must be nonnegative")
    if abs(corr) > lam * (1 + 1e-12):
        raise ValueError(f"|C| = {abs(corr)} exceeds Lambda = {lam}")


def two_qubit_channel(lam: float, corr: float, coupling: float) -> TwoQubitChannel:
    """Channel coefficients for decoherence ``lam``, correlator ``corr``, coupling ``coupling``."""
    _check(lam, corr)
    damp = math.exp(-2 * lam)
    even = math.exp(-4 * lam) * math.cosh(4 * corr)
    return TwoQubitChannel(
        q_id=0.25 * (1 + even) + 0.5 * damp * math.cos(2 * coupling),
        q_single=0.25 * (1 - even),
        q_double=0.25 * (1 + even) - 0.5 * damp * math.cos(2 * coupling),
        q_coherent=0.5 * damp * math.sin(2 * coupling),
        q_cross=0.25 * math.exp(-4 * lam) * math.sinh(4 * corr),
        lam=lam, corr=corr, coupling=coupling,
    )


def apply(channel: TwoQubitChannel, rho):
    """Apply ``channel`` to a 4x4 density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("expected a 4x4 density matrix")
    ch = channel
    return (ch.q_id * rho
            + ch.q_single * (X1 @ rho @ X1 + X2 @ rho @ X2)
            + ch.q_double * (XX @ rho @ XX)
            - 1j * ch.q_coherent * (XX @ rho - rho @ XX)
            + ch.q_cross * (XX @ rho + rho @ XX - X1 @ rho @ X2 - X2 @ rho @ X1))


def choi_matrix(channel: TwoQubitChannel):
    """Choi matrix ``sum_ab |a><b| (x) channel(|a><b|)`` (16x16)."""
    out = np.zeros((16, 16), dtype=complex)
    for a in range(4):
        for b in range(4):
            unit = np.zeros((4, 4), dtype=complex)
            unit[a, b] = 1
            out[4 * a:4 * a + 4, 4 * b:4 * b + 4] = apply(channel, unit)
    return out


def reduced_state(rho, keep: int = 0):
    """Partial trace of a two-qubit state onto qubit ``keep`` (0 or 1)."""
    t = np.asarray(rho).reshape(2, 2, 2, 2)
    return np.einsum("ajbj->ab", t) if keep == 0 else np.einsum("jajb->ab", t)


def ebit_fidelity(lam: float, corr: float, coupling: float) -> float:
    """Best overlap of the evolved ``|00>`` with ``(|00> +- i|11>)/sqrt 2``."""
    _check(lam, corr)
    even = math.exp(-4 * lam) * math.cosh(4 * corr)
    return 0.25 * (1 + even) + 0.5 * math.exp(-2 * lam) * abs(math.sin(2 * coupling))


def ebit_states():
    """The two target states ``(|00> + i|11>)/sqrt 2`` and ``(|00> - i|11>)/sqrt 2``."""
    plus = np.array([1, 0, 0, 1j]) / math.sqrt(2)
    minus = np.array([1, 0, 0, -1j]) / math.sqrt(2)
    return plus, minus


def px_recursive(p_d: float, couplings) -> float:
    """Flip probability built up one coupled partner at a time."""
    _check_rate(p_d)
    p = float(p_d)
    for j in couplings:
        c2 = math.cos(j) ** 2
        p = c2 * p + (1 - c2) * (1 - p)
    return p


def px_closed(p_d: float, couplings) -> float:
    """Flip probability ``1/2 - 1/2 (1 - 2 p_d) prod cos(2 J)``."""
    _check_rate(p_d)
    prod = 1.0
    for j in couplings:
        prod *= math.cos(2 * j)
    return 0.5 - 0.5 * (1 - 2 * p_d) * prod


def px_exact(p_d: float, couplings, method: str = "recursion") -> float:
    """Exact single-qubit flip probability from direct decoherence and couplings."""
    if method == "recursion":
        return px_recursive(p_d, couplings)
    if method == "closed":
        return px_closed(p_d, couplings)
    raise ValueError("method must be 'recursion' or 'closed'")


def _check_rate(p_d):
    if not 0 <= p_d <= 0.5:
        raise ValueError("p_d must lie in [0, 1/2]")
