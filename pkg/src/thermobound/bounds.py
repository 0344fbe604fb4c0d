"""Binary entropy, its inversion, and the three two-state discrimination bounds.

Accuracies are written as delta in [0, 1], with success probability
(1 + delta)/2. Three ceilings on delta are computed for a pair of pure states
at overlap angle theta:

* ``delta_th``  thermodynamic: H((1+delta)/2) = 1 - S(rho)
* ``delta_qi``  Holevo-Helstrom: sin(theta)
* ``delta_hol`` accessible information: I(gas:memory) = chi, solved through the
  gas/memory mutual-information table and the eigenvalues of the mixture.

``delta_hol`` and ``delta_th`` end up being the same number, but they are
reached by separate code paths so that agreement is a real check.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

import numpy as np

from .qstate import (
    StatePair,
    _check_theta,
    eig2,
    even_mixture,
    spectral_entropy,
    von_neumann_entropy_even_mixture,
)

PROB_SLACK = 1e-12
INVERSION_TOL = 1e-12
INVERSION_MAX_ITER = 200


class ConvergenceError(ArithmeticError):
    """Entropy inversion did not reach the residual tolerance."""

    def __init__(self, message, residual=None, row=None):
        super().__init__(message)
        self.residual = residual
        self.row = row


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not -PROB_SLACK <= value <= 1.0 + PROB_SLACK:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return min(max(value, 0.0), 1.0)


def binary_entropy(p: float) -> float:
    """Shannon entropy in bits of a biased coin with P(heads) = p.

    Uses 0 log 0 = 0, so H(0) = H(1) = 0. Values within 1e-12 outside [0, 1]
    are clipped; anything further out raises ``ValueError``.
    """
    p = _check_unit("p", p)
    q = 1.0 - p
    h = 0.0
    if p > 0.0:
        h -= p * math.log2(p)
    if q > 0.0:
        h -= q * math.log2(q)
    return h


@dataclass(frozen=True)
class Inversion:
    p: float
    iterations: int
    residual: float


def inverse_binary_entropy_upper(h: float, *, tol: float = INVERSION_TOL,
                                 max_iter: int = INVERSION_MAX_ITER,
                                 full_output: bool = False):
    """The p in [1/2, 1] with H(p) = h, by bisection.

    H is strictly decreasing on [1/2, 1] and its slope diverges at p = 1, so
    bisection is used instead of Newton. The bracket is halved until it stops
    shrinking in floating point (or ``max_iter`` is reached); the residual
    |H(p) - h| is then checked against ``tol``.

    Returns p, or an ``Inversion`` record when ``full_output`` is set.
    Raises ``ConvergenceError`` if the final residual exceeds ``tol``.
    """
    h = _check_unit("h", h)
    if h == 1.0:
        result = Inversion(0.5, 0, 0.0)
    elif h == 0.0:
        result = Inversion(1.0, 0, 0.0)
    else:
        lo, hi = 0.5, 1.0
        it = 0
        while it < max_iter:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            it += 1
            if binary_entropy(mid) > h:
                lo = mid
            else:
                hi = mid
        p = lo if abs(binary_entropy(lo) - h) <= abs(binary_entropy(hi) - h) else hi
        result = Inversion(p, it, abs(binary_entropy(p) - h))
    if result.residual > tol:
        raise ConvergenceError(
            f"binary entropy inversion of h={h!r} stalled at residual "
            f"{result.residual:.3e} after {result.iterations} iterations",
            residual=result.residual)
    return result if full_output else result.p


def delta_qi(theta: float) -> float:
    """Holevo-Helstrom optimum, half the trace distance of the two projectors."""
    return math.sin(_check_theta(theta))


def delta_th(theta: float, full_output: bool = False):
    """Largest accuracy for which the modified cycle extracts no net work."""
    s = von_neumann_entropy_even_mixture(theta)
    inv = inverse_binary_entropy_upper(1.0 - s, full_output=True)
    delta = min(max(2.0 * inv.p - 1.0, 0.0), 1.0)
    return (delta, inv) if full_output else delta


@dataclass(frozen=True)
class MutualInformation:
    """Entropies (bits) of one gas particle's state, its memory record, and both."""

    h_gas: float
    h_memory: float
    h_joint: float
    p_gas: tuple
    p_memory: tuple
    p_joint: tuple

    @property
    def value(self) -> float:
        return self.h_gas + self.h_memory - self.h_joint


def _shannon(probs) -> float:
    return -sum(p * math.log2(p) for p in probs if p > 0.0)


def mutual_information_gas_memory(delta: float, full_output: bool = False):
    """I(gas:memory) for demons with accuracy ``delta``, built from the joint table.

    The prior over the two states is even. The memory marginal follows from
    Bayes' rule, and the joint table is p(j, k) = (1 + delta)/4 on the
    diagonal and (1 - delta)/4 off it. The result equals
    1 - H((1 + delta)/2).
    """
    delta = _check_unit("delta", delta)
    p_gas = (0.5, 0.5)
    hit, miss = 0.5 * (1.0 + delta), 0.5 * (1.0 - delta)
    p_memory = (hit * p_gas[0] + miss * p_gas[1], miss * p_gas[0] + hit * p_gas[1])
    p_joint = ((hit * p_gas[0], miss * p_gas[0]),
               (miss * p_gas[1], hit * p_gas[1]))
    mi = MutualInformation(
        h_gas=_shannon(p_gas),
        h_memory=_shannon(p_memory),
        h_joint=_shannon([p for row in p_joint for p in row]),
        p_gas=p_gas,
        p_memory=p_memory,
        p_joint=p_joint,
    )
    return mi if full_output else mi.value


def holevo_chi(theta: float, phi: float = 0.0) -> float:
    """Holevo quantity of the even pure-state ensemble, from eig2 of the mixture."""
    return spectral_entropy(eig2(even_mixture(StatePair(theta, phi))))


def delta_hol(theta: float, full_output: bool = False):
    """Accuracy at which I(gas:memory) reaches the Holevo quantity.

    By the chain rule H_joint = H_gas + H(memory | gas), and the conditional
    term is the binary entropy of the success probability. At saturation
    I = chi, which leaves H(P_s) = H_memory - chi.
    """
    chi = holevo_chi(theta)
    marginals = mutual_information_gas_memory(0.0, full_output=True)
    target = min(max(marginals.h_memory - chi, 0.0), 1.0)
    inv = inverse_binary_entropy_upper(target, full_output=True)
    delta = min(max(2.0 * inv.p - 1.0, 0.0), 1.0)
    return (delta, inv) if full_output else delta


@dataclass(frozen=True)
class BoundResult:
    cos_theta: float
    theta: float
    delta_th: float
    delta_qi: float
    delta_hol: float
    relative_gap: float
    solver_iterations: int
    solver_residual: float

    def to_dict(self) -> dict:
        return asdict(self)


def relative_gap(d_th: float, d_qi: float) -> float:
    return (d_th - d_qi) / d_th if d_th > 0.0 else 0.0


def bound_at(theta: float) -> BoundResult:
    d_th, inv_th = delta_th(theta, full_output=True)
    d_hol, inv_hol = delta_hol(theta, full_output=True)
    d_qi = delta_qi(theta)
    return BoundResult(
        cos_theta=math.cos(theta),
        theta=theta,
        delta_th=d_th,
        delta_qi=d_qi,
        delta_hol=d_hol,
        relative_gap=relative_gap(d_th, d_qi),
        solver_iterations=inv_th.iterations + inv_hol.iterations,
        solver_residual=max(inv_th.residual, inv_hol.residual),
    )


def bound_table(cos_min: float, cos_max: float, steps: int) -> list[BoundResult]:
    """All three bounds on a uniform grid in cos(theta).

    Raises ``ValueError`` for a bad grid and ``ConvergenceError`` (with
    ``row`` set) if a row fails to solve.
    """
    if not (0.0 <= cos_min < cos_max <= 1.0):
        raise ValueError(f"need 0 <= cos_min < cos_max <= 1, got {cos_min!r}, {cos_max!r}")
    if int(steps) != steps or steps < 2:
        raise ValueError(f"steps must be an integer >= 2, got {steps!r}")
    rows = []
    for i, c in enumerate(np.linspace(cos_min, cos_max, int(steps))):
        theta = math.acos(min(max(float(c), 0.0), 1.0))
        try:
            row = bound_at(theta)
        except ConvergenceError as exc:
            raise ConvergenceError(f"row {i} (cos_theta={c:.12g}): {exc}",
                                   residual=exc.residual, row=i) from exc
        # report the grid value itself, not cos(acos(c))
        rows.append(replace(row, cos_theta=float(c)))
    return rows
