"""Closed-form work ledger for the demon-operated ideal-gas cycle.

Sign convention: work is positive when it is done *on* the gas. A negative
total therefore means net work was extracted from a single heat bath.

Setting ``delta = 1`` gives the perfect-demon cycle; smaller ``delta`` only
changes step 2 (the walls stop at the pressure-balance point instead of
running to the cylinder ends).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .bounds import binary_entropy
from .qstate import _check_theta, mixture_spectrum, von_neumann_entropy_even_mixture

LN2 = math.log(2.0)
LEDGER_KEYS = ("w1", "w2", "w3", "w4", "w5", "w_meas", "w_reset",
               "p0", "v1", "v2", "c", "total")


@dataclass(frozen=True)
class CycleParams:
    """Gas size, geometry, bath temperature, state overlap and demon accuracy."""

    n_particles: float
    volume: float = 1.0
    temperature: float = 1.0
    boltzmann: float = 1.0
    theta: float = 0.5 * math.pi
    delta: float = 1.0

    def __post_init__(self):
        for name in ("n_particles", "volume", "temperature", "boltzmann"):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        _check_theta(self.theta)
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {self.delta!r}")

    @classmethod
    def from_cos(cls, cos_theta: float, **kwargs) -> "CycleParams":
        if not 0.0 <= cos_theta <= 1.0:
            raise ValueError(f"cos(theta) must lie in [0, 1], got {cos_theta!r}")
        return cls(theta=math.acos(cos_theta), **kwargs)

    @property
    def nkt(self) -> float:
        return self.n_particles * self.boltzmann * self.temperature


@dataclass(frozen=True)
class WorkLedger:
    w1: float
    w2: float
    w3: float
    w4: float
    w5: float
    w_meas: float
    w_reset: float
    p0: float
    v1: float
    v2: float
    c: float
    total: float

    def to_dict(self) -> dict:
        return asdict(self)

    def steps(self) -> dict:
        return {"w1": self.w1, "w2": self.w2, "w_meas_reset": self.w_meas + self.w_reset,
                "w3": self.w3, "w4": self.w4, "w5": self.w5}


def work_step1(params: CycleParams) -> float:
    """Both half-gases expand isothermally from V/4 to V/2."""
    return -params.nkt * LN2


def work_step2(params: CycleParams) -> float:
    """Demon walls slide to pressure balance; -NkT ln2 at delta = 1, 0 at delta = 0."""
    return -params.nkt * LN2 * (1.0 - binary_entropy(0.5 * (1.0 + params.delta)))


def equilibrium_fraction(delta: float) -> float:
    """Volume fraction behind a demon wall once its two pressures balance."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must lie in [0, 1], got {delta!r}")
    return 0.5 * (1.0 - delta)


def work_step3(params: CycleParams) -> float:
    # cN + (1-c)N particles all go from V to V/2, whatever c is
    return params.nkt * LN2


def work_step4(params: CycleParams) -> float:
    """Recompress both eigen-portions to the starting pressure: NkT ln2 S(rho)."""
    return params.nkt * LN2 * von_neumann_entropy_even_mixture(params.theta)


def work_step5(params: CycleParams) -> float:
    """Unitaries rotating each portion back to psi1/psi2; free in the quasistatic limit."""
    return 0.0


def closed_form_total(params: CycleParams) -> float:
    s = von_neumann_entropy_even_mixture(params.theta)
    h = binary_entropy(0.5 * (1.0 + params.delta))
    return -params.nkt * (1.0 - h - s) * LN2


def ledger(params: CycleParams, w_meas: float = 0.0) -> WorkLedger:
    """Per-step works for one pass of the cycle.

    Measurement and reset are taken to be reversible as a pair: whatever
    ``w_meas`` is charged, the reset returns it.
    """
    spectrum = mixture_spectrum(params.theta)
    w = [work_step1(params), work_step2(params), work_step3(params),
         work_step4(params), work_step5(params)]
    w_reset = 0.0 - w_meas
    total = w[0] + w[1] + w[2] + w[3] + w[4] + w_meas + w_reset
    v = params.volume
    return WorkLedger(
        *w, w_meas=w_meas, w_reset=w_reset,
        p0=2.0 * params.nkt / v,
        v1=spectrum.c * v / 2.0,
        v2=spectrum.one_minus_c * v / 2.0,
        c=spectrum.c,
        total=total,
    )


def second_law_margin(params: CycleParams) -> float:
    """Net work put into the gas over a cycle; negative means the second law is broken."""
    return ledger(params).total


def classify_second_law(params: CycleParams, tol: float = 1e-10) -> str:
    """``satisfied``, ``violated`` or ``marginal``; ``tol`` is in units of N k_B T."""
    margin = second_law_margin(params) / params.nkt
    if margin > tol:
        return "satisfied"
    if margin < -tol:
        return "violated"
    return "marginal"
