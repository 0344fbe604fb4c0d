"""Two pure qubit states and the 2x2 Hermitian algebra built on them.

Everything here is expressed in the orthonormal basis {|psi1>, |aux>}, where
|aux> is the unit vector orthogonal to |psi1> in the span of the pair. In that
basis

    |psi1> = (1, 0)
    |psi2> = (e^{i phi} cos(theta), sin(theta))

so |<psi1|psi2>| = cos(theta) holds by construction. Closed forms (trace
distance 2 sin(theta), mixture spectrum (1 +/- cos(theta))/2) sit next to
``eig2``, a direct root solver for the characteristic polynomial that is used
to check them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HALF_PI = 0.5 * math.pi


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not 0.0 <= theta <= HALF_PI:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta!r}")
    return theta


@dataclass(frozen=True)
class StatePair:
    """Two pure states with overlap magnitude cos(theta) and relative phase phi."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        _check_theta(self.theta)
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi must lie in [0, 2pi), got {self.phi!r}")

    @classmethod
    def from_cos(cls, cos_theta: float, phi: float = 0.0) -> "StatePair":
        if not 0.0 <= cos_theta <= 1.0:
            raise ValueError(f"cos(theta) must lie in [0, 1], got {cos_theta!r}")
        return cls(math.acos(cos_theta), phi)

    @property
    def psi1(self) -> np.ndarray:
        return np.array([1.0, 0.0], dtype=complex)

    @property
    def psi2(self) -> np.ndarray:
        return np.array(
            [np.exp(1j * self.phi) * math.cos(self.theta), math.sin(self.theta)],
            dtype=complex,
        )

    @property
    def aux(self) -> np.ndarray:
        """Unit vector orthogonal to psi1 (defined for every theta, used as basis)."""
        return np.array([0.0, 1.0], dtype=complex)

    def overlap(self) -> complex:
        return complex(np.vdot(self.psi1, self.psi2))


@dataclass(frozen=True)
class Hermitian2:
    """A 2x2 complex Hermitian matrix [[a, b], [conj(b), d]] with b = re + i*im."""

    a: float
    d: float
    re: float = 0.0
    im: float = 0.0

    @classmethod
    def from_matrix(cls, m) -> "Hermitian2":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        return cls(float(m[0, 0].real), float(m[1, 1].real),
                   float(m[0, 1].real), float(m[0, 1].imag))

    @property
    def offdiag(self) -> complex:
        return complex(self.re, self.im)

    def to_matrix(self) -> np.ndarray:
        b = self.offdiag
        return np.array([[self.a, b], [b.conjugate(), self.d]], dtype=complex)

    def trace(self) -> float:
        return self.a + self.d

    def det(self) -> float:
        return self.a * self.d - (self.re * self.re + self.im * self.im)

    def __add__(self, other: "Hermitian2") -> "Hermitian2":
        return Hermitian2(self.a + other.a, self.d + other.d,
                          self.re + other.re, self.im + other.im)

    def __sub__(self, other: "Hermitian2") -> "Hermitian2":
        return Hermitian2(self.a - other.a, self.d - other.d,
                          self.re - other.re, self.im - other.im)

    def scale(self, s: float) -> "Hermitian2":
        return Hermitian2(s * self.a, s * self.d, s * self.re, s * self.im)

    def is_density(self, atol: float = 1e-12) -> bool:
        """Unit trace and no eigenvalue below -atol."""
        return abs(self.trace() - 1.0) <= atol and eig2(self)[1] >= -atol


@dataclass(frozen=True)
class MixtureSpectrum:
    """Eigenvalues c >= 1/2 and 1 - c of the even mixture of a state pair."""

    c: float
    one_minus_c: float

    def __iter__(self):
        yield self.c
        yield self.one_minus_c


def build_density_pair(pair: StatePair) -> tuple[Hermitian2, Hermitian2]:
    """Projectors onto psi1 and psi2, written out entry by entry."""
    ct, st = math.cos(pair.theta), math.sin(pair.theta)
    rho1 = Hermitian2(1.0, 0.0)
    cs = ct * st
    rho2 = Hermitian2(ct * ct, st * st, cs * math.cos(pair.phi), cs * math.sin(pair.phi))
    return rho1, rho2


def even_mixture(pair: StatePair) -> Hermitian2:
    rho1, rho2 = build_density_pair(pair)
    return (rho1 + rho2).scale(0.5)


def eig2(h: Hermitian2) -> tuple[float, float]:
    """Both eigenvalues of a 2x2 Hermitian matrix, largest first.

    Roots of lambda^2 - tr*lambda + det. The root of larger magnitude comes
    from the quadratic formula and the other from det / root, which keeps the
    small eigenvalue of a nearly pure state accurate.
    """
    mean = 0.5 * (h.a + h.d)
    radius = math.hypot(0.5 * (h.a - h.d), math.hypot(h.re, h.im))
    big = mean + radius if mean >= 0.0 else mean - radius
    if big == 0.0:
        return 0.0, 0.0
    other = h.det() / big
    return (big, other) if big >= other else (other, big)


def trace_distance_closed(theta: float) -> float:
    """Trace norm ||rho1 - rho2||_1 of two pure states at overlap angle theta."""
    return 2.0 * math.sin(_check_theta(theta))


def trace_distance_oracle(rho1: Hermitian2, rho2: Hermitian2) -> float:
    lam1, lam2 = eig2(rho1 - rho2)
    return abs(lam1) + abs(lam2)


def mixture_spectrum(theta: float) -> MixtureSpectrum:
    c = 0.5 * (1.0 + math.cos(_check_theta(theta)))
    # c is in [1/2, 1], so 1 - c is exact and the pair sums to exactly 1.
    return MixtureSpectrum(c, 1.0 - c)


def spectral_entropy(eigenvalues) -> float:
    """-sum(l * log2 l) over the given eigenvalues, with 0 log 0 = 0.

    Eigenvalues in [-1e-12, 0] are treated as round-off zeros.
    """
    total = 0.0
    for lam in eigenvalues:
        if lam < -1e-12:
            raise ValueError(f"negative eigenvalue {lam!r} is not a probability")
        if lam > 0.0:
            total -= lam * math.log2(lam)
    return total


def von_neumann_entropy_even_mixture(theta: float) -> float:
    """Entropy in bits of (|psi1><psi1| + |psi2><psi2|)/2, i.e. H((1+cos theta)/2)."""
    return spectral_entropy(mixture_spectrum(theta))


def von_neumann_entropy_oracle(pair: StatePair) -> float:
    """Same entropy, from eig2 of the explicitly built mixture matrix."""
    return spectral_entropy(eig2(even_mixture(pair)))


def check_orthogonality_lemma(theta: float, c_tol: float = 1e-12,
                              theta_tol: float | None = None) -> bool:
    """True when "c == 1/2" and "states orthogonal" agree at this theta.

    Near theta = pi/2 we have c - 1/2 ~ (pi/2 - theta)/2, so the default
    angular tolerance is 2 * c_tol to keep the two tests equivalent.
    """
    if theta_tol is None:
        theta_tol = 2.0 * c_tol
    theta = _check_theta(theta)
    half_spectrum = abs(mixture_spectrum(theta).c - 0.5) <= c_tol
    orthogonal = abs(theta - HALF_PI) <= theta_tol
    return half_spectrum == orthogonal
