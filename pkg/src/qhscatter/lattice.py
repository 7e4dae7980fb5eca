"""Site indexing, band energies and plane-wave asymptotics on the 1D lattice.

Sites are integers k in [-M, M] at coordinates x_k = k*h.  All matching
algebra downstream is dimensionless (diagonal entries 2*cos(phi)); the
spacing h enters only through the energy conversion E = (2 - 2 cos phi)/h^2
and the continuum probes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BandError, DomainError, WindowError


@dataclass(frozen=True)
class EnergyAngle:
    """Bloch angle phi in the open interval (0, pi).

    Parametrizes the lattice band energy E = (2 - 2 cos phi)/h^2.  The
    endpoints are band edges where the plane-wave ansatz degenerates and
    are rejected.
    """

    phi: float

    def __post_init__(self) -> None:
        phi = float(self.phi)
        if not (0.0 < phi < math.pi):
            raise BandError(f"phi={phi!r} outside the open band interval (0, pi)")
        object.__setattr__(self, "phi", phi)

    def energy(self, h: float = 1.0) -> float:
        return energy_from_phi(self, h)


def as_angle(phi: float | EnergyAngle) -> EnergyAngle:
    """Coerce a bare float to a validated EnergyAngle."""
    if isinstance(phi, EnergyAngle):
        return phi
    return EnergyAngle(float(phi))


def energy_from_phi(phi: float | EnergyAngle, h: float = 1.0) -> float:
    """Band energy E = (2 - 2 cos phi)/h^2.

    Evaluated as 4 sin^2(phi/2)/h^2, which is the same quantity without
    cancellation near the band bottom.
    """
    if h <= 0.0:
        raise WindowError(f"spacing h={h!r} must be positive")
    s = 2.0 * math.sin(as_angle(phi).phi / 2.0)
    return s * s / (h * h)


def phi_from_energy(energy: float, h: float = 1.0) -> EnergyAngle:
    """Inverse of energy_from_phi; requires 0 < E*h^2 < 4 (inside the band).

    Branches at mid-band so neither arcsine is evaluated near 1; the
    round-trip is then limited only by the quantization of E*h^2 itself,
    which near the band top resolves phi no finer than ~2e-16/(pi - phi).
    """
    if h <= 0.0:
        raise WindowError(f"spacing h={h!r} must be positive")
    x = float(energy) * h * h
    if not (0.0 < x < 4.0):
        raise BandError(f"E*h^2={x!r} outside the lattice band (0, 4)")
    if x <= 2.0:
        return EnergyAngle(2.0 * math.asin(math.sqrt(x) / 2.0))
    return EnergyAngle(math.pi - 2.0 * math.asin(math.sqrt(4.0 - x) / 2.0))


def asymptotic_left(m: int, phi: float | EnergyAngle, reflection: complex) -> complex:
    """Left-side free wave U_{-m} = exp(-i m phi) + R exp(+i m phi), m >= 1."""
    if m < 1:
        raise DomainError(f"asymptotic site index m={m} must be >= 1")
    p = as_angle(phi).phi
    return complex(np.exp(-1j * m * p) + reflection * np.exp(1j * m * p))


def asymptotic_right(m: int, phi: float | EnergyAngle, transmission: complex) -> complex:
    """Right-side free wave L_m = T exp(+i m phi), m >= 1."""
    if m < 1:
        raise DomainError(f"asymptotic site index m={m} must be >= 1")
    p = as_angle(phi).phi
    return complex(transmission * np.exp(1j * m * p))


@dataclass(frozen=True)
class SiteWindow:
    """Symmetric site window k in [-half_width, half_width] with spacing h."""

    half_width: int
    spacing: float = 1.0

    def __post_init__(self) -> None:
        if int(self.half_width) != self.half_width or self.half_width < 1:
            raise WindowError(f"half_width={self.half_width!r} must be an integer >= 1")
        if self.spacing <= 0.0:
            raise WindowError(f"spacing={self.spacing!r} must be positive")
        object.__setattr__(self, "half_width", int(self.half_width))
        object.__setattr__(self, "spacing", float(self.spacing))

    @property
    def n_sites(self) -> int:
        return 2 * self.half_width + 1

    @property
    def sites(self) -> np.ndarray:
        return np.arange(-self.half_width, self.half_width + 1)

    def coordinate(self, k: int) -> float:
        """x_k = k*h for a site inside the window."""
        self.index_of(k)
        return k * self.spacing

    def index_of(self, k: int) -> int:
        """Array index of site k; raises WindowError if outside."""
        if abs(k) > self.half_width:
            raise WindowError(f"site {k} outside window [-{self.half_width}, {self.half_width}]")
        return k + self.half_width


@dataclass(frozen=True)
class WaveSample:
    """Discrete wavefunction psi_k over a site window (one complex value per site)."""

    window: SiteWindow
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (self.window.n_sites,):
            raise WindowError(
                f"values length {vals.shape} does not match window size {self.window.n_sites}"
            )
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def value_at(self, k: int) -> complex:
        return complex(self.values[self.window.index_of(k)])
