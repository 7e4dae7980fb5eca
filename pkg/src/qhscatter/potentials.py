"""Banded non-Hermitian potentials and windowed Hamiltonians.

Two interaction families live here, both real, purely off-diagonal and of
bandwidth 1:

* the coupling chain V^(a,b,c,...): every bond (k, k+1) carries an
  antisymmetric pair V[k+1,k] = +gamma, V[k,k+1] = -gamma, with gamma = a on
  the central bond (-1, 0) and b, c, ... on the bonds fanning outward on
  both sides, so V^T = -V exactly;

* three-site scatterer blocks of strength g centered at site c, with
  V[c-1,c] = -g, V[c,c-1] = +g, V[c,c+1] = +g, V[c+1,c] = -g.  The
  two-center model places such blocks at c = +-(N+2); for N = -1 the blocks
  overlap at the origin and their entries superpose.

The Hamiltonian is H = -Delta + V with the dimensionless kinetic part
diag = 2, off-diag = -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PositivityError, WindowError
from .lattice import SiteWindow

# bond k means the lattice link between sites k and k+1
BondMap = dict[int, float]


def _check_coupling(value: float, label: str) -> float:
    v = float(value)
    if not abs(v) < 1.0:
        raise PositivityError(f"{label}={value!r} outside the open interval (-1, 1)")
    return v


@dataclass(frozen=True)
class ChainSpec:
    """Ordered bond couplings (a, b, c, ...) of the antisymmetric chain."""

    couplings: tuple[float, ...]

    def __post_init__(self) -> None:
        cs = tuple(_check_coupling(c, "chain coupling") for c in self.couplings)
        if len(cs) < 1:
            raise PositivityError("chain needs at least one coupling")
        object.__setattr__(self, "couplings", cs)

    def bond_map(self) -> BondMap:
        """Coupling gamma on each bond; bond -1 carries a, bonds 0 and -2 carry b, ..."""
        bonds: BondMap = {}
        for j, c in enumerate(self.couplings, start=1):
            if j == 1:
                bonds[-1] = c
            else:
                bonds[j - 2] = c
                bonds[-j] = c
        return bonds

    @property
    def matching_radius(self) -> int:
        """Smallest m with psi guaranteed free-form on |k| >= m."""
        return max(len(self.couplings), 1)


@dataclass(frozen=True)
class TwoCenterSpec:
    """Two three-site blocks of strength g centered at sites +-(N+2), N >= -1."""

    g: float
    N: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "g", _check_coupling(self.g, "g"))
        if int(self.N) != self.N or self.N < -1:
            raise ValueError(f"N={self.N!r} must be an integer >= -1")
        object.__setattr__(self, "N", int(self.N))

    @property
    def centers(self) -> tuple[int, int]:
        return (-(self.N + 2), self.N + 2)

    def bond_map(self) -> BondMap:
        return _center_bond_map(self.centers, (self.g, self.g))

    @property
    def matching_radius(self) -> int:
        return self.N + 3


@dataclass(frozen=True)
class MultiCenterSpec:
    """Several three-site blocks, one per (center, coupling) pair.

    Centers must be strictly increasing with gaps >= 2: blocks are then
    pairwise disjoint, or share exactly one site as in the merged N = -1
    configuration.
    """

    centers: tuple[int, ...]
    couplings: tuple[float, ...]

    def __post_init__(self) -> None:
        centers = tuple(int(c) for c in self.centers)
        gs = tuple(_check_coupling(g, "g") for g in self.couplings)
        if len(centers) == 0:
            raise ValueError("at least one center required")
        if len(centers) != len(gs):
            raise ValueError("centers and couplings must have equal length")
        for a, b in zip(centers, centers[1:]):
            if b - a < 2:
                raise ValueError(
                    f"centers {a} and {b} too close; blocks must be disjoint or share one site"
                )
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "couplings", gs)

    def bond_map(self) -> BondMap:
        return _center_bond_map(self.centers, self.couplings)

    @property
    def matching_radius(self) -> int:
        return max(abs(c) for c in self.centers) + 1


ScattererSpec = ChainSpec | TwoCenterSpec | MultiCenterSpec


def _center_bond_map(centers: tuple[int, ...], gs: tuple[float, ...]) -> BondMap:
    bonds: BondMap = {}
    for c, g in zip(centers, gs):
        bonds[c - 1] = bonds.get(c - 1, 0.0) + g
        bonds[c] = bonds.get(c, 0.0) - g
    return bonds


@dataclass(frozen=True)
class BandedOperator:
    """Complex tridiagonal operator over a site window.

    diag[i] is the entry at site s_i = i - half_width; upper[i] couples
    (s_i, s_i + 1) and lower[i] couples (s_i + 1, s_i).
    """

    window: SiteWindow
    diag: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)
    lower: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        n = self.window.n_sites
        diag = np.asarray(self.diag, dtype=np.complex128).copy()
        upper = np.asarray(self.upper, dtype=np.complex128).copy()
        lower = np.asarray(self.lower, dtype=np.complex128).copy()
        if diag.shape != (n,) or upper.shape != (n - 1,) or lower.shape != (n - 1,):
            raise WindowError("band array lengths inconsistent with window size")
        for arr in (diag, upper, lower):
            arr.setflags(write=False)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "lower", lower)

    def entry(self, i: int, j: int) -> complex:
        """Matrix element between sites i and j (zero beyond the band)."""
        ii, jj = self.window.index_of(i), self.window.index_of(j)
        if i == j:
            return complex(self.diag[ii])
        if j == i + 1:
            return complex(self.upper[ii])
        if j == i - 1:
            return complex(self.lower[jj])
        return 0.0

    def to_dense(self) -> np.ndarray:
        n = self.window.n_sites
        m = np.zeros((n, n), dtype=np.complex128)
        m[np.arange(n), np.arange(n)] = self.diag
        m[np.arange(n - 1), np.arange(1, n)] = self.upper
        m[np.arange(1, n), np.arange(n - 1)] = self.lower
        return m


def build_laplacian(window: SiteWindow) -> BandedOperator:
    """Kinetic part -Delta: diag entries 2, off-diagonal entries -1."""
    n = window.n_sites
    return BandedOperator(
        window,
        diag=np.full(n, 2.0, dtype=np.complex128),
        upper=np.full(n - 1, -1.0, dtype=np.complex128),
        lower=np.full(n - 1, -1.0, dtype=np.complex128),
    )


def _potential_from_bonds(bonds: BondMap, window: SiteWindow) -> BandedOperator:
    n = window.n_sites
    upper = np.zeros(n - 1, dtype=np.complex128)
    lower = np.zeros(n - 1, dtype=np.complex128)
    for k, gamma in bonds.items():
        i = window.index_of(k)  # bond (k, k+1) sits at the band index of site k
        window.index_of(k + 1)  # right end must also lie inside the window
        upper[i] = -gamma
        lower[i] = +gamma
    return BandedOperator(window, diag=np.zeros(n, dtype=np.complex128), upper=upper, lower=lower)


def build_chain_potential(spec: ChainSpec, window: SiteWindow) -> BandedOperator:
    """Antisymmetric chain potential; requires half_width >= len(couplings) + 1."""
    if window.half_width < len(spec.couplings) + 1:
        raise WindowError(
            f"half_width {window.half_width} too small for {len(spec.couplings)} couplings"
        )
    return _potential_from_bonds(spec.bond_map(), window)


def build_two_center_potential(spec: TwoCenterSpec, window: SiteWindow) -> BandedOperator:
    """Two three-site blocks at +-(N+2); requires half_width >= N + 4."""
    if window.half_width < spec.N + 4:
        raise WindowError(f"half_width {window.half_width} too small for N={spec.N}")
    return _potential_from_bonds(spec.bond_map(), window)


def build_multi_center_potential(spec: MultiCenterSpec, window: SiteWindow) -> BandedOperator:
    """Superposed three-site blocks; requires one free row beyond the outermost block."""
    if window.half_width < spec.matching_radius + 1:
        raise WindowError(
            f"half_width {window.half_width} too small for centers {spec.centers}"
        )
    return _potential_from_bonds(spec.bond_map(), window)


def build_potential(spec: ScattererSpec, window: SiteWindow) -> BandedOperator:
    """Dispatch on the scatterer family."""
    if isinstance(spec, ChainSpec):
        return build_chain_potential(spec, window)
    if isinstance(spec, TwoCenterSpec):
        return build_two_center_potential(spec, window)
    if isinstance(spec, MultiCenterSpec):
        return build_multi_center_potential(spec, window)
    raise TypeError(f"unsupported spec type {type(spec).__name__}")


def assemble_hamiltonian(potential: BandedOperator, window: SiteWindow | None = None) -> BandedOperator:
    """H = -Delta + V on the potential's window."""
    if window is not None and window != potential.window:
        raise WindowError("window does not match the potential's window")
    lap = build_laplacian(potential.window)
    return BandedOperator(
        potential.window,
        diag=lap.diag + potential.diag,
        upper=lap.upper + potential.upper,
        lower=lap.lower + potential.lower,
    )
