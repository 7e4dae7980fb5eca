"""Lattice scattering for quasi-Hermitian point interactions.

Non-Hermitian banded potentials on the 1D discrete Schroedinger lattice,
their positive diagonal metrics, and reflection/transmission amplitudes by
both direct matching solves and closed forms, with unitarity and metric
compatibility checked numerically.
"""

from .errors import (
    BandError,
    DomainError,
    PositivityError,
    QhScatterError,
    ResonanceError,
    ResonantAngleError,
    WindowError,
)
from .lattice import (
    EnergyAngle,
    SiteWindow,
    WaveSample,
    as_angle,
    asymptotic_left,
    asymptotic_right,
    energy_from_phi,
    phi_from_energy,
)
from .metric import (
    DiagonalMetric,
    asymmetry_ratio,
    chain_metric,
    identity_metric,
    multi_center_metric,
    positivity_check,
    quasi_hermiticity_residual,
    two_center_metric,
)
from .potentials import (
    BandedOperator,
    ChainSpec,
    MultiCenterSpec,
    TwoCenterSpec,
    assemble_hamiltonian,
    build_chain_potential,
    build_laplacian,
    build_multi_center_potential,
    build_potential,
    build_two_center_potential,
)
from .scattering import (
    Amplitudes,
    ClosedFormBreakdown,
    ContinuumProbeResult,
    MatchingSystem,
    build_matching_system,
    closed_form,
    closed_form_N0,
    closed_form_Nminus1,
    closed_form_generalN,
    closed_form_wave,
    continuum_probe,
    interior_plane_wave_fit,
    matching_row_residual,
    solve_numeric,
    unitarity_defect,
)
from .sweeps import SweepConfig, sweep_records, write_table

__version__ = "0.1.0"

__all__ = [
    "Amplitudes",
    "BandError",
    "BandedOperator",
    "ChainSpec",
    "ClosedFormBreakdown",
    "ContinuumProbeResult",
    "DiagonalMetric",
    "DomainError",
    "EnergyAngle",
    "MatchingSystem",
    "MultiCenterSpec",
    "PositivityError",
    "QhScatterError",
    "ResonanceError",
    "ResonantAngleError",
    "SiteWindow",
    "SweepConfig",
    "TwoCenterSpec",
    "WaveSample",
    "WindowError",
    "as_angle",
    "asymmetry_ratio",
    "asymptotic_left",
    "asymptotic_right",
    "assemble_hamiltonian",
    "build_chain_potential",
    "build_laplacian",
    "build_matching_system",
    "build_multi_center_potential",
    "build_potential",
    "build_two_center_potential",
    "chain_metric",
    "closed_form",
    "closed_form_N0",
    "closed_form_Nminus1",
    "closed_form_generalN",
    "closed_form_wave",
    "continuum_probe",
    "energy_from_phi",
    "identity_metric",
    "interior_plane_wave_fit",
    "matching_row_residual",
    "multi_center_metric",
    "phi_from_energy",
    "positivity_check",
    "quasi_hermiticity_residual",
    "solve_numeric",
    "sweep_records",
    "two_center_metric",
    "unitarity_defect",
    "write_table",
]
