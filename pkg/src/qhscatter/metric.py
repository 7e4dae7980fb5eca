"""Diagonal metric operators and compatibility diagnostics.

A positive diagonal Theta renders the non-Hermitian H self-adjoint in the
weighted inner product <psi|Theta|phi>, provided H^dagger Theta = Theta H.
For bandwidth-1 real H and diagonal Theta this reduces to one condition per
bond: H[k+1,k] theta_{k+1} = theta_k H[k,k+1].

Closed forms implemented here:

* chain model, with sites relabeled by odd integers outward from the
  central bond (our site m >= 0 carries label 2m+1, site m < 0 carries
  label -(2|m|-1)):

      theta_{+-1} = (1 +- a)(1 - b^2)(1 - c^2) ...
      theta_{+-3} = (1 +- a)(1 +- b)^2 (1 - c^2) ...
      theta_{+-5} = (1 +- a)(1 +- b)^2 (1 +- c)^2 ...

  continuing the same pattern for longer chains and saturating to a
  constant beyond the last coupling;

* scatterer blocks: theta_k = 1 everywhere except (1+g)/(1-g) at each
  block center.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import WindowError
from .lattice import SiteWindow
from .potentials import BandedOperator, ChainSpec, MultiCenterSpec, TwoCenterSpec


@dataclass(frozen=True)
class DiagonalMetric:
    """Diagonal metric entries theta_k over a site window."""

    window: SiteWindow
    theta: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        th = np.asarray(self.theta, dtype=np.float64).copy()
        if th.shape != (self.window.n_sites,):
            raise WindowError("theta length does not match window size")
        th.setflags(write=False)
        object.__setattr__(self, "theta", th)

    def theta_at(self, k: int) -> float:
        return float(self.theta[self.window.index_of(k)])


def identity_metric(window: SiteWindow) -> DiagonalMetric:
    return DiagonalMetric(window, np.ones(window.n_sites))


def chain_metric(spec: ChainSpec, window: SiteWindow) -> DiagonalMetric:
    """Closed-form chain metric, normalized by the product form itself."""
    cs = spec.couplings
    nc = len(cs)
    theta = np.empty(window.n_sites)
    for i, k in enumerate(window.sites):
        if k >= 0:
            sign, m = +1.0, int(k)
        else:
            sign, m = -1.0, int(-k - 1)
        v = 1.0 + sign * cs[0]
        for j in range(2, nc + 1):
            g = cs[j - 1]
            if j <= m + 1:
                v *= (1.0 + sign * g) ** 2
            else:
                v *= 1.0 - g * g
        theta[i] = v
    return DiagonalMetric(window, theta)


def two_center_metric(spec: TwoCenterSpec, window: SiteWindow) -> DiagonalMetric:
    """Identity except theta = (1+g)/(1-g) at the two block centers."""
    if window.half_width < spec.N + 2:
        raise WindowError(f"window does not hold the centers +-{spec.N + 2}")
    theta = np.ones(window.n_sites)
    for c in spec.centers:
        theta[window.index_of(c)] = (1.0 + spec.g) / (1.0 - spec.g)
    return DiagonalMetric(window, theta)


def multi_center_metric(spec: MultiCenterSpec, window: SiteWindow) -> DiagonalMetric:
    """Identity except (1+g_i)/(1-g_i) at each block center."""
    theta = np.ones(window.n_sites)
    for c, g in zip(spec.centers, spec.couplings):
        theta[window.index_of(c)] = (1.0 + g) / (1.0 - g)
    return DiagonalMetric(window, theta)


def quasi_hermiticity_residual(h: BandedOperator, metric: DiagonalMetric) -> float:
    """Max entrywise violation of H^dagger Theta = Theta H, window edges excluded.

    Edge rows are structurally incomplete after truncation, so only bonds
    with both sites strictly inside the window are scanned.
    """
    if h.window != metric.window:
        raise WindowError("operator and metric windows differ")
    th = metric.theta
    # bond i couples sites s_i, s_i + 1; interior bonds keep both sites off the edge
    upper = h.upper[1:-1]
    lower = h.lower[1:-1]
    t_left = th[1:-2]
    t_right = th[2:-1]
    res_up = np.abs(np.conj(lower) * t_right - t_left * upper)
    res_lo = np.abs(np.conj(upper) * t_left - t_right * lower)
    diag = h.diag[1:-1]
    res_diag = np.abs(np.conj(diag) - diag) * th[1:-1]
    return float(max(res_up.max(initial=0.0), res_lo.max(initial=0.0), res_diag.max(initial=0.0)))


def asymmetry_ratio(spec: ChainSpec) -> float:
    """Saturated left/right metric ratio theta_{-k}/theta_{+k} beyond the chain."""
    num = 1.0
    den = 1.0
    for j, g in enumerate(spec.couplings, start=1):
        p = 1 if j == 1 else 2
        num *= (1.0 - g) ** p
        den *= (1.0 + g) ** p
    return num / den


def positivity_check(metric: DiagonalMetric) -> bool:
    """True iff every theta_k is strictly positive."""
    return bool(np.min(metric.theta) > 0.0)
