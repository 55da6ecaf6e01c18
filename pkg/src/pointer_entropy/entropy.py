"""Differential entropy quadrature and the collective measurement entropy.

The collective entropy of a simultaneous measurement is the sum of the
differential entropies of the inferred-position and inferred-momentum
distributions.  Everything is in nats.
"""

import math
from dataclasses import dataclass

import numpy as np

from .apparatus import NoiseTerms
from .distributions import inferred_momentum_density, inferred_position_density
from .exceptions import DomainError
from .states import DENSITY_FLOOR, Grid, ProbabilityDensity, SystemState


@dataclass(frozen=True)
class EntropyResult:
    """Marginal entropies of a simultaneous measurement, in nats."""

    s_x: float
    s_p: float

    @property
    def collective(self) -> float:
        """Total measurement uncertainty; the sum by definition."""
        return self.s_x + self.s_p


def entropy_of_samples(values: np.ndarray, spacing: float) -> float:
    """Trapezoidal -integral f ln f for non-negative samples on a uniform grid.

    Uses the 0 ln 0 = 0 convention: values below 1e-300 contribute nothing.
    """
    v = np.asarray(values, dtype=float)
    integrand = np.zeros_like(v)
    mask = v > DENSITY_FLOOR
    vm = v[mask]
    integrand[mask] = -vm * np.log(vm)
    return float(spacing * (integrand.sum() - 0.5 * (integrand[0] + integrand[-1])))


def differential_entropy(density: ProbabilityDensity) -> float:
    """Differential entropy -integral f ln f of a grid density, in nats."""
    return entropy_of_samples(density.values, density.grid.spacing)


def marginal_entropies(state: SystemState, noise: NoiseTerms,
                       grid: Grid | None = None) -> EntropyResult:
    """Entropies of the inferred position and momentum distributions.

    An explicit grid overrides the automatic sizing of both bare densities
    (before smoothing); pass None for the defaults.
    """
    s_x = differential_entropy(inferred_position_density(state, noise, grid))
    s_p = differential_entropy(inferred_momentum_density(state, noise, grid))
    return EntropyResult(s_x=s_x, s_p=s_p)


def collective_entropy(state: SystemState, noise: NoiseTerms,
                       grid: Grid | None = None) -> float:
    """Collective entropy S = S_x + S_p of a simultaneous measurement."""
    return marginal_entropies(state, noise, grid).collective


def gaussian_entropy(variance: float) -> float:
    """Closed-form differential entropy of a Gaussian, (1/2) ln(2 pi e var)."""
    if variance <= 0.0:
        raise DomainError(f"variance must be positive, got {variance}")
    return 0.5 * math.log(2.0 * math.pi * math.e * variance)


def squeezed_collective_entropy_closed_form(sigma2: float, noise: NoiseTerms) -> float:
    """Collective entropy of a squeezed state, without quadrature.

    Both marginals of a squeezed state stay Gaussian under smoothing, so
    S = 1 + ln pi - ln sqrt(w_x * w_p) with the Gaussian weights
    w_x = sigma^2/(sigma^2 + delta_x^2) and
    w_p = (1/(4 sigma^2)) / (1/(4 sigma^2) + delta_p^2).
    """
    if not (math.isfinite(sigma2) and sigma2 > 0.0):
        raise DomainError(f"sigma2 must be positive, got {sigma2!r}")
    var_x = sigma2
    var_p = 1.0 / (4.0 * sigma2)
    w_x = var_x / (var_x + noise.delta_x ** 2)
    w_p = var_p / (var_p + noise.delta_p ** 2)
    return 1.0 + math.log(math.pi) - 0.5 * math.log(w_x * w_p)
