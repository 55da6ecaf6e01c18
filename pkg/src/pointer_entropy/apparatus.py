"""Measurement-setup parameters and their reduction to noise widths.

A simultaneous position/momentum measurement couples the system to two
pointer modes.  Once the pointers are squeezed vacuum states, the whole
apparatus acts on the statistics only through two Gaussian smoothing
widths (delta_x, delta_p), one per inferred observable.  Their product is
bounded below by 1/2 for every physical setup.
"""

import math
from dataclasses import dataclass

from .exceptions import DomainError

#: Smallest noise-width product a physical setup can realize.
MIN_NOISE_PRODUCT = 0.5

_PRODUCT_SLACK = 1e-12


@dataclass(frozen=True)
class MeasurementSetup:
    """Physical apparatus parameters (hbar = 1).

    kappa1/kappa2 are the coupling strengths of the position and momentum
    channels, T the interaction time, sigma1_sq/sigma2_sq the initial
    position variances of the two pointers.  Couplings may be negative
    (only their squares matter) but not zero, since the inferred
    observables divide by kappa*T.
    """

    kappa1: float
    kappa2: float
    T: float
    sigma1_sq: float
    sigma2_sq: float

    def __post_init__(self):
        for name in ("kappa1", "kappa2", "T", "sigma1_sq", "sigma2_sq"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.T <= 0.0:
            raise DomainError(f"interaction time must be positive, got {self.T}")
        if self.sigma1_sq <= 0.0 or self.sigma2_sq <= 0.0:
            raise DomainError("pointer variances must be positive")
        if self.kappa1 == 0.0 or self.kappa2 == 0.0:
            raise DomainError("couplings must be non-zero")


@dataclass(frozen=True)
class NoiseTerms:
    """Gaussian smoothing widths (delta_x, delta_p) of the two channels.

    May be constructed directly, since distinct setups can produce the
    same widths.  Direct construction admits products below the physical
    floor of 1/2 for counterexample studies; `is_subminimal` flags those.
    """

    delta_x: float
    delta_p: float

    def __post_init__(self):
        if not (math.isfinite(self.delta_x) and self.delta_x > 0.0):
            raise DomainError(f"delta_x must be positive, got {self.delta_x!r}")
        if not (math.isfinite(self.delta_p) and self.delta_p > 0.0):
            raise DomainError(f"delta_p must be positive, got {self.delta_p!r}")

    @property
    def product(self) -> float:
        return self.delta_x * self.delta_p

    @property
    def is_subminimal(self) -> bool:
        """True when the product lies below the physical floor of 1/2."""
        return self.product < MIN_NOISE_PRODUCT - _PRODUCT_SLACK


def noise_terms(setup: MeasurementSetup) -> NoiseTerms:
    """Reduce a physical setup to its two noise widths.

    delta_x^2 = sigma1^2/(kappa1 T)^2 + (kappa2 T)^2/(16 sigma2^2) and the
    mirrored expression for delta_p.  The result only depends on the setup
    through the products kappa1*T and kappa2*T.
    """
    c1 = setup.kappa1 * setup.T
    c2 = setup.kappa2 * setup.T
    dx = math.sqrt(setup.sigma1_sq / c1**2 + c2**2 / (16.0 * setup.sigma2_sq))
    dp = math.sqrt(setup.sigma2_sq / c2**2 + c1**2 / (16.0 * setup.sigma1_sq))
    return NoiseTerms(dx, dp)


def noise_product(noise: NoiseTerms) -> float:
    """Product delta_x * delta_p; at least 1/2 for any physical setup."""
    return noise.product


def is_minimal_product(setup: MeasurementSetup, tol: float) -> bool:
    """Whether the setup sits on the minimal-product manifold.

    Equality delta_x*delta_p = 1/2 holds exactly when
    sigma1^2 sigma2^2 = kappa1^2 kappa2^2 T^4 / 16; `tol` is relative.
    """
    if tol <= 0.0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    target = (setup.kappa1 * setup.kappa2 * setup.T**2) ** 2 / 16.0
    return abs(setup.sigma1_sq * setup.sigma2_sq - target) <= tol * target
