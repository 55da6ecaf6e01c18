"""System states and their position/momentum probability densities.

A state can be given in three interchangeable representations: a squeezed
vacuum defined by its position variance, a finite superposition of harmonic
oscillator number states, or an explicit wavefunction sampled on a uniform
grid.  All densities live on uniform grids and are integrated with the
trapezoidal rule.  Units use hbar = 1 so that the vacuum has position
variance 1/2.
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np

from .exceptions import CapabilityError, DomainError, TruncationError

#: Largest supported number-state index for Hermite-function evaluation.
FOCK_N_MAX = 64

#: Default number of points for automatically sized grids.
DEFAULT_GRID_POINTS = 4097

#: Grids extend this many standard deviations beyond the state, plus a margin.
GRID_NSIGMA = 8.0
GRID_MARGIN = 2.0

#: Maximum probability mass a density computation may clip off.
MASS_TOLERANCE = 1e-8

#: Probability values below this contribute nothing to entropy integrands.
DENSITY_FLOOR = 1e-300


def flush_tiny(values: np.ndarray, floor: float = 1e-300) -> np.ndarray:
    """Zero out magnitudes below `floor`, in place.

    Subnormal tails of Gaussian-type arrays slow BLAS kernels by two
    orders of magnitude; the discarded values are far below every
    tolerance in this library.
    """
    values[np.abs(values) < floor] = 0.0
    return values


def trapezoid(values: np.ndarray, spacing: float) -> float:
    """Trapezoidal integral of uniformly sampled values."""
    v = np.asarray(values)
    return float(spacing * (v.sum() - 0.5 * (v[0] + v[-1])))


def trapezoid_weights(count: int, spacing: float) -> np.ndarray:
    """Quadrature weights of the trapezoidal rule on a uniform grid."""
    w = np.full(count, spacing)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def _readonly(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class Grid:
    """Uniform 1-D grid with `count` points spanning [min, max]."""

    min: float
    max: float
    count: int

    def __post_init__(self):
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise DomainError("grid endpoints must be finite")
        if self.min >= self.max:
            raise DomainError(f"grid needs min < max, got [{self.min}, {self.max}]")
        if self.count < 2:
            raise DomainError(f"grid needs at least 2 points, got {self.count}")

    @property
    def spacing(self) -> float:
        return (self.max - self.min) / (self.count - 1)

    @cached_property
    def points(self) -> np.ndarray:
        return _readonly(np.linspace(self.min, self.max, self.count))

    @cached_property
    def weights(self) -> np.ndarray:
        return _readonly(trapezoid_weights(self.count, self.spacing))

    def widened(self, pad: float) -> "Grid":
        """Extend both ends by at least `pad`, preserving the spacing."""
        if pad <= 0:
            return self
        extra = math.ceil(pad / self.spacing)
        h = self.spacing
        return Grid(self.min - extra * h, self.max + extra * h, self.count + 2 * extra)


@dataclass(frozen=True, eq=False)
class ProbabilityDensity:
    """Normalized non-negative density sampled on a uniform grid.

    Construction enforces the normalization contract: the trapezoidal
    integral must equal 1 within 1e-6 and no value may be negative.
    Producers are expected to renormalize before constructing.
    """

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.count,):
            raise DomainError(
                f"density has {v.shape} values for a {self.grid.count}-point grid"
            )
        if not np.all(np.isfinite(v)):
            raise DomainError("density values must be finite")
        if np.any(v < 0.0):
            raise DomainError(f"density values must be non-negative (min {v.min():.3e})")
        total = trapezoid(v, self.grid.spacing)
        if abs(total - 1.0) > 1e-6:
            raise DomainError(f"density integrates to {total!r}, expected 1 within 1e-6")
        object.__setattr__(self, "values", _readonly(v))

    def integral(self) -> float:
        return trapezoid(self.values, self.grid.spacing)


def normalized_density(grid: Grid, values: np.ndarray) -> ProbabilityDensity:
    """Clamp quadrature-level negatives, renormalize and build a density."""
    v = np.asarray(values, dtype=float).copy()
    low = v.min(initial=0.0)
    if low < -1e-12:
        raise DomainError(f"density values significantly negative (min {low:.3e})")
    np.clip(v, 0.0, None, out=v)
    total = trapezoid(v, grid.spacing)
    if not (total > 0.0) or not math.isfinite(total):
        raise DomainError("density has no probability mass")
    return ProbabilityDensity(grid, v / total)


@dataclass(frozen=True)
class SqueezedVacuum:
    """Squeezed vacuum state defined by its position variance sigma2.

    Position density is Gaussian with variance sigma2, momentum density is
    Gaussian with variance 1/(4 sigma2); sigma2 = 1/2 is the vacuum.
    """

    sigma2: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0.0):
            raise DomainError(f"sigma2 must be positive, got {self.sigma2!r}")

    @property
    def momentum_variance(self) -> float:
        return 1.0 / (4.0 * self.sigma2)


@dataclass(frozen=True, eq=False)
class FockSuperposition:
    """Finite superposition of number states, sum_n c_n |n>.

    Coefficients are normalized at construction so that sum |c_n|^2 = 1.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 1 or c.size == 0:
            raise DomainError("coefficients must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(c)):
            raise DomainError("coefficients must be finite")
        if c.size - 1 > FOCK_N_MAX:
            raise CapabilityError(
                f"superposition reaches n={c.size - 1}, supported maximum is {FOCK_N_MAX}"
            )
        norm = math.sqrt(float(np.sum(np.abs(c) ** 2)))
        if norm < 1e-12:
            raise DomainError("coefficients have zero norm")
        object.__setattr__(self, "coeffs", _readonly(c / norm))

    @property
    def n_top(self) -> int:
        """Highest occupied number-state index (used for grid sizing)."""
        nz = np.nonzero(np.abs(self.coeffs) > 1e-12)[0]
        return int(nz[-1]) if nz.size else 0


@dataclass(frozen=True, eq=False)
class GridWavefunction:
    """Complex wavefunction sampled on a uniform grid, normalized at construction."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.count,):
            raise DomainError(
                f"wavefunction has {v.shape} values for a {self.grid.count}-point grid"
            )
        if not np.all(np.isfinite(v)):
            raise DomainError("wavefunction values must be finite")
        norm_sq = trapezoid(np.abs(v) ** 2, self.grid.spacing)
        if not (norm_sq > 0.0) or not math.isfinite(norm_sq):
            raise DomainError("wavefunction has zero norm")
        object.__setattr__(self, "values", _readonly(v / math.sqrt(norm_sq)))


SystemState = Union[SqueezedVacuum, FockSuperposition, GridWavefunction]


def hermite_functions(n_max: int, x: np.ndarray) -> np.ndarray:
    """Table of normalized oscillator eigenfunctions psi_0..psi_n_max at x.

    psi_n(x) = (2^n n! sqrt(pi))^(-1/2) H_n(x) exp(-x^2/2), evaluated with
    the three-term recurrence on the normalized functions, which is stable
    for all supported n.  Returns an array of shape (n_max+1,) + x.shape.
    """
    if n_max < 0:
        raise DomainError("n must be non-negative")
    if n_max > FOCK_N_MAX:
        raise CapabilityError(f"n={n_max} exceeds supported maximum {FOCK_N_MAX}")
    x = np.asarray(x, dtype=float)
    table = np.empty((n_max + 1,) + x.shape)
    table[0] = flush_tiny(np.pi ** -0.25 * np.exp(-0.5 * x * x))
    if n_max >= 1:
        table[1] = math.sqrt(2.0) * x * table[0]
    for k in range(2, n_max + 1):
        table[k] = math.sqrt(2.0 / k) * x * table[k - 1] - math.sqrt((k - 1) / k) * table[k - 2]
    return table


def hermite_wavefunction(n: int, x) -> np.ndarray:
    """Normalized oscillator eigenfunction psi_n evaluated at x."""
    scalar = np.isscalar(x)
    value = hermite_functions(n, np.asarray(x, dtype=float))[n]
    return float(value) if scalar else value


def _fock_position_amplitudes(state: FockSuperposition, x: np.ndarray) -> np.ndarray:
    table = hermite_functions(state.coeffs.size - 1, x)
    return np.tensordot(state.coeffs, table, axes=(0, 0))


def _fock_momentum_coeffs(state: FockSuperposition) -> np.ndarray:
    # psi~_n(p) = (-i)^n psi_n(p): number states are Fourier eigenfunctions.
    n = np.arange(state.coeffs.size)
    return state.coeffs * (-1j) ** n


def position_wavefunction(state: SystemState, x: np.ndarray) -> np.ndarray:
    """Evaluate psi(x) at arbitrary points.

    GridWavefunction values are interpolated linearly and are zero outside
    their grid.
    """
    x = np.asarray(x, dtype=float)
    if isinstance(state, SqueezedVacuum):
        s2 = state.sigma2
        return ((2.0 * np.pi * s2) ** -0.25 * np.exp(-x * x / (4.0 * s2))).astype(complex)
    if isinstance(state, FockSuperposition):
        return _fock_position_amplitudes(state, x)
    if isinstance(state, GridWavefunction):
        xs = state.grid.points
        re = np.interp(x, xs, state.values.real, left=0.0, right=0.0)
        im = np.interp(x, xs, state.values.imag, left=0.0, right=0.0)
        return re + 1j * im
    raise DomainError(f"unsupported state type {type(state).__name__}")


def _variance_bound(state: SystemState, kind: str) -> float:
    if isinstance(state, SqueezedVacuum):
        return state.sigma2 if kind == "x" else state.momentum_variance
    if isinstance(state, FockSuperposition):
        # <x^2> <= n_top + 1/2 for any superposition truncated at n_top,
        # identically in momentum.
        return state.n_top + 0.5
    raise DomainError("no analytic variance bound for grid wavefunctions")


def auto_position_grid(state: SystemState, count: int = DEFAULT_GRID_POINTS) -> Grid:
    """Symmetric grid wide enough that the clipped position mass is negligible."""
    if isinstance(state, GridWavefunction):
        return state.grid
    half = GRID_NSIGMA * math.sqrt(_variance_bound(state, "x")) + GRID_MARGIN
    return Grid(-half, half, count)


def auto_momentum_grid(state: SystemState, count: int = DEFAULT_GRID_POINTS) -> Grid:
    """Symmetric grid wide enough for the momentum density."""
    if isinstance(state, GridWavefunction):
        probe = momentum_representation(state)
        var = state_variance(normalized_density(probe.grid, np.abs(probe.values) ** 2))
        half = GRID_NSIGMA * math.sqrt(max(var, 1e-6)) + GRID_MARGIN
        return Grid(-half, half, count)
    half = GRID_NSIGMA * math.sqrt(_variance_bound(state, "p")) + GRID_MARGIN
    return Grid(-half, half, count)


def _check_truncation(raw_mass: float, what: str) -> None:
    deficit = abs(1.0 - raw_mass)
    if deficit >= MASS_TOLERANCE:
        raise TruncationError(f"grid too narrow for {what}", deficit)


def position_density(state: SystemState, grid: Grid | None = None) -> ProbabilityDensity:
    """|psi(x)|^2 sampled on the grid and renormalized.

    Raises TruncationError when the grid clips off measurable probability
    mass (>= 1e-8).
    """
    if grid is None:
        grid = auto_position_grid(state)
    if isinstance(state, GridWavefunction):
        raw = np.abs(state.values) ** 2
        if grid is state.grid or grid == state.grid:
            return normalized_density(grid, raw)
        sampled = np.interp(grid.points, state.grid.points, raw, left=0.0, right=0.0)
        _check_truncation(trapezoid(sampled, grid.spacing), "position density")
        return normalized_density(grid, sampled)
    amplitudes = position_wavefunction(state, grid.points)
    raw = np.abs(amplitudes) ** 2
    _check_truncation(trapezoid(raw, grid.spacing), "position density")
    return normalized_density(grid, raw)


def momentum_density(state: SystemState, grid: Grid | None = None) -> ProbabilityDensity:
    """|psi~(p)|^2 on the grid, with psi~ the unitary Fourier transform of psi."""
    if isinstance(state, GridWavefunction):
        if grid is None:
            grid = auto_momentum_grid(state)
        amplitudes = _fourier_amplitudes(state, grid.points)
        raw = np.abs(amplitudes) ** 2
        _check_truncation(trapezoid(raw, grid.spacing), "momentum density")
        return normalized_density(grid, raw)
    if grid is None:
        grid = auto_momentum_grid(state)
    if isinstance(state, SqueezedVacuum):
        var = state.momentum_variance
        raw = np.exp(-grid.points ** 2 / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)
    else:
        rotated = FockSuperposition(_fock_momentum_coeffs(state))
        raw = np.abs(_fock_position_amplitudes(rotated, grid.points)) ** 2
    _check_truncation(trapezoid(raw, grid.spacing), "momentum density")
    return normalized_density(grid, raw)


def _fourier_amplitudes(state: GridWavefunction, p: np.ndarray) -> np.ndarray:
    """psi~(p) = (2 pi)^(-1/2) integral psi(x) exp(-i p x) dx by direct quadrature."""
    x = state.grid.points
    w = state.grid.weights
    phases = np.exp(-1j * np.outer(p, x))
    return phases @ (state.values * w) / math.sqrt(2.0 * math.pi)


def momentum_representation(state: GridWavefunction) -> GridWavefunction:
    """Fourier transform onto the grid's natural dual momentum grid."""
    n = state.grid.count
    h = state.grid.spacing
    x0 = state.grid.min
    p = 2.0 * np.pi * np.fft.fftshift(np.fft.fftfreq(n, d=h))
    spectrum = np.fft.fftshift(np.fft.fft(state.values)) * h / math.sqrt(2.0 * math.pi)
    spectrum *= np.exp(-1j * p * x0)
    pgrid = Grid(float(p[0]), float(p[-1]), n)
    return GridWavefunction(pgrid, spectrum)


def position_representation(state_p: GridWavefunction) -> GridWavefunction:
    """Inverse of momentum_representation: back from the dual momentum grid."""
    n = state_p.grid.count
    dp = state_p.grid.spacing
    x = 2.0 * np.pi * np.fft.fftshift(np.fft.fftfreq(n, d=dp))
    spectrum = state_p.values * np.exp(1j * state_p.grid.points * x[0])
    values = np.fft.ifft(np.fft.ifftshift(spectrum)) * n * dp / math.sqrt(2.0 * math.pi)
    values *= np.exp(1j * (x - x[0]) * state_p.grid.min)
    xgrid = Grid(float(x[0]), float(x[-1]), n)
    return GridWavefunction(xgrid, values)


def state_variance(density: ProbabilityDensity) -> float:
    """Variance of a grid density: second moment minus squared first moment."""
    x = density.grid.points
    w = density.grid.weights
    fw = density.values * w
    mean = float(fw @ x)
    second = float(fw @ (x * x))
    return second - mean * mean
