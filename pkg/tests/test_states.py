import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pointer_entropy import (CapabilityError, DomainError, FockSuperposition, Grid,
                             GridWavefunction, ProbabilityDensity, SqueezedVacuum,
                             TruncationError, hermite_wavefunction, momentum_density,
                             momentum_representation, position_density,
                             position_representation, state_variance)
from pointer_entropy.states import normalized_density, trapezoid

from .conftest import gaussian_density, gaussian_grid


def explicit_hermite_value(n: int, x: float) -> float:
    """Oracle: psi_n via the explicit Hermite polynomial, not the recurrence."""
    polys = {
        0: lambda t: 1.0,
        1: lambda t: 2 * t,
        2: lambda t: 4 * t**2 - 2,
        3: lambda t: 8 * t**3 - 12 * t,
        4: lambda t: 16 * t**4 - 48 * t**2 + 12,
        5: lambda t: 32 * t**5 - 160 * t**3 + 120 * t,
    }
    norm = 1.0 / math.sqrt(2.0**n * math.factorial(n) * math.sqrt(math.pi))
    return norm * polys[n](x) * math.exp(-0.5 * x * x)


class TestGrid:
    def test_spacing(self):
        grid = Grid(-2.0, 2.0, 5)
        assert grid.spacing == 1.0
        assert np.allclose(grid.points, [-2, -1, 0, 1, 2])

    def test_invalid(self):
        with pytest.raises(DomainError):
            Grid(1.0, -1.0, 10)
        with pytest.raises(DomainError):
            Grid(0.0, 1.0, 1)

    def test_widened_preserves_spacing(self):
        grid = Grid(-1.0, 1.0, 201)
        wide = grid.widened(0.5)
        assert wide.spacing == pytest.approx(grid.spacing, rel=1e-15)
        assert wide.min <= grid.min - 0.5 and wide.max >= grid.max + 0.5


class TestProbabilityDensity:
    def test_rejects_negative(self):
        grid = Grid(0.0, 1.0, 101)
        values = np.full(101, 1.0)
        values[3] = -0.1
        with pytest.raises(DomainError):
            ProbabilityDensity(grid, values)

    def test_rejects_unnormalized(self):
        grid = Grid(0.0, 1.0, 101)
        with pytest.raises(DomainError):
            ProbabilityDensity(grid, np.full(101, 2.0))

    def test_uniform_is_valid(self):
        grid = Grid(0.0, 1.0, 101)
        density = ProbabilityDensity(grid, np.ones(101))
        assert density.integral() == pytest.approx(1.0, abs=1e-12)


class TestSqueezedVacuum:
    def test_vacuum_variances(self):
        state = SqueezedVacuum(0.5)
        assert state_variance(position_density(state)) == pytest.approx(0.5, abs=1e-6)
        assert state_variance(momentum_density(state)) == pytest.approx(0.5, abs=1e-6)

    def test_momentum_variance_quarter(self):
        state = SqueezedVacuum(1.0)
        assert state_variance(momentum_density(state)) == pytest.approx(0.25, abs=1e-6)

    def test_negative_variance_rejected(self):
        with pytest.raises(DomainError):
            SqueezedVacuum(-1.0)

    @given(st.floats(min_value=0.05, max_value=20.0))
    @settings(max_examples=25, deadline=None)
    def test_uncertainty_product(self, sigma2):
        state = SqueezedVacuum(sigma2)
        product = (state_variance(position_density(state))
                   * state_variance(momentum_density(state)))
        assert product == pytest.approx(0.25, abs=1e-6)


class TestHermite:
    def test_ground_state_at_origin(self):
        assert hermite_wavefunction(0, 0.0) == pytest.approx(math.pi**-0.25, abs=1e-15)

    def test_odd_parity_zero(self):
        assert hermite_wavefunction(1, 0.0) == 0.0

    def test_n5_matches_explicit_polynomial(self):
        # frozen from the 50-digit evaluation of the explicit H5 form
        assert hermite_wavefunction(5, 1.3) == pytest.approx(
            -0.3993914628137507, abs=1e-13)
        assert hermite_wavefunction(5, 1.3) == pytest.approx(
            explicit_hermite_value(5, 1.3), abs=1e-13)

    @pytest.mark.parametrize("n", [0, 1, 2, 7, 20, 40, 64])
    def test_normalization(self, n):
        grid = Grid(-30.0, 30.0, 8193)
        values = hermite_wavefunction(n, grid.points)
        assert trapezoid(values**2, grid.spacing) == pytest.approx(1.0, abs=1e-10)

    def test_capability_limit(self):
        with pytest.raises(CapabilityError):
            hermite_wavefunction(65, 0.0)

    def test_vacuum_variance_half(self):
        grid = Grid(-12.0, 12.0, 4097)
        density = normalized_density(grid, hermite_wavefunction(0, grid.points) ** 2)
        assert state_variance(density) == pytest.approx(0.5, abs=1e-9)


class TestFockSuperposition:
    def test_normalizes_coefficients(self):
        state = FockSuperposition([3.0, 4.0])
        assert np.sum(np.abs(state.coeffs) ** 2) == pytest.approx(1.0, abs=1e-12)

    def test_vacuum_fock_matches_squeezed(self):
        fock = position_density(FockSuperposition([1.0]))
        squeezed = position_density(SqueezedVacuum(0.5))
        assert fock.grid == squeezed.grid
        assert np.max(np.abs(fock.values - squeezed.values)) < 1e-9

    def test_fock1_closed_form(self):
        density = position_density(FockSuperposition([0.0, 1.0]))
        x = density.grid.points
        target = 2.0 * x**2 * np.exp(-(x**2)) / math.sqrt(math.pi)
        assert np.max(np.abs(density.values - target)) < 1e-9
        mid = (density.grid.count - 1) // 2
        assert density.values[mid] == 0.0

    def test_fock1_variance(self):
        density = position_density(FockSuperposition([0.0, 1.0]))
        assert state_variance(density) == pytest.approx(1.5, abs=1e-9)

    def test_momentum_same_shape_as_position(self):
        state = FockSuperposition([0.0, 1.0])
        pos = position_density(state)
        mom = momentum_density(state)
        assert np.max(np.abs(pos.values - mom.values)) < 1e-12

    def test_density_matches_per_point_summation(self, rng):
        coeffs = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        state = FockSuperposition(coeffs)
        grid = Grid(-10.0, 10.0, 301)
        density = position_density(state, grid)
        oracle = np.array([
            abs(sum(state.coeffs[n] * explicit_hermite_value(n, float(x))
                    for n in range(5))) ** 2
            for x in grid.points
        ])
        oracle /= trapezoid(oracle, grid.spacing)
        assert np.max(np.abs(density.values - oracle)) < 5e-13

    @given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=20, deadline=None)
    def test_real_superpositions_normalized(self, n_top, seed):
        coeffs = np.random.default_rng(seed).standard_normal(n_top + 1)
        state = FockSuperposition(coeffs)
        for density in (position_density(state), momentum_density(state)):
            assert density.integral() == pytest.approx(1.0, abs=1e-9)

    def test_truncation_error_reports_deficit(self):
        with pytest.raises(TruncationError) as err:
            position_density(SqueezedVacuum(0.5), Grid(-2.0, 2.0, 101))
        assert err.value.deficit > 1e-3


class TestGridWavefunction:
    def _gaussian_state(self, count=2049):
        grid = Grid(-10.0, 10.0, count)
        values = np.exp(-grid.points**2 / 2.0).astype(complex)
        return GridWavefunction(grid, values)

    def test_momentum_variance_of_gaussian(self):
        # analytic Fourier transform of a variance-1/2 Gaussian has variance 1/2
        state = self._gaussian_state()
        assert state_variance(momentum_density(state)) == pytest.approx(0.5, abs=1e-6)

    def test_round_trip(self):
        grid = Grid(-10.0, 10.0, 2049)
        values = np.exp(-grid.points**2 / 2.0) * np.exp(0.7j * grid.points)
        state = GridWavefunction(grid, values)
        spectrum = momentum_representation(state)
        back = position_representation(spectrum)
        assert np.max(np.abs(back.values - state.values)) < 1e-12
        original = momentum_density(state, spectrum.grid)
        round_trip = momentum_density(back, spectrum.grid)
        assert np.max(np.abs(round_trip.values - original.values)) < 1e-8

    def test_momentum_density_shifts_with_phase(self):
        # exp(i b x) displaces the momentum density by b
        grid = Grid(-12.0, 12.0, 2049)
        values = np.exp(-grid.points**2 / 2.0) * np.exp(1.5j * grid.points)
        state = GridWavefunction(grid, values)
        pgrid = Grid(-8.0, 11.0, 1901)
        density = momentum_density(state, pgrid)
        mean = float(density.grid.weights @ (density.values * density.grid.points))
        assert mean == pytest.approx(1.5, abs=1e-6)


class TestStateVariance:
    def test_gaussian(self):
        density = gaussian_density(1.0, gaussian_grid(1.0))
        assert state_variance(density) == pytest.approx(1.0, abs=1e-6)

    def test_uniform_third(self):
        grid = Grid(-1.0, 1.0, 2001)
        density = ProbabilityDensity(grid, np.full(2001, 0.5))
        assert state_variance(density) == pytest.approx(1.0 / 3.0, abs=1e-6)
