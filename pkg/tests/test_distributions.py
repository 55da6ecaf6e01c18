import math

import numpy as np
import pytest

from pointer_entropy import (DomainError, FockSuperposition, Grid, NoiseTerms,
                             SqueezedVacuum, convolve_densities, convolve_gaussian,
                             inferred_momentum_density, inferred_position_density,
                             joint_inferred_density, marginalize, position_density,
                             momentum_density, state_variance, wigner_grid)
from pointer_entropy.distributions import _trapezoid_2d, _wigner_quadrature
from pointer_entropy.selfcheck import direct_convolution_reference, fine_grid

from .conftest import gaussian_density, gaussian_grid

VACUUM_NOISE = NoiseTerms(2**-0.5, 2**-0.5)


class TestConvolveGaussian:
    def test_gaussian_closure(self):
        density = gaussian_density(1.21, gaussian_grid(1.21))
        out = convolve_gaussian(density, 0.8)
        assert state_variance(out) == pytest.approx(1.21 + 0.64, abs=1e-6)

    def test_delta_limit_identity(self):
        density = position_density(FockSuperposition([0.6, 0.0, 0.8]))
        out = convolve_gaussian(density, 1e-8)
        pad = (out.grid.count - density.grid.count) // 2
        inner = out.values[pad:out.grid.count - pad]
        assert np.max(np.abs(inner - density.values)) < 1e-4

    def test_matches_direct_oracle(self):
        density = position_density(FockSuperposition([0.0, 1.0]))
        out = convolve_gaussian(density, 0.7)
        dense_input = position_density(FockSuperposition([0.0, 1.0]),
                                       fine_grid(density.grid))
        oracle = direct_convolution_reference(dense_input, 0.7, out.grid.points)
        assert np.max(np.abs(out.values - oracle)) < 1e-8

    def test_rejects_nonpositive_width(self):
        density = gaussian_density(1.0, gaussian_grid(1.0))
        with pytest.raises(DomainError):
            convolve_gaussian(density, 0.0)
        with pytest.raises(DomainError):
            convolve_gaussian(density, -0.3)


class TestConvolveDensities:
    def test_gaussian_sum(self):
        grid = Grid(-12.0, 12.0, 4097)
        f = gaussian_density(1.0, grid)
        g = gaussian_density(0.5, grid)
        out = convolve_densities(f, g)
        assert state_variance(out) == pytest.approx(1.5, abs=1e-6)

    def test_spacing_mismatch(self):
        f = gaussian_density(1.0, Grid(-10.0, 10.0, 1001))
        g = gaussian_density(1.0, Grid(-10.0, 10.0, 999))
        with pytest.raises(DomainError):
            convolve_densities(f, g)


class TestInferredDensities:
    def test_squeezed_position_closure(self):
        out = inferred_position_density(SqueezedVacuum(0.8), NoiseTerms(0.9, 0.4))
        assert state_variance(out) == pytest.approx(0.8 + 0.81, abs=1e-6)

    def test_vacuum_unit_variance(self):
        out = inferred_position_density(SqueezedVacuum(0.5), VACUUM_NOISE)
        assert state_variance(out) == pytest.approx(1.0, abs=1e-6)
        out_p = inferred_momentum_density(SqueezedVacuum(0.5), VACUUM_NOISE)
        assert state_variance(out_p) == pytest.approx(1.0, abs=1e-6)

    def test_squeezed_momentum_closure(self):
        out = inferred_momentum_density(SqueezedVacuum(2.0), NoiseTerms(0.7, 0.6))
        assert state_variance(out) == pytest.approx(0.125 + 0.36, abs=1e-6)

    @pytest.mark.parametrize("delta", [0.5])
    def test_fock1_variance_additivity(self, delta):
        noise = NoiseTerms(delta, delta)
        out = inferred_position_density(FockSuperposition([0.0, 1.0]), noise)
        assert state_variance(out) == pytest.approx(1.75, abs=1e-5)
        out_p = inferred_momentum_density(FockSuperposition([0.0, 1.0]), noise)
        assert state_variance(out_p) == pytest.approx(1.75, abs=1e-5)


class TestWigner:
    def test_vacuum_peak(self):
        grid = Grid(-8.0, 8.0, 257)
        wig = wigner_grid(SqueezedVacuum(0.5), grid, grid)
        mid = 128
        assert wig.values[mid, mid] == pytest.approx(1.0 / math.pi, abs=1e-12)

    def test_fock1_negative_at_origin(self):
        # Laguerre closed form: W_n(0,0) = (-1)^n / pi
        grid = Grid(-8.0, 8.0, 257)
        wig = wigner_grid(FockSuperposition([0.0, 1.0]), grid, grid)
        mid = 128
        assert wig.values[mid, mid] == pytest.approx(-1.0 / math.pi, abs=1e-9)

    def test_squeezed_closed_form_matches_quadrature(self):
        state = SqueezedVacuum(2.0)
        xgrid = Grid(-14.0, 14.0, 257)
        pgrid = Grid(-6.0, 6.0, 257)
        closed = wigner_grid(state, xgrid, pgrid).values
        numeric = _wigner_quadrature(state, xgrid, pgrid)
        assert np.max(np.abs(closed - numeric)) < 1e-7

    def test_marginal_recovers_position_density(self):
        from pointer_entropy.states import hermite_functions

        state = FockSuperposition([0.6, 0.0, 0.8])
        xgrid = Grid(-15.0, 15.0, 513)
        pgrid = Grid(-15.0, 15.0, 513)
        wig = wigner_grid(state, xgrid, pgrid)
        marginal = wig.values @ pgrid.weights
        table = hermite_functions(2, xgrid.points)
        target = np.abs(np.tensordot(state.coeffs, table, axes=(0, 0))) ** 2
        assert np.max(np.abs(marginal - target)) < 1e-6

    def test_magnitude_bound(self):
        grid = Grid(-12.0, 12.0, 257)
        wig = wigner_grid(FockSuperposition([0.5, 0.5, 0.5, 0.5]), grid, grid)
        assert np.max(np.abs(wig.values)) <= 1.0 / math.pi + 1e-9


class TestJointDensity:
    def test_vacuum_origin_value(self):
        joint = joint_inferred_density(SqueezedVacuum(0.5), VACUUM_NOISE)
        ix = (joint.xgrid.count - 1) // 2
        ip = (joint.pgrid.count - 1) // 2
        assert joint.values[ix, ip] == pytest.approx(1.0 / (2.0 * math.pi), abs=1e-7)

    def test_fock1_nonnegative_at_minimal_product(self):
        joint = joint_inferred_density(FockSuperposition([0.0, 1.0]), VACUUM_NOISE)
        assert joint.values.min() >= 0.0

    def test_normalization(self, rng):
        state = FockSuperposition(rng.standard_normal(4) + 1j * rng.standard_normal(4))
        joint = joint_inferred_density(state, NoiseTerms(1.1, 0.8))
        assert _trapezoid_2d(joint.values, joint.xgrid, joint.pgrid) == pytest.approx(
            1.0, abs=1e-5)

    def test_symmetric_vacuum_marginals_identical(self):
        joint = joint_inferred_density(SqueezedVacuum(0.5), VACUUM_NOISE)
        mx = marginalize(joint, "X")
        mp_ = marginalize(joint, "P")
        assert np.max(np.abs(mx.values - mp_.values)) < 1e-9


class TestMarginalize:
    def test_consistency_with_1d_convolutions(self, rng):
        states = [SqueezedVacuum(0.5), FockSuperposition([0.0, 1.0]),
                  FockSuperposition(rng.standard_normal(5) + 1j * rng.standard_normal(5))]
        noises = [VACUUM_NOISE, NoiseTerms(1.2, 0.6)]
        for state in states:
            for noise in noises:
                joint = joint_inferred_density(state, noise)
                for axis, bare_of, delta in (
                        ("X", position_density, noise.delta_x),
                        ("P", momentum_density, noise.delta_p)):
                    bare = bare_of(state)
                    dense = bare_of(state, fine_grid(bare.grid))
                    kept = marginalize(joint, axis)
                    reference = direct_convolution_reference(dense, delta,
                                                             kept.grid.points)
                    assert np.max(np.abs(kept.values - reference)) < 1e-5

    def test_separable_joint_recovers_factors(self):
        xgrid = Grid(-10.0, 10.0, 401)
        pgrid = Grid(-12.0, 12.0, 501)
        fx = np.exp(-xgrid.points**2 / 2.0)
        fx /= np.trapezoid(fx, dx=xgrid.spacing)
        gp = np.exp(-(pgrid.points - 1.0) ** 2 / 1.4)
        gp /= np.trapezoid(gp, dx=pgrid.spacing)
        from pointer_entropy.distributions import JointDensity
        joint = JointDensity(xgrid, pgrid, np.outer(fx, gp))
        assert np.max(np.abs(marginalize(joint, "X").values - fx)) < 1e-9
        assert np.max(np.abs(marginalize(joint, "P").values - gp)) < 1e-9

    def test_invalid_axis(self):
        joint = joint_inferred_density(SqueezedVacuum(0.5), VACUUM_NOISE)
        with pytest.raises(DomainError):
            marginalize(joint, "Q")
