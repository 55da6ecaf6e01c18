"""Runtime self-check suites behind the `verify` CLI command.

Each suite re-derives one family of guaranteed inequalities or
consistency identities with machinery independent of the code paths it
checks, and reports its worst margin (slack above the allowed tolerance;
negative means failure).
"""

import math
from dataclasses import dataclass

import numpy as np

from .apparatus import MeasurementSetup, NoiseTerms, noise_product, noise_terms
from .bounds import (BOUND_TOLERANCE, BoundParams, balanced_bound_state_free,
                     gaussian_weight, lieb_convolution_check, lieb_lower_bound,
                     maximize_single_param_bound, minimal_variance, optimal_bound,
                     single_param_bound, wehrl_constant)
from .distributions import joint_inferred_density, marginalize
from .entropy import (differential_entropy, marginal_entropies,
                      squeezed_collective_entropy_closed_form)
from .states import (FockSuperposition, Grid, ProbabilityDensity, SqueezedVacuum,
                     momentum_density, normalized_density, position_density,
                     trapezoid_weights)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    margin: float
    detail: str


def direct_convolution_reference(density: ProbabilityDensity, delta: float,
                                 out_points: np.ndarray) -> np.ndarray:
    """Dense O(N^2) quadrature convolution, the designated oracle.

    Sums the Gaussian kernel directly against the input samples at the
    requested output points.  Callers supply the input at 4x the working
    resolution (see fine_grid) so the oracle does not inherit the
    production grid.
    """
    weights = trapezoid_weights(density.grid.count, density.grid.spacing)
    kernel = np.exp(-0.5 * ((out_points[:, None] - density.grid.points[None, :])
                            / delta) ** 2)
    kernel /= math.sqrt(2.0 * math.pi) * delta
    kernel[kernel < 1e-300] = 0.0
    out = kernel @ (density.values * weights)
    spacing = out_points[1] - out_points[0]
    return out / float(spacing * (out.sum() - 0.5 * (out[0] + out[-1])))


def fine_grid(grid: Grid, factor: int = 4) -> Grid:
    """Same extent at `factor` times the resolution."""
    return Grid(grid.min, grid.max, factor * (grid.count - 1) + 1)


def _random_fock(rng: np.random.Generator, n_top: int) -> FockSuperposition:
    c = rng.standard_normal(n_top + 1) + 1j * rng.standard_normal(n_top + 1)
    return FockSuperposition(c)


def check_noise_floor(seed: int = 0, samples: int = 10_000) -> SuiteResult:
    """Random physical setups never undercut the product floor of 1/2."""
    rng = np.random.default_rng(seed)
    worst = math.inf
    for _ in range(samples):
        k1, k2, t, s1, s2 = 10.0 ** rng.uniform(-2.0, 2.0, size=5)
        product = noise_product(noise_terms(MeasurementSetup(k1, k2, t, s1, s2)))
        worst = min(worst, product - 0.5)
    equality = MeasurementSetup(1.0, 1.0, 1.0, 0.25, 0.25)
    eq_err = abs(noise_product(noise_terms(equality)) - 0.5)
    margin = min(worst + 1e-12, 1e-12 - eq_err)
    return SuiteResult("noise-floor", margin >= 0.0, margin,
                       f"{samples} setups, worst slack {worst:.3e}, "
                       f"equality error {eq_err:.3e}")


def check_bound_ordering(injected: NoiseTerms | None = None) -> SuiteResult:
    """Optimal bound dominates the floor, the single-parameter family and
    the state-free specializations on a log grid of physical products."""
    products = np.logspace(math.log10(0.5), 3.0, 50)
    lambdas = np.linspace(0.0, 1.0, 101)
    omega = wehrl_constant()
    worst = math.inf
    for product in products:
        noise = NoiseTerms(math.sqrt(product), math.sqrt(product))
        opt, opt_lam = optimal_bound(noise)
        num_opt, num_lam = maximize_single_param_bound(noise)
        worst = min(worst,
                    opt - omega,
                    opt - balanced_bound_state_free(noise),
                    opt - single_param_bound(noise, 0.0),
                    1e-9 - abs(opt - num_opt),
                    1e-9 - abs(opt_lam - num_lam),
                    min(opt - single_param_bound(noise, lam) for lam in lambdas))
    detail = f"50 products in [0.5, 1e3], worst slack {worst:.3e}"
    if injected is not None and injected.is_subminimal:
        detail += (f"; injected product {injected.product:.6g} flagged below "
                   f"the physical minimum 0.5, ordering not applicable")
    passed = worst >= -1e-12
    return SuiteResult("bound-ordering", passed, worst, detail)


def _gaussian_density(variance: float, grid: Grid) -> ProbabilityDensity:
    values = np.exp(-grid.points ** 2 / (2.0 * variance))
    return normalized_density(grid, values)


def check_lieb(seed: int = 0) -> SuiteResult:
    """Convolution inequality: equality for Gaussians at the Gaussian
    weight, strict gap elsewhere, and dominance for non-Gaussian inputs."""
    grid = Grid(-22.0, 22.0, 8193)  # shared grid so convolutions line up
    f = _gaussian_density(1.0, grid)
    g = _gaussian_density(0.25, grid)
    lam_star = gaussian_weight(1.0, 0.5)
    lhs, rhs = lieb_convolution_check(f, g, lam_star)
    worst = BOUND_TOLERANCE - abs(lhs - rhs)
    lhs, rhs = lieb_convolution_check(f, g, 0.9 * lam_star)
    worst = min(worst, lhs - rhs - BOUND_TOLERANCE)

    bimodal = (np.exp(-0.5 * (grid.points - 2.0) ** 2)
               + np.exp(-0.5 * (grid.points + 2.0) ** 2))
    fb = normalized_density(grid, bimodal)
    gb = _gaussian_density(0.7, grid)
    for lam in (0.0, 0.3, 0.7, 1.0):
        lhs, rhs = lieb_convolution_check(fb, gb, lam)
        worst = min(worst, lhs - rhs + BOUND_TOLERANCE)
    return SuiteResult("lieb", worst >= 0.0, worst,
                       f"worst slack {worst:.3e} over equality/gap/bimodal checks")


def check_saturation() -> SuiteResult:
    """Squeezed states at the minimal variance saturate the optimal bound."""
    worst = math.inf
    for product, ratio in ((0.5, 1.0), (1.0, 2.0), (2.0, 0.5), (10.0, 1.5)):
        noise = NoiseTerms(math.sqrt(product * ratio), math.sqrt(product / ratio))
        state = SqueezedVacuum(minimal_variance(noise))
        measured = marginal_entropies(state, noise).collective
        opt, _ = optimal_bound(noise)
        worst = min(worst, BOUND_TOLERANCE - abs(measured - opt))
    return SuiteResult("saturation", worst >= 0.0, worst,
                       f"four products, worst slack {worst:.3e}")


def check_closed_form(seed: int = 0, samples: int = 20) -> SuiteResult:
    """Quadrature collective entropy of squeezed states matches the closed form."""
    rng = np.random.default_rng(seed)
    worst = math.inf
    for _ in range(samples):
        sigma2 = 10.0 ** rng.uniform(-1.0, 1.0)
        noise = NoiseTerms(10.0 ** rng.uniform(-0.5, 0.5),
                           10.0 ** rng.uniform(-0.5, 0.5))
        measured = marginal_entropies(SqueezedVacuum(sigma2), noise).collective
        closed = squeezed_collective_entropy_closed_form(sigma2, noise)
        worst = min(worst, BOUND_TOLERANCE - abs(measured - closed))
    return SuiteResult("closed-form", worst >= 0.0, worst,
                       f"{samples} random triples, worst slack {worst:.3e}")


def check_hirschman(seed: int = 0, samples: int = 30) -> SuiteResult:
    """Intrinsic deficit is non-negative, zero for squeezed vacua."""
    from .bounds import hirschman_deficit

    rng = np.random.default_rng(seed)
    worst = math.inf
    for _ in range(samples):
        deficit = hirschman_deficit(_random_fock(rng, int(rng.integers(1, 9))))
        worst = min(worst, deficit + BOUND_TOLERANCE)
    for _ in range(10):
        deficit = hirschman_deficit(SqueezedVacuum(10.0 ** rng.uniform(-1.0, 1.0)))
        worst = min(worst, BOUND_TOLERANCE - abs(deficit))
    return SuiteResult("hirschman", worst >= 0.0, worst,
                       f"{samples} random + 10 squeezed states, worst slack {worst:.3e}")


def check_marginals(seed: int = 0) -> SuiteResult:
    """Marginals of the smoothed joint match the 1-D convolutions."""
    rng = np.random.default_rng(seed)
    states = [SqueezedVacuum(0.5), FockSuperposition([0.0, 1.0]), _random_fock(rng, 3)]
    noises = [NoiseTerms(1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0)),
              NoiseTerms(1.2, 0.6)]
    worst = math.inf
    for state in states:
        for noise in noises:
            joint = joint_inferred_density(state, noise)
            bare_x = position_density(state)
            bare_p = momentum_density(state)
            for axis, bare, delta in (("X", position_density(state, fine_grid(bare_x.grid)),
                                       noise.delta_x),
                                      ("P", momentum_density(state, fine_grid(bare_p.grid)),
                                       noise.delta_p)):
                kept = marginalize(joint, axis)
                reference = direct_convolution_reference(bare, delta, kept.grid.points)
                gap = float(np.max(np.abs(kept.values - reference)))
                worst = min(worst, BOUND_TOLERANCE - gap)
    return SuiteResult("marginals", worst >= 0.0, worst,
                       f"3 states x 2 noises, worst sup-norm slack {worst:.3e}")


SUITES = {
    "noise-floor": check_noise_floor,
    "bound-ordering": check_bound_ordering,
    "lieb": check_lieb,
    "saturation": check_saturation,
    "closed-form": check_closed_form,
    "hirschman": check_hirschman,
    "marginals": check_marginals,
}


def run_suites(names=None, injected_noise: NoiseTerms | None = None,
               seed: int = 0) -> list[SuiteResult]:
    """Run the requested suites (all by default) and collect their results."""
    selected = list(SUITES) if not names else list(names)
    results = []
    for name in selected:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; available: {', '.join(SUITES)}")
        check = SUITES[name]
        if name == "bound-ordering":
            results.append(check(injected=injected_noise))
        elif name == "saturation":
            results.append(check())
        else:
            results.append(check(seed=seed))
    return results
