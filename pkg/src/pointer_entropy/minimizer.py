"""Search for minimal-entropy states over truncated number-state superpositions.

For a fixed apparatus the squeezed vacuum with position variance
delta_x/(2 delta_p) minimizes the collective entropy, and it is the unique
minimizer up to a global phase.  This module reproduces that numerically:
a Nelder-Mead simplex search over the real and imaginary parts of the
superposition coefficients, restarted from random initial points.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .apparatus import NoiseTerms
from .bounds import minimal_variance, optimal_bound
from .distributions import convolve_arrays
from .entropy import entropy_of_samples, marginal_entropies
from .exceptions import (CapabilityError, DomainError, NonConvergenceError,
                         NumericalConsistencyError, SearchError)
from .states import FOCK_N_MAX, FockSuperposition, Grid, hermite_functions, trapezoid

_REFLECTION = 1.0
_EXPANSION = 2.0
_CONTRACTION = 0.5
_SHRINK = 0.5

#: Grid used inside the search objective; coarser than the default but
#: still far below the entropy tolerance it must support.
_OBJECTIVE_POINTS = 2049

#: Maximum fresh-simplex polish rounds per restart.
_POLISH_ROUNDS = 6


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for the minimal-entropy search."""

    n_max: int = 12
    max_iters: int = 5000
    simplex_tol: float = 1e-9
    restarts: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.n_max < 1:
            raise DomainError(f"n_max must be at least 1, got {self.n_max}")
        if self.n_max > FOCK_N_MAX:
            raise CapabilityError(f"n_max={self.n_max} exceeds {FOCK_N_MAX}")
        if self.simplex_tol <= 0.0:
            raise DomainError("simplex_tol must be positive")
        if self.max_iters < 1 or self.restarts < 1:
            raise DomainError("max_iters and restarts must be positive")


@dataclass(frozen=True)
class NelderMeadResult:
    x: np.ndarray
    value: float
    iterations: int
    converged: bool


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    """Outcome of the minimal-entropy search.

    coeffs are the normalized superposition coefficients of the winning
    restart (global phase fixed so the largest one is real positive);
    entropy is recomputed on the standard grids.  restarts holds the
    per-restart outcomes for uniqueness probing.
    """

    coeffs: np.ndarray
    entropy: float
    iterations: int
    converged: bool
    restarts: tuple = field(default=())


def nelder_mead(objective: Callable[[np.ndarray], float], init: Sequence[float],
                config: OptimizerConfig) -> NelderMeadResult:
    """Downhill simplex minimization (reflection 1, expansion 2,
    contraction 1/2, shrink 1/2).

    Stops when the objective spread across the simplex drops below
    config.simplex_tol, or after config.max_iters iterations.  A
    non-finite objective value mid-search raises SearchError carrying the
    best point seen so far.
    """
    x0 = np.asarray(init, dtype=float)
    if x0.ndim != 1 or x0.size == 0:
        raise DomainError("initial point must be a non-empty 1-D vector")
    dim = x0.size
    best: list = [x0.copy(), math.inf]

    def call(x: np.ndarray) -> float:
        value = float(objective(x))
        if not math.isfinite(value):
            raise SearchError("objective returned a non-finite value",
                              best_point=best[0].copy(), best_value=best[1])
        if value < best[1]:
            best[0], best[1] = x.copy(), value
        return value

    f0 = float(objective(x0))
    if not math.isfinite(f0):
        raise DomainError("objective is not finite at the initial point")
    best[1] = f0

    simplex = [x0]
    for i in range(dim):
        step = 0.15 * abs(x0[i]) if x0[i] != 0.0 else 0.1
        vertex = x0.copy()
        vertex[i] += step
        simplex.append(vertex)
    values = [f0] + [call(v) for v in simplex[1:]]
    simplex = np.asarray(simplex)
    values = np.asarray(values)

    iterations = 0
    converged = False
    while iterations < config.max_iters:
        order = np.argsort(values, kind="stable")
        simplex, values = simplex[order], values[order]
        if values[-1] - values[0] < config.simplex_tol:
            converged = True
            break
        iterations += 1

        centroid = simplex[:-1].mean(axis=0)
        reflected = centroid + _REFLECTION * (centroid - simplex[-1])
        f_reflected = call(reflected)
        if values[0] <= f_reflected < values[-2]:
            simplex[-1], values[-1] = reflected, f_reflected
            continue
        if f_reflected < values[0]:
            expanded = centroid + _EXPANSION * (reflected - centroid)
            f_expanded = call(expanded)
            if f_expanded < f_reflected:
                simplex[-1], values[-1] = expanded, f_expanded
            else:
                simplex[-1], values[-1] = reflected, f_reflected
            continue
        if f_reflected < values[-1]:
            outside = centroid + _CONTRACTION * (reflected - centroid)
            f_outside = call(outside)
            if f_outside <= f_reflected:
                simplex[-1], values[-1] = outside, f_outside
                continue
        else:
            inside = centroid - _CONTRACTION * (centroid - simplex[-1])
            f_inside = call(inside)
            if f_inside < values[-1]:
                simplex[-1], values[-1] = inside, f_inside
                continue
        for i in range(1, dim + 1):
            simplex[i] = simplex[0] + _SHRINK * (simplex[i] - simplex[0])
            values[i] = call(simplex[i])

    order = np.argsort(values, kind="stable")
    return NelderMeadResult(x=simplex[order[0]].copy(), value=float(values[order[0]]),
                            iterations=iterations, converged=converged)


class CollectiveEntropyObjective:
    """Collective entropy as a function of packed superposition coefficients.

    The parameter vector holds the real parts followed by the imaginary
    parts of c_0..c_n_max; the coefficients are normalized inside, so the
    search stays unconstrained.  Grids and the Hermite-function table are
    fixed per instance, which makes a single evaluation cheap.
    """

    def __init__(self, noise: NoiseTerms, n_max: int,
                 points: int = _OBJECTIVE_POINTS):
        self.noise = noise
        self.n_max = n_max
        half = 8.0 * math.sqrt(n_max + 0.5) + 2.0
        self.grid = Grid(-half, half, points)
        self._table = hermite_functions(n_max, self.grid.points)
        phases = (-1j) ** np.arange(n_max + 1)
        self._momentum_table = phases[:, None] * self._table
        self.dim = 2 * (n_max + 1)

    def unpack(self, x: np.ndarray) -> np.ndarray:
        n = self.n_max + 1
        c = x[:n] + 1j * x[n:]
        norm = math.sqrt(float(np.sum(np.abs(c) ** 2)))
        if norm < 1e-9:
            return None
        return c / norm

    def __call__(self, x: np.ndarray) -> float:
        c = self.unpack(np.asarray(x, dtype=float))
        if c is None:
            return 1e9  # degenerate direction, bounce the simplex away
        total = 0.0
        for table, delta in ((self._table, self.noise.delta_x),
                             (self._momentum_table, self.noise.delta_p)):
            amplitude = c @ table
            density = amplitude.real ** 2 + amplitude.imag ** 2
            density /= trapezoid(density, self.grid.spacing)
            out_grid, smoothed = convolve_arrays(density, self.grid, delta)
            np.clip(smoothed, 0.0, None, out=smoothed)
            smoothed /= trapezoid(smoothed, out_grid.spacing)
            total += entropy_of_samples(smoothed, out_grid.spacing)
        return total


def _canonical_phase(coeffs: np.ndarray) -> np.ndarray:
    pivot = int(np.argmax(np.abs(coeffs)))
    phase = coeffs[pivot] / abs(coeffs[pivot])
    rotated = coeffs * np.conj(phase)
    rotated[pivot] = abs(coeffs[pivot]) + 0.0j  # kill rounding in the pivot
    return rotated / math.sqrt(float(np.sum(np.abs(rotated) ** 2)))


def _recentered(coeffs: np.ndarray) -> np.ndarray:
    """Displace a superposition so its position/momentum means vanish.

    The collective entropy is displacement-invariant in the continuum, so
    the search landscape has a nearly flat valley of displaced copies of
    each state; jumping back to the centered representative turns a long
    simplex walk into one step.  Uses the exact (truncated) displacement
    operator, built by diagonalizing its Hermitian generator.
    """
    n = coeffs.size - 1
    ladder = np.diag(np.sqrt(np.arange(1.0, n + 1.0)), k=1)
    mean_a = complex(np.vdot(coeffs, ladder @ coeffs))
    if abs(mean_a) < 1e-12:
        return coeffs
    generator = -1j * (np.conj(mean_a) * ladder - mean_a * ladder.conj().T)
    eigvals, eigvecs = np.linalg.eigh(generator)
    displaced = (eigvecs * np.exp(1j * eigvals)) @ eigvecs.conj().T @ coeffs
    return displaced / math.sqrt(float(np.sum(np.abs(displaced) ** 2)))


def _pack(coeffs: np.ndarray) -> np.ndarray:
    return np.concatenate([coeffs.real, coeffs.imag])


def _search_restart(objective: CollectiveEntropyObjective, init: np.ndarray,
                    config: OptimizerConfig) -> NelderMeadResult:
    # Nelder-Mead stalls occasionally in high dimension; between rounds,
    # re-seed a fresh simplex at the current best point and offer the
    # displacement-centered copy of the state, keeping whichever evaluates
    # lower.  Both moves are cheap and strictly downhill.
    result = nelder_mead(objective, init, config)
    iterations = result.iterations
    for _ in range(_POLISH_ROUNDS):
        centered = _pack(_recentered(objective.unpack(result.x)))
        if objective(centered) < result.value:
            start = centered
        else:
            start = result.x
        polished = nelder_mead(objective, start, config)
        iterations += polished.iterations
        improved = result.value - polished.value > config.simplex_tol
        result = NelderMeadResult(polished.x, polished.value, iterations,
                                  polished.converged)
        if not improved:
            break
    return result


def find_minimal_entropy_state(noise: NoiseTerms,
                               config: OptimizerConfig | None = None) -> OptimizationResult:
    """Minimize the collective entropy over truncated number-state superpositions.

    Runs config.restarts independent Nelder-Mead searches from seeded
    random starting coefficients and returns the best outcome (ties go to
    the earlier restart).  Deterministic for a fixed seed.  Raises
    NonConvergenceError (with the best result attached) when no restart
    converges.
    """
    if config is None:
        config = OptimizerConfig()
    objective = CollectiveEntropyObjective(noise, config.n_max)
    rng = np.random.default_rng(config.seed)
    inits = rng.standard_normal((config.restarts, objective.dim))

    opt, _ = optimal_bound(noise)
    floor = opt - 1e-4
    outcomes = []
    for init in inits:
        raw = _search_restart(objective, init, config)
        coeffs = _canonical_phase(objective.unpack(raw.x))
        entropy = marginal_entropies(FockSuperposition(coeffs), noise).collective
        if entropy < floor:
            raise NumericalConsistencyError(
                f"search entropy {entropy:.8f} undercuts the optimal bound "
                f"{opt:.8f} beyond 1e-4")
        outcomes.append(OptimizationResult(coeffs=coeffs, entropy=entropy,
                                           iterations=raw.iterations,
                                           converged=raw.converged))

    winner = min(range(len(outcomes)), key=lambda i: (outcomes[i].entropy, i))
    best = outcomes[winner]
    result = OptimizationResult(coeffs=best.coeffs, entropy=best.entropy,
                                iterations=best.iterations, converged=best.converged,
                                restarts=tuple(outcomes))
    if not any(o.converged for o in outcomes):
        raise NonConvergenceError("no restart converged", result=result)
    return result


def squeezed_fock_coefficients(sigma2: float, n_max: int) -> np.ndarray:
    """Number-state amplitudes of the squeezed vacuum with position variance sigma2.

    Only even components are populated:
    c_2k = (cosh r)^(-1/2) sqrt((2k)!)/(2^k k!) (-tanh r)^k with
    r = -ln(2 sigma2)/2.  The array is not renormalized, so the shortfall
    of sum c^2 from 1 measures the truncation.
    """
    if not (math.isfinite(sigma2) and sigma2 > 0.0):
        raise DomainError(f"sigma2 must be positive, got {sigma2!r}")
    r = -0.5 * math.log(2.0 * sigma2)
    tanh_r = math.tanh(r)
    coeffs = np.zeros(n_max + 1)
    for k in range(0, n_max // 2 + 1):
        log_term = 0.5 * math.lgamma(2 * k + 1) - k * math.log(2.0) - math.lgamma(k + 1)
        coeffs[2 * k] = (math.cosh(r)) ** -0.5 * math.exp(log_term) * (-tanh_r) ** k
    return coeffs


def fidelity_with_squeezed(coeffs, sigma2: float) -> float:
    """Overlap |<squeezed(sigma2)|psi>|^2 of a superposition with a squeezed vacuum.

    The squeezed expansion is carried deep enough that its own truncation
    deficit drops below 1e-10; extreme variances where that needs more
    than 64 number states raise CapabilityError.
    """
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    norm = math.sqrt(float(np.sum(np.abs(c) ** 2)))
    if norm < 1e-12:
        raise DomainError("coefficients have zero norm")
    c = c / norm
    depth = max(c.size - 1, 2)
    while True:
        reference = squeezed_fock_coefficients(sigma2, depth)
        deficit = 1.0 - float(np.sum(reference ** 2))
        if deficit < 1e-10:
            break
        if depth >= FOCK_N_MAX:
            raise CapabilityError(
                f"squeezed expansion at n={FOCK_N_MAX} still truncates "
                f"{deficit:.3e} of sigma2={sigma2}")
        depth = min(depth + 8, FOCK_N_MAX)
    overlap = np.sum(reference[:c.size] * c)
    return float(abs(overlap) ** 2)
