"""
Shooting Service
Nonlinear shooting by bisection on the unknown initial value p = v(a).

Each trial integrates v'' = f(r, v, v') from a + singular_offset with
v = p, v' = alpha and compares v(b) with beta. The bracket orientation says
which end of the bracket moves when v(b) overshoots beta.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Tuple

from bvpkit.models.core import Method, SolutionProfile, SolverReport
from bvpkit.models.errors import BracketError, DomainError, IntegrationError
from bvpkit.services.ivp_service import IntegratorConfig, IvpState, integrate


logger = logging.getLogger(__name__)


class Orientation(str, Enum):
    # v(b) - beta > 0 means p was too small
    OVERSHOOT_RAISES_LOWER = 'overshoot_raises_lower'
    # v(b) - beta > 0 means p was too large
    OVERSHOOT_RAISES_UPPER = 'overshoot_raises_upper'

    @property
    def sign(self):
        return 1.0 if self is Orientation.OVERSHOOT_RAISES_UPPER else -1.0

    def flipped(self):
        if self is Orientation.OVERSHOOT_RAISES_UPPER:
            return Orientation.OVERSHOOT_RAISES_LOWER
        return Orientation.OVERSHOOT_RAISES_UPPER


@dataclass(frozen=True)
class BracketSpec:
    lower: float
    upper: float
    orientation: Orientation = Orientation.OVERSHOOT_RAISES_UPPER

    def __post_init__(self):
        if not self.lower < self.upper:
            raise DomainError(f"bracket needs lower < upper, got [{self.lower}, {self.upper}]")
        object.__setattr__(self, 'orientation', Orientation(self.orientation))


@dataclass(frozen=True)
class ShootingConfig:
    tolerance: float = 1e-6
    max_iterations: int = 100
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be a positive integer")

    @property
    def resolvable(self):
        """Whether the integrator resolves v(b) finely enough to confirm the tolerance.

        An accepted step only bounds the local error of v by the absolute
        tolerance once v is near zero; a bisection tolerance at or below that
        floor would be met by integrator noise rather than by a better p.
        """
        return self.tolerance > self.integrator.abs_tolerance


class Shot(NamedTuple):
    profile: SolutionProfile
    terminal: float


class ShootingResult(NamedTuple):
    profile: SolutionProfile
    p_star: float
    report: SolverReport
    bracket: Tuple[float, float]


def _first_order_system(problem):
    rhs = problem.rhs

    def system(r, v, vp):
        return vp, rhs(r, v, vp)

    return system


def shoot_once(problem, p, config):
    """Integrate the initial value problem with v(a) = p; return the profile and v(b)"""
    if not math.isfinite(p):
        raise DomainError(f"shooting parameter must be finite, got {p!r}")

    start = IvpState(problem.integration_start, float(p), problem.left_neumann)
    try:
        trajectory, final = integrate(
            _first_order_system(problem), start, problem.domain_end, config.integrator
        )
    except IntegrationError as exc:
        exc.parameter = p
        raise
    return Shot(trajectory, final.value)


def solve_shooting(problem, bracket, config):
    """Bisect on p until |v(b) - beta| < tolerance.

    Every iteration shoots from the midpoint of the current bracket, so the
    first midpoint counts as iteration 1. Running out of iterations is not an
    error: the last profile comes back with an unconverged report. A tolerance
    the integrator cannot resolve never reports convergence.
    """
    beta = problem.right_dirichlet
    sign = bracket.orientation.sign

    _, low_terminal = shoot_once(problem, bracket.lower, config)
    _, high_terminal = shoot_once(problem, bracket.upper, config)
    if sign * (low_terminal - beta) > 0 or sign * (high_terminal - beta) < 0:
        raise BracketError(
            f"bracket [{bracket.lower}, {bracket.upper}] does not straddle beta={beta} "
            f"for orientation {bracket.orientation.value}: "
            f"v(b) - beta = {low_terminal - beta:.3e} at lower, {high_terminal - beta:.3e} at upper"
        )

    if not config.resolvable:
        logger.warning(
            "⚠ Tolerance %g is not above the integrator's absolute tolerance %g; "
            "shooting will not report convergence",
            config.tolerance, config.integrator.abs_tolerance,
        )

    lower, upper = bracket.lower, bracket.upper
    history = []
    converged = False
    shot = None
    p = None

    for iteration in range(1, config.max_iterations + 1):
        midpoint = 0.5 * (lower + upper)
        # once the bracket has shrunk to adjacent floats the midpoint repeats
        if midpoint != p:
            p = midpoint
            shot = shoot_once(problem, p, config)

        offset = shot.terminal - beta
        metric = abs(offset)
        history.append(metric)
        logger.debug("bisection iteration %d: p=%.17g, |v(b)-beta|=%.3e", iteration, p, metric)

        if metric < config.tolerance and config.resolvable:
            converged = True
            break

        if sign * offset > 0:
            upper = p
        else:
            lower = p

    report = SolverReport(
        method=Method.SHOOTING,
        iterations=len(history),
        converged=converged,
        final_metric=history[-1],
        tolerance=config.tolerance,
        history=history,
    )
    if converged:
        logger.info("✓ Shooting converged on %s: p*=%.12g after %d iterations", problem.name, p, report.iterations)
    else:
        logger.warning("⚠ Shooting did not converge on %s within %d iterations", problem.name, config.max_iterations)

    return ShootingResult(profile=shot.profile, p_star=p, report=report, bracket=(lower, upper))
