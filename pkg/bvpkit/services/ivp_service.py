"""
Initial Value Problem Service
Adaptive Dormand-Prince 5(4) integration of v'' = f(r, v, v') written as the
first-order system (v, v')' = (v', f).
"""

import logging
import math
from dataclasses import dataclass

from bvpkit.models.core import SolutionProfile
from bvpkit.models.errors import DomainError, IntegrationError, StepBudgetError, StepUnderflowError


logger = logging.getLogger(__name__)


# Dormand-Prince tableau (seven stages, first same as last)
NODES = (0.0, 1/5, 3/10, 4/5, 8/9, 1.0, 1.0)
COUPLING = (
    (),
    (1/5,),
    (3/40, 9/40),
    (44/45, -56/15, 32/9),
    (19372/6561, -25360/2187, 64448/6561, -212/729),
    (9017/3168, -355/33, 46732/5247, 49/176, -5103/18656),
    (35/384, 0.0, 500/1113, 125/192, -2187/6784, 11/84),
)
# fifth-order minus embedded fourth-order weights
ERROR_WEIGHTS = (71/57600, 0.0, -71/16695, 71/1920, -17253/339200, 22/525, -1/40)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0

# remaining distance below which the current step is stretched to the end point
_END_SNAP = 1e-12


@dataclass(frozen=True)
class IvpState:
    position: float
    value: float
    derivative: float

    def __post_init__(self):
        if not all(math.isfinite(x) for x in (self.position, self.value, self.derivative)):
            raise DomainError(f"non-finite integrator state {self}")


@dataclass(frozen=True)
class IntegratorConfig:
    """Step-size control settings.

    Setting ``min_step == max_step`` selects fixed-step mode: every step is
    accepted and the error estimate no longer drives rejection.
    """
    rel_tolerance: float = 1e-8
    abs_tolerance: float = 1e-10
    initial_step: float = 1e-3
    min_step: float = 1e-14
    max_step: float = 1.0
    max_steps: int = 100000

    def __post_init__(self):
        for name in ('rel_tolerance', 'abs_tolerance', 'initial_step', 'min_step', 'max_step'):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if not self.min_step <= self.initial_step <= self.max_step:
            raise DomainError("need min_step <= initial_step <= max_step")
        if self.max_steps < 1:
            raise DomainError("max_steps must be a positive integer")

    @property
    def fixed_step(self):
        return self.min_step == self.max_step

    @classmethod
    def fixed(cls, h):
        return cls(initial_step=h, min_step=h, max_step=h)


def _attempt(system, r, v, vp, k1, h, config):
    """One Dormand-Prince step from (r, v, vp) with first stage k1.

    Returns (value, derivative, last_stage, error_estimate); the error
    estimate is infinite when any stage was not finite.
    """
    stages = [k1]
    try:
        for s in range(1, 7):
            row = COUPLING[s]
            yv = v + h * sum(a * k[0] for a, k in zip(row, stages))
            yp = vp + h * sum(a * k[1] for a, k in zip(row, stages))
            stages.append(system(r + NODES[s] * h, yv, yp))
    except (OverflowError, ZeroDivisionError, FloatingPointError):
        return v, vp, k1, math.inf

    # the last stage is evaluated at the fifth-order solution
    dv = h * sum(e * k[0] for e, k in zip(ERROR_WEIGHTS, stages))
    dp = h * sum(e * k[1] for e, k in zip(ERROR_WEIGHTS, stages))
    if not all(math.isfinite(x) for x in (yv, yp, dv, dp)):
        return v, vp, k1, math.inf

    error = max(
        abs(dv) / (config.abs_tolerance + config.rel_tolerance * abs(yv)),
        abs(dp) / (config.abs_tolerance + config.rel_tolerance * abs(yp)),
    )
    return yv, yp, stages[6], error


def _step_factor(error):
    if error == 0.0:
        return MAX_FACTOR
    return min(MAX_FACTOR, max(MIN_FACTOR, SAFETY * error ** -0.2))


def rk_attempt_step(system, state, h, config):
    """Advance ``state`` by one trial step of size h.

    Returns (candidate, error_estimate). The estimate is the scaled max-norm
    of the difference between the embedded solutions; a step is acceptable
    when it is at most 1. A non-finite stage gives (None, inf).
    """
    if not h > 0:
        raise DomainError("step size must be positive")
    try:
        k1 = system(state.position, state.value, state.derivative)
    except (OverflowError, ZeroDivisionError, FloatingPointError):
        return None, math.inf

    value, derivative, _, error = _attempt(
        system, state.position, state.value, state.derivative, k1, h, config
    )
    if not math.isfinite(error):
        return None, error
    return IvpState(state.position + h, value, derivative), error


def integrate(system, start, r_end, config):
    """Integrate from ``start`` to ``r_end`` and return (trajectory, final state).

    The trajectory holds every accepted (r, v) pair, starting with the
    initial state; the last step is shortened so it lands exactly on r_end.
    """
    if not start.position < r_end:
        raise DomainError(f"integration needs start < end, got {start.position} >= {r_end}")

    r, v, vp = start.position, start.value, start.derivative
    try:
        k1 = system(r, v, vp)
    except (OverflowError, ZeroDivisionError, FloatingPointError) as exc:
        raise IntegrationError(f"derivative failed at the initial state: {exc}", position=r) from exc
    if not all(math.isfinite(x) for x in k1):
        raise IntegrationError("non-finite derivative at the initial state", position=r)

    fixed = config.fixed_step
    h = min(config.initial_step, r_end - r)
    snap = _END_SNAP * max(1.0, abs(r_end))

    positions = [r]
    values = [v]
    attempts = 0
    rejected = 0

    while r < r_end:
        if attempts >= config.max_steps:
            raise StepBudgetError(f"step budget of {config.max_steps} exhausted", position=r)
        attempts += 1

        last = r_end - (r + h) <= snap
        if last:
            h = r_end - r

        value, derivative, k_next, error = _attempt(system, r, v, vp, k1, h, config)

        if fixed or error <= 1.0:
            if not math.isfinite(error):
                raise IntegrationError("non-finite state in fixed-step mode", position=r)
            r = r_end if last else r + h
            v, vp, k1 = value, derivative, k_next
            positions.append(r)
            values.append(v)
            if not fixed:
                h = min(config.max_step, max(config.min_step, h * _step_factor(error)))
            else:
                h = config.max_step
        else:
            rejected += 1
            if not math.isfinite(error):
                logger.debug("non-finite stage at r=%r, shrinking step %r", r, h)
            shrunk = h * max(MIN_FACTOR, SAFETY * error ** -0.2) if math.isfinite(error) else h * MIN_FACTOR
            if shrunk < config.min_step:
                if h <= config.min_step:
                    raise StepUnderflowError(
                        f"step size fell below min_step={config.min_step}", position=r
                    )
                shrunk = config.min_step
            h = shrunk

        h = min(h, r_end - r) if r < r_end else h

    logger.debug(
        "integrated [%r, %r]: %d accepted, %d rejected", start.position, r_end, len(positions) - 1, rejected
    )
    trajectory = SolutionProfile(abscissae=positions, values=values)
    return trajectory, IvpState(r_end, v, vp)
