"""
Finite-Difference Service
Nonlinear finite differences with Newton iteration.

The unknowns are w_1..w_N at the nodes x_1..x_N; w_{N+1} is pinned to the
right Dirichlet value. Row 1 is the three-point endpoint formula for the
left Neumann condition, rows 2..N are centred differences of v'' = f.
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from bvpkit.models.core import GridFunction, Method, SolutionProfile, SolverReport
from bvpkit.models.errors import DivergenceError, DomainError
from bvpkit.utils.banded import BandedSystem, solve_banded


logger = logging.getLogger(__name__)


class JacobianVariant(str, Enum):
    EXACT = 'exact'
    # first subdiagonal entry left at zero; Newton then converges linearly
    TRUNCATED = 'truncated'


@dataclass(frozen=True)
class FdmConfig:
    tolerance: float = 1e-6
    max_iterations: int = 100
    jacobian: JacobianVariant = JacobianVariant.EXACT

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be a positive integer")
        object.__setattr__(self, 'jacobian', JacobianVariant(self.jacobian))


def _check_shapes(problem, mesh, w):
    n = mesh.n_subintervals
    if n < 3:
        raise DomainError(f"the finite-difference system needs N >= 3, got {n}")
    if w.interior.shape != (n,):
        raise DomainError(f"grid function has {len(w.interior)} unknowns, mesh needs {n}")
    if w.boundary_value != problem.right_dirichlet:
        raise DomainError("grid function boundary value must equal the right Dirichlet value")


def _row_centres(mesh, w):
    """Centre abscissae, values and discrete slopes of rows 2..N"""
    full = w.full()
    h = mesh.spacing
    x = mesh.nodes[1:-1]
    centre = full[1:-1]
    slope = (full[2:] - full[:-2]) / (2.0 * h)
    return full, x, centre, slope


def _evaluate(fn, x, v, vp):
    return np.broadcast_to(np.asarray(fn(x, v, vp), dtype=float), x.shape)


def assemble_residual(problem, mesh, w):
    _check_shapes(problem, mesh, w)
    h = mesh.spacing
    full, x, centre, slope = _row_centres(mesh, w)

    residual = np.empty(mesh.n_subintervals)
    residual[0] = (-1.5 * full[0] + 2.0 * full[1] - 0.5 * full[2]) / h - problem.left_neumann
    residual[1:] = (-full[:-2] + 2.0 * full[1:-1] - full[2:]
                    + h * h * _evaluate(problem.rhs, x, centre, slope))
    return residual


def assemble_jacobian(problem, mesh, w, variant=JacobianVariant.EXACT):
    _check_shapes(problem, mesh, w)
    n = mesh.n_subintervals
    h = mesh.spacing
    _, x, centre, slope = _row_centres(mesh, w)
    dfdv = _evaluate(problem.rhs_dv, x, centre, slope)
    dfdvp = _evaluate(problem.rhs_dvp, x, centre, slope)

    jacobian = BandedSystem(dimension=n, lower_bandwidth=1, upper_bandwidth=2)
    jacobian[0, 0] = -1.5 / h
    jacobian[0, 1] = 2.0 / h
    jacobian[0, 2] = -0.5 / h

    # row k (0-based, k >= 1) is centred on node k: columns k-1, k, k+1
    jacobian.set_diagonal(-1, -1.0 - 0.5 * h * dfdvp, start_row=1)
    jacobian.set_diagonal(0, 2.0 + h * h * dfdv, start_row=1)
    # the last row's right neighbour is the pinned boundary value
    jacobian.set_diagonal(1, -1.0 + 0.5 * h * dfdvp[:-1], start_row=1)

    if JacobianVariant(variant) is JacobianVariant.TRUNCATED:
        jacobian[1, 0] = 0.0
    return jacobian


def interpolate_guess(mesh, profile, beta):
    """Grid function interpolated linearly from an existing profile"""
    interior = np.interp(mesh.nodes[:-1], profile.abscissae, profile.values)
    return GridFunction(interior=interior, boundary_value=beta)


def newton_solve(problem, mesh, w0, config):
    """Newton iteration on the finite-difference system.

    Each iteration solves J delta = -F. The solve stops as soon as
    ||delta||_2 < tolerance, before that update is applied.
    """
    _check_shapes(problem, mesh, w0)
    w = np.array(w0.interior, dtype=float)
    beta = w0.boundary_value
    history = []
    converged = False

    for iteration in range(1, config.max_iterations + 1):
        current = GridFunction(interior=w, boundary_value=beta)
        residual = assemble_residual(problem, mesh, current)
        if not np.all(np.isfinite(residual)):
            raise DivergenceError(iteration)
        jacobian = assemble_jacobian(problem, mesh, current, config.jacobian)
        delta = solve_banded(jacobian, -residual)

        norm = float(np.linalg.norm(delta))
        history.append(norm)
        logger.debug("newton iteration %d: |delta| = %.3e", iteration, norm)

        if norm < config.tolerance:
            converged = True
            break

        w = w + delta
        if not np.all(np.isfinite(w)):
            raise DivergenceError(iteration)

    report = SolverReport(
        method=Method.FINITE_DIFFERENCE,
        iterations=len(history),
        converged=converged,
        final_metric=history[-1],
        tolerance=config.tolerance,
        history=history,
    )
    if converged:
        logger.info("✓ Newton converged on %s in %d iterations", problem.name, report.iterations)
    else:
        logger.warning("⚠ Newton did not converge on %s within %d iterations", problem.name, config.max_iterations)

    profile = SolutionProfile(abscissae=mesh.nodes, values=np.append(w, beta))
    return profile, report
