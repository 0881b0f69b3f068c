"""
Experiment Service
Runs configured solves of the Kerr problem and the method/solution/tolerance
iteration-count matrix.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from bvpkit.models.core import SolutionProfile, SolverReport, build_mesh
from bvpkit.models.errors import BvpError
from bvpkit.models.problems import (
    DECAYING_BRACKET,
    ONE_NODE_BRACKET,
    guess_decaying,
    guess_one_node,
    kerr_problem,
)
from bvpkit.services.fdm_service import FdmConfig, JacobianVariant, newton_solve
from bvpkit.services.ivp_service import IntegratorConfig
from bvpkit.services.shooting_service import BracketSpec, Orientation, ShootingConfig, solve_shooting


logger = logging.getLogger(__name__)


class SolutionClass(str, Enum):
    DECAYING = 'decaying'
    ONE_NODE = 'one_node'


SHOOTING = 'shooting'
FDM = 'fdm'
METHODS = (SHOOTING, FDM)

MATRIX_TOLERANCES = (1e-6, 1e-9, 1e-12)
# the matrix compares against reference counts taken with this assembly
MATRIX_JACOBIAN = JacobianVariant.TRUNCATED

# A positive v(b) means the amplitude was too small to reach the node the
# solution class needs; above it the profile crosses zero once more.
DEFAULT_BRACKETS = {
    SolutionClass.DECAYING: BracketSpec(*DECAYING_BRACKET, Orientation.OVERSHOOT_RAISES_LOWER),
    SolutionClass.ONE_NODE: BracketSpec(*ONE_NODE_BRACKET, Orientation.OVERSHOOT_RAISES_UPPER),
}

GUESSES = {
    SolutionClass.DECAYING: guess_decaying,
    SolutionClass.ONE_NODE: guess_one_node,
}

# Reference counts printed next to ours; None marks a reference run that never converged
REFERENCE_ITERATIONS = {
    (SHOOTING, SolutionClass.DECAYING, 1e-6): 29,
    (SHOOTING, SolutionClass.ONE_NODE, 1e-6): 25,
    (FDM, SolutionClass.DECAYING, 1e-6): 18,
    (FDM, SolutionClass.ONE_NODE, 1e-6): 20,
    (SHOOTING, SolutionClass.DECAYING, 1e-9): 36,
    (SHOOTING, SolutionClass.ONE_NODE, 1e-9): 35,
    (FDM, SolutionClass.DECAYING, 1e-9): 27,
    (FDM, SolutionClass.ONE_NODE, 1e-9): 28,
    (SHOOTING, SolutionClass.DECAYING, 1e-12): None,
    (SHOOTING, SolutionClass.ONE_NODE, 1e-12): None,
    (FDM, SolutionClass.DECAYING, 1e-12): 36,
    (FDM, SolutionClass.ONE_NODE, 1e-12): 37,
}


@dataclass(frozen=True)
class RunOutcome:
    method: str
    solution: SolutionClass
    tolerance: float
    report: Optional[SolverReport] = None
    profile: Optional[SolutionProfile] = None
    p_star: Optional[float] = None
    error: Optional[str] = None

    @property
    def converged(self):
        return self.report is not None and self.report.converged

    @property
    def label(self):
        """Iteration count, NA when unconverged, ERR when the solver failed"""
        if self.error is not None:
            return 'ERR'
        if not self.report.converged:
            return 'NA'
        return str(self.report.iterations)

    @property
    def reference(self):
        return REFERENCE_ITERATIONS.get((self.method, self.solution, self.tolerance))


def solve_with_shooting(solution, tolerance, max_iterations, domain_end=10.0,
                        integrator=None, bracket=None):
    solution = SolutionClass(solution)
    problem = kerr_problem(domain_end=domain_end)
    config = ShootingConfig(
        tolerance=tolerance,
        max_iterations=max_iterations,
        integrator=integrator or IntegratorConfig(),
    )
    result = solve_shooting(problem, bracket or DEFAULT_BRACKETS[solution], config)
    return RunOutcome(
        method=SHOOTING,
        solution=solution,
        tolerance=tolerance,
        report=result.report,
        profile=result.profile,
        p_star=result.p_star,
    )


def initial_guess(solution, domain_end=10.0, mesh_n=100):
    """The Newton starting grid function for a solution class, with its mesh"""
    problem = kerr_problem(domain_end=domain_end)
    mesh = build_mesh(problem.domain_start, problem.domain_end, mesh_n)
    return mesh, GUESSES[SolutionClass(solution)](mesh, problem.right_dirichlet)


def initial_guess_profile(solution, domain_end=10.0, mesh_n=100):
    mesh, w0 = initial_guess(solution, domain_end=domain_end, mesh_n=mesh_n)
    return SolutionProfile(abscissae=mesh.nodes, values=w0.full())


def solve_with_fdm(solution, tolerance, max_iterations, domain_end=10.0, mesh_n=100,
                   jacobian=JacobianVariant.EXACT, guess=None):
    solution = SolutionClass(solution)
    problem = kerr_problem(domain_end=domain_end)
    mesh, w0 = initial_guess(guess or solution, domain_end=domain_end, mesh_n=mesh_n)
    config = FdmConfig(tolerance=tolerance, max_iterations=max_iterations, jacobian=jacobian)
    profile, report = newton_solve(problem, mesh, w0, config)
    return RunOutcome(
        method=FDM,
        solution=solution,
        tolerance=tolerance,
        report=report,
        profile=profile,
    )


def _run_cell(method, solution, tolerance, spec, integrator):
    try:
        if method == SHOOTING:
            return solve_with_shooting(
                solution, tolerance, spec.max_iterations,
                domain_end=spec.domain_end, integrator=integrator,
            )
        return solve_with_fdm(
            solution, tolerance, spec.max_iterations,
            domain_end=spec.domain_end, mesh_n=spec.mesh_n, jacobian=spec.jacobian or MATRIX_JACOBIAN,
        )
    except BvpError as e:
        logger.error("✗ %s/%s at tolerance %g failed: %s", method, solution.value, tolerance, e)
        return RunOutcome(method=method, solution=solution, tolerance=tolerance, error=str(e))


def experiment_matrix(spec, integrator=None, workers=4):
    """Run every method x solution x tolerance cell.

    ``spec`` supplies max_iterations, domain_end, mesh_n and jacobian; a
    missing jacobian falls back to MATRIX_JACOBIAN. Method and solution
    selections on it are ignored. Cells share no solver state
    and run on a thread pool; results come back in a fixed order.
    """
    cells = [
        (method, solution, tolerance)
        for tolerance in MATRIX_TOLERANCES
        for method in METHODS
        for solution in SolutionClass
    ]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = [pool.submit(_run_cell, *cell, spec, integrator) for cell in cells]
        outcomes = [future.result() for future in futures]

    logger.info(
        "✓ Experiment matrix finished: %d of %d cells converged",
        sum(outcome.converged for outcome in outcomes), len(outcomes),
    )
    return outcomes
