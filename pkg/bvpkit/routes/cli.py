"""
Command-Line Routes
"""

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from config import get_config
from bvpkit.models.errors import ConfigurationError, DomainError
from bvpkit.models.problems import KERR_SINGULAR_OFFSET
from bvpkit.services import experiment_service
from bvpkit.services.experiment_service import (
    DEFAULT_BRACKETS,
    FDM,
    MATRIX_JACOBIAN,
    SHOOTING,
    SolutionClass,
    initial_guess_profile,
    solve_with_fdm,
    solve_with_shooting,
)
from bvpkit.services.fdm_service import JacobianVariant
from bvpkit.services.ivp_service import IntegratorConfig
from bvpkit.services.report_service import render_matrix_report, render_run_report
from bvpkit.services.shooting_service import BracketSpec, Orientation
from bvpkit.utils.decorators import ExitCode, report_error, solver_errors_to_exit_code, usage_errors_to_exit_code
from bvpkit.utils.profile_io import write_profile_csv


RUN_METHODS = (SHOOTING, FDM, 'both')
REPORT_FORMATS = ('text', 'csv')


@dataclass(frozen=True)
class RunSpec:
    method: str = 'both'
    solution: Optional[SolutionClass] = None
    tolerance: float = 1e-6
    max_iterations: int = 100
    domain_end: float = 10.0
    mesh_n: int = 100
    output_path: Optional[str] = None
    report_format: str = 'text'
    experiment_matrix: bool = False
    bracket_lo: Optional[float] = None
    bracket_hi: Optional[float] = None
    orientation: Optional[Orientation] = None
    guess: Optional[SolutionClass] = None
    jacobian: Optional[JacobianVariant] = None
    guess_output_path: Optional[str] = None

    def __post_init__(self):
        if self.method not in RUN_METHODS:
            raise DomainError(f"method must be one of {', '.join(RUN_METHODS)}")
        if self.report_format not in REPORT_FORMATS:
            raise DomainError(f"report format must be one of {', '.join(REPORT_FORMATS)}")
        if not self.tolerance > 0:
            raise DomainError("--tol must be positive")
        if self.max_iterations < 1:
            raise DomainError("--max-iter must be at least 1")
        if not self.domain_end > KERR_SINGULAR_OFFSET:
            raise DomainError(f"--domain-end must exceed the integration offset {KERR_SINGULAR_OFFSET:g}")
        if self.mesh_n < 3:
            raise DomainError("--mesh-n must be at least 3")
        if self.solution is None and not self.experiment_matrix:
            raise DomainError("--solution is required unless --experiment-matrix is given")
        if self.guess_output_path and self.solution is None:
            raise DomainError("--guess-out needs --solution")

    def bracket(self):
        """The bisection bracket: the solution's default with any overrides applied"""
        if self.bracket_lo is None and self.bracket_hi is None and self.orientation is None:
            return None
        default = DEFAULT_BRACKETS[self.solution]
        return BracketSpec(
            lower=default.lower if self.bracket_lo is None else self.bracket_lo,
            upper=default.upper if self.bracket_hi is None else self.bracket_hi,
            orientation=self.orientation or default.orientation,
        )


def _solution_name(text):
    return text.replace('-', '_')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='bvpkit',
        description='Solve the Kerr beam-profile boundary value problem by shooting or finite differences.',
    )
    parser.add_argument('--method', choices=RUN_METHODS, default='both')
    parser.add_argument('--solution', type=_solution_name, choices=[s.value for s in SolutionClass])
    parser.add_argument('--tol', type=float, default=1e-6, help='convergence tolerance')
    parser.add_argument('--max-iter', type=int, default=100, help='iteration limit')
    parser.add_argument('--domain-end', type=float, default=10.0, help='right end b of [0, b]')
    parser.add_argument('--mesh-n', type=int, default=100, help='finite-difference subintervals')
    parser.add_argument('--out', help='write the solution profile as CSV to this path')
    parser.add_argument('--report-format', choices=REPORT_FORMATS, default='text')
    parser.add_argument('--experiment-matrix', action='store_true',
                        help='run every method x solution x tolerance cell')

    advanced = parser.add_argument_group('advanced')
    advanced.add_argument('--bracket-lo', type=float, help='lower end of the shooting bracket')
    advanced.add_argument('--bracket-hi', type=float, help='upper end of the shooting bracket')
    advanced.add_argument('--orientation', choices=[o.value for o in Orientation])
    advanced.add_argument('--guess', type=_solution_name, choices=[s.value for s in SolutionClass],
                          help='finite-difference initial guess')
    advanced.add_argument('--jacobian', choices=[j.value for j in JacobianVariant],
                          help='finite-difference Jacobian assembly (default: exact, truncated for the matrix)')
    advanced.add_argument('--guess-out', help='write the finite-difference initial guess as CSV to this path')
    return parser


def parse_args(argv):
    """Parse command-line flags into a RunSpec; usage errors exit with code 2"""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return RunSpec(
            method=args.method,
            solution=SolutionClass(args.solution) if args.solution else None,
            tolerance=args.tol,
            max_iterations=args.max_iter,
            domain_end=args.domain_end,
            mesh_n=args.mesh_n,
            output_path=args.out,
            report_format=args.report_format,
            experiment_matrix=args.experiment_matrix,
            bracket_lo=args.bracket_lo,
            bracket_hi=args.bracket_hi,
            orientation=Orientation(args.orientation) if args.orientation else None,
            guess=SolutionClass(args.guess) if args.guess else None,
            jacobian=JacobianVariant(args.jacobian) if args.jacobian else None,
            guess_output_path=args.guess_out,
        )
    except DomainError as e:
        parser.error(str(e))


def _parse_setting(config, name, kind):
    raw = getattr(config, name)
    try:
        return kind(raw)
    except (TypeError, ValueError):
        raise ConfigurationError(f"BVPKIT_{name} must be a decimal number, got {raw!r}") from None


def integrator_config_from(config):
    """Build the integrator settings from a configuration class"""
    try:
        return IntegratorConfig(
            rel_tolerance=_parse_setting(config, 'INTEGRATOR_REL', float),
            abs_tolerance=_parse_setting(config, 'INTEGRATOR_ABS', float),
            initial_step=_parse_setting(config, 'INTEGRATOR_INITIAL_STEP', float),
            min_step=_parse_setting(config, 'INTEGRATOR_MIN_STEP', float),
            max_step=_parse_setting(config, 'INTEGRATOR_MAX_STEP', float),
            max_steps=_parse_setting(config, 'INTEGRATOR_MAX_STEPS', int),
        )
    except DomainError as e:
        raise ConfigurationError(f"invalid integrator settings: {e}") from None


def _output_path(spec, method):
    path = Path(spec.output_path)
    if spec.method != 'both':
        return path
    return path.with_name(f"{path.stem}-{method}{path.suffix}")


def experiment_matrix(spec, integrator=None, workers=4):
    """Run the iteration-count matrix and return the rendered table"""
    outcomes = experiment_service.experiment_matrix(spec, integrator=integrator, workers=workers)
    return render_matrix_report(
        outcomes, spec.report_format,
        max_iterations=spec.max_iterations,
        jacobian=(spec.jacobian or MATRIX_JACOBIAN).value,
    )


def _solve(spec, method, integrator):
    if method == SHOOTING:
        return solve_with_shooting(
            spec.solution, spec.tolerance, spec.max_iterations,
            domain_end=spec.domain_end, integrator=integrator, bracket=spec.bracket(),
        )
    return solve_with_fdm(
        spec.solution, spec.tolerance, spec.max_iterations,
        domain_end=spec.domain_end, mesh_n=spec.mesh_n,
        jacobian=spec.jacobian or JacobianVariant.EXACT, guess=spec.guess,
    )


@solver_errors_to_exit_code
def run(spec, integrator=None, workers=4):
    """Run the configured solve(s), write profiles, print the report.

    Exit codes: 0 converged, 3 unconverged, 4 solver error, 5 I/O error.
    """
    if spec.guess_output_path:
        guess = initial_guess_profile(spec.guess or spec.solution, domain_end=spec.domain_end, mesh_n=spec.mesh_n)
        write_profile_csv(guess, spec.guess_output_path)

    if spec.experiment_matrix:
        sys.stdout.write(experiment_matrix(spec, integrator=integrator, workers=workers))
        return ExitCode.CONVERGED

    methods = (SHOOTING, FDM) if spec.method == 'both' else (spec.method,)
    outcomes = [_solve(spec, method, integrator) for method in methods]

    if spec.output_path:
        for outcome in outcomes:
            write_profile_csv(outcome.profile, _output_path(spec, outcome.method))

    sys.stdout.write(render_run_report(outcomes, spec.report_format))

    unconverged = [outcome for outcome in outcomes if not outcome.converged]
    for outcome in unconverged:
        report_error(
            "Not converged",
            f"{outcome.method}/{outcome.solution.value} stopped after "
            f"{outcome.report.iterations} iterations at {outcome.report.final_metric:.3e}",
            marker="⚠",
        )
    return ExitCode.UNCONVERGED if unconverged else ExitCode.CONVERGED


@usage_errors_to_exit_code
def main(argv=None, config=None):
    config = config or get_config()
    spec = parse_args(sys.argv[1:] if argv is None else argv)
    integrator = integrator_config_from(config)
    workers = _parse_setting(config, 'MATRIX_WORKERS', int)
    return run(spec, integrator=integrator, workers=workers)
