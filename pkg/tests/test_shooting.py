import math

import numpy as np
import pytest

from bvpkit.models.core import count_sign_changes
from bvpkit.models.errors import BracketError, DomainError, StepBudgetError
from bvpkit.models.problems import kerr_problem
from bvpkit.services.experiment_service import DEFAULT_BRACKETS, SolutionClass
from bvpkit.services.ivp_service import IntegratorConfig
from bvpkit.services.shooting_service import (
    BracketSpec,
    Orientation,
    ShootingConfig,
    shoot_once,
    solve_shooting,
)


RAISES_UPPER = Orientation.OVERSHOOT_RAISES_UPPER
RAISES_LOWER = Orientation.OVERSHOOT_RAISES_LOWER


class TestShootOnce:
    def test_constant_solution(self, make_linear_problem):
        shot = shoot_once(make_linear_problem(), 7.0, ShootingConfig())
        assert shot.terminal == 7.0
        np.testing.assert_array_equal(shot.profile.values, 7.0)
        assert shot.profile.abscissae[-1] == 1.0

    def test_parameter_must_be_finite(self, make_linear_problem):
        with pytest.raises(DomainError):
            shoot_once(make_linear_problem(), math.inf, ShootingConfig())

    def test_integration_failure_names_parameter(self):
        config = ShootingConfig(integrator=IntegratorConfig(max_steps=1))
        with pytest.raises(StepBudgetError) as exc_info:
            shoot_once(kerr_problem(), 1.7, config)
        assert exc_info.value.parameter == 1.7
        assert 'p = 1.7' in str(exc_info.value)

    @pytest.mark.parametrize('p, sign', [(1.5, 1.0), (2.0, -1.0), (2.5, 1.0)])
    def test_kerr_terminal_signs(self, kerr, p, sign):
        # below the ground-state amplitude the profile stays positive; each
        # bound-state amplitude crossed adds one node
        shot = shoot_once(kerr, p, ShootingConfig())
        assert math.copysign(1.0, shot.terminal) == sign

    def test_kerr_profile_starts_at_offset(self, kerr):
        shot = shoot_once(kerr, 1.6, ShootingConfig())
        assert shot.profile.abscissae[0] == kerr.integration_start
        assert shot.profile.values[0] == 1.6


class TestBisectionOnLinearProblem:
    def test_bracket_halves_every_iteration(self, make_linear_problem):
        config = ShootingConfig(tolerance=1e-12, max_iterations=20)
        result = solve_shooting(make_linear_problem(beta=1.0 / 3.0), BracketSpec(0.0, 1.0, RAISES_UPPER), config)
        assert not result.report.converged
        assert result.report.iterations == 20
        lower, upper = result.bracket
        assert upper - lower == 2.0 ** -20
        assert lower <= 1.0 / 3.0 <= upper

    def test_first_midpoint_is_iteration_one(self, make_linear_problem):
        config = ShootingConfig(tolerance=1e-9)
        result = solve_shooting(make_linear_problem(beta=5.0), BracketSpec(0.0, 10.0, RAISES_UPPER), config)
        assert result.report.converged
        assert result.report.iterations == 1
        assert result.p_star == 5.0

    def test_converges_inside_original_bracket(self, make_linear_problem):
        config = ShootingConfig(tolerance=1e-6)
        result = solve_shooting(make_linear_problem(beta=1.0 / 3.0), BracketSpec(0.0, 1.0, RAISES_UPPER), config)
        report = result.report
        assert report.converged
        assert abs(result.p_star - 1.0 / 3.0) < 1e-6
        assert 0.0 <= result.p_star <= 1.0
        assert len(report.history) == report.iterations
        assert report.final_metric < report.tolerance

    def test_wrong_orientation_rejected(self, make_linear_problem):
        with pytest.raises(BracketError):
            solve_shooting(make_linear_problem(beta=0.5), BracketSpec(0.0, 1.0, RAISES_LOWER), ShootingConfig())

    def test_bracket_missing_target_rejected(self, make_linear_problem):
        with pytest.raises(BracketError):
            solve_shooting(make_linear_problem(beta=0.25), BracketSpec(0.5, 1.0, RAISES_UPPER), ShootingConfig())

    def test_exact_hit_below_integrator_floor_is_not_converged(self, make_linear_problem):
        config = ShootingConfig(tolerance=1e-10, max_iterations=5)
        result = solve_shooting(make_linear_problem(beta=5.0), BracketSpec(0.0, 10.0, RAISES_UPPER), config)
        assert result.report.history[0] == 0.0
        assert not result.report.converged
        assert result.report.iterations == 5


class TestKerrShooting:
    def test_decaying_solution(self, kerr, decaying_oracle):
        config = ShootingConfig(tolerance=1e-6)
        result = solve_shooting(kerr, DEFAULT_BRACKETS[SolutionClass.DECAYING], config)
        assert result.report.converged
        assert result.report.iterations <= 100
        assert 1.5 <= result.p_star <= 2.0
        assert abs(result.p_star - decaying_oracle.p_star) <= 1e-4
        assert count_sign_changes(result.profile, dead_band=1e-4) == 0
        assert np.all(np.diff(result.profile.values) <= 10 * config.tolerance)

    def test_oracle_amplitude(self, decaying_oracle):
        assert decaying_oracle.p_star == pytest.approx(1.56, abs=0.01)

    def test_one_node_solution(self, kerr):
        result = solve_shooting(kerr, DEFAULT_BRACKETS[SolutionClass.ONE_NODE], ShootingConfig(tolerance=1e-6))
        assert result.report.converged
        assert 2.0 <= result.p_star <= 2.5
        assert count_sign_changes(result.profile, dead_band=1e-4) == 1

    def test_flipped_orientation_is_rejected(self, kerr):
        bracket = DEFAULT_BRACKETS[SolutionClass.DECAYING]
        flipped = BracketSpec(bracket.lower, bracket.upper, bracket.orientation.flipped())
        with pytest.raises(BracketError):
            solve_shooting(kerr, flipped, ShootingConfig())

    def test_one_node_bracket_with_decaying_orientation_is_rejected(self, kerr):
        with pytest.raises(BracketError):
            solve_shooting(kerr, BracketSpec(2.0, 2.5, RAISES_LOWER), ShootingConfig(tolerance=1e-6))

    @pytest.mark.parametrize('solution', list(SolutionClass))
    def test_tolerance_below_integrator_floor_never_converges(self, kerr, solution, caplog):
        config = ShootingConfig(tolerance=1e-12, max_iterations=100)
        result = solve_shooting(kerr, DEFAULT_BRACKETS[solution], config)
        assert not result.report.converged
        assert result.report.iterations == 100
        assert 'will not report convergence' in caplog.text


class TestBracketTypes:
    def test_orientation_sign(self):
        assert RAISES_UPPER.sign == 1.0
        assert RAISES_LOWER.sign == -1.0
        assert RAISES_UPPER.flipped() is RAISES_LOWER

    def test_bracket_order(self):
        with pytest.raises(DomainError):
            BracketSpec(2.0, 1.5)

    def test_orientation_from_string(self):
        assert BracketSpec(0.0, 1.0, 'overshoot_raises_lower').orientation is RAISES_LOWER

    @pytest.mark.parametrize('tolerance, resolvable', [(1e-6, True), (1e-9, True), (1e-10, False), (1e-12, False)])
    def test_resolvable_against_default_integrator(self, tolerance, resolvable):
        assert ShootingConfig(tolerance=tolerance).resolvable is resolvable

    def test_tighter_integrator_resolves_more(self):
        integrator = IntegratorConfig(abs_tolerance=1e-14)
        assert ShootingConfig(tolerance=1e-12, integrator=integrator).resolvable

    @pytest.mark.parametrize('changes', [dict(tolerance=0.0), dict(max_iterations=0)])
    def test_invalid_config(self, changes):
        with pytest.raises(DomainError):
            ShootingConfig(**changes)
