"""
Shared pytest fixtures
"""

import pytest

from config import TestingConfig
from bvpkit.models.core import ProblemDefinition
from bvpkit.models.problems import kerr_problem
from bvpkit.services.experiment_service import DEFAULT_BRACKETS, SolutionClass
from bvpkit.services.ivp_service import IntegratorConfig
from bvpkit.services.shooting_service import ShootingConfig, solve_shooting


def _zero(r, v, vp):
    return 0.0


@pytest.fixture
def make_linear_problem():
    """Factory for v'' = 0 with v'(a) = alpha and v(b) = beta"""
    def factory(beta=0.0, domain_start=0.0, domain_end=1.0, alpha=0.0):
        return ProblemDefinition(
            domain_start=domain_start,
            domain_end=domain_end,
            rhs=_zero,
            rhs_dv=_zero,
            rhs_dvp=_zero,
            left_neumann=alpha,
            right_dirichlet=beta,
            name='linear',
        )
    return factory


@pytest.fixture
def kerr():
    return kerr_problem()


@pytest.fixture
def testing_config():
    return TestingConfig


@pytest.fixture(scope='session')
def tight_integrator():
    return IntegratorConfig(rel_tolerance=1e-10, abs_tolerance=1e-12, max_step=0.01)


def _oracle(solution, integrator):
    config = ShootingConfig(tolerance=1e-10, max_iterations=60, integrator=integrator)
    return solve_shooting(kerr_problem(), DEFAULT_BRACKETS[solution], config)


@pytest.fixture(scope='session')
def decaying_oracle(tight_integrator):
    """Tight-tolerance shooting solution of the decaying profile on [0, 10]"""
    return _oracle(SolutionClass.DECAYING, tight_integrator)


@pytest.fixture(scope='session')
def one_node_oracle(tight_integrator):
    return _oracle(SolutionClass.ONE_NODE, tight_integrator)
