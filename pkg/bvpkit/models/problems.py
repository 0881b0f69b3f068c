"""
Problem Definitions

The Kerr-medium beam profile problem

    v'' + (1/r) v' - v + 2 v^3 = 0,   v'(0) = 0,   v(b) = 0,

its two initial-guess generators for the finite-difference engine, and a
manufactured-solution variant with the exact solution exp(-r^2) for checking
the order of accuracy.
"""

import numpy as np
from scipy.special import expit

from bvpkit.models.core import GridFunction, ProblemDefinition
from bvpkit.models.errors import DomainError


KERR_DOMAIN_END = 10.0
KERR_SINGULAR_OFFSET = 1e-6

# Initial-amplitude brackets; orientations live in experiment_service.DEFAULT_BRACKETS
DECAYING_BRACKET = (1.5, 2.0)
ONE_NODE_BRACKET = (2.0, 2.5)


def _require_positive_radius(r):
    if isinstance(r, np.ndarray):
        if (r <= 0).any():
            raise DomainError("the Kerr right-hand side is singular for r <= 0")
    elif r <= 0:
        raise DomainError(f"the Kerr right-hand side is singular at r = {r!r}")


def kerr_rhs(r, v, vp):
    _require_positive_radius(r)
    return -vp / r + v - 2.0 * v * v * v


def kerr_dv(v):
    return 1.0 - 6.0 * v * v


def kerr_dvp(r):
    _require_positive_radius(r)
    return -1.0 / r


def _kerr_rhs_dv(r, v, vp):
    return kerr_dv(v)


def _kerr_rhs_dvp(r, v, vp):
    return kerr_dvp(r)


def kerr_problem(domain_end=KERR_DOMAIN_END, singular_offset=KERR_SINGULAR_OFFSET):
    """The Kerr beam-profile problem on [0, domain_end].

    The finite-difference engine ignores ``singular_offset``: it never
    evaluates the right-hand side at r = 0.
    """
    return ProblemDefinition(
        domain_start=0.0,
        domain_end=float(domain_end),
        rhs=kerr_rhs,
        rhs_dv=_kerr_rhs_dv,
        rhs_dvp=_kerr_rhs_dvp,
        left_neumann=0.0,
        right_dirichlet=0.0,
        singular_offset=singular_offset,
        name='kerr',
    )


def guess_decaying(mesh, beta=0.0):
    """w_i = 2 exp(-0.1 (i + 1)) in terms of the 1-based node index i"""
    i = np.arange(1, mesh.n_subintervals + 1)
    return GridFunction(interior=2.0 * np.exp(-0.1 * (i + 1)), boundary_value=beta)


def guess_one_node(mesh, beta=0.0):
    """Piecewise guess with one node: exponential core, logistic tail.

    The tail 1/(1 + exp(N/3 - i)) - 1 is evaluated as -expit(N/3 - i) so it
    keeps its magnitude far out instead of rounding to zero.
    """
    n = mesh.n_subintervals
    i = np.arange(1, n + 1)
    core = 6.0 * np.exp(-0.2 * (i + 1)) - 1.0
    tail = -expit(n / 3.0 - i)
    interior = np.where(mesh.nodes[:-1] < 3.0, core, tail)
    return GridFunction(interior=interior, boundary_value=beta)


def manufactured_solution(r):
    return np.exp(-np.square(r))


def manufactured_forcing(r):
    """g = v*'' + v*'/r - v* + 2 v*^3 for v* = exp(-r^2), with v*'/r = -2 exp(-r^2)"""
    r2 = np.square(r)
    return (4.0 * r2 - 5.0) * np.exp(-r2) + 2.0 * np.exp(-3.0 * r2)


def _manufactured_rhs(r, v, vp):
    return kerr_rhs(r, v, vp) + manufactured_forcing(r)


def manufactured_problem(domain_end=KERR_DOMAIN_END):
    """Kerr operator plus forcing so that exp(-r^2) is the exact solution"""
    return ProblemDefinition(
        domain_start=0.0,
        domain_end=float(domain_end),
        rhs=_manufactured_rhs,
        rhs_dv=_kerr_rhs_dv,
        rhs_dvp=_kerr_rhs_dvp,
        left_neumann=0.0,
        right_dirichlet=float(manufactured_solution(domain_end)),
        singular_offset=0.0,
        name='manufactured',
    )
