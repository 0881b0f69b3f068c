"""
Core Domain Types

Problem definitions, meshes, solution profiles and solver reports shared by the
shooting and finite-difference engines, plus the profile utilities used to
classify and compare their output.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Tuple

import numpy as np

from bvpkit.models.errors import DomainError


RealFunction = Callable[..., float]


def _frozen_array(values):
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


class Method(str, Enum):
    SHOOTING = 'shooting'
    FINITE_DIFFERENCE = 'finite_difference'


@dataclass(frozen=True)
class ProblemDefinition:
    """Two-point problem v'' = f(r, v, v') on [a, b] with v'(a) = alpha, v(b) = beta.

    ``rhs_dv`` and ``rhs_dvp`` are the partials of ``rhs`` in v and v'. All
    three take the full (r, v, v') triple and must accept numpy arrays as
    well as floats. ``singular_offset`` shifts the start of the shooting
    integration away from a singular left endpoint.
    """
    domain_start: float
    domain_end: float
    rhs: RealFunction
    rhs_dv: RealFunction
    rhs_dvp: RealFunction
    left_neumann: float = 0.0
    right_dirichlet: float = 0.0
    singular_offset: float = 0.0
    name: str = 'problem'

    def __post_init__(self):
        if not self.domain_start < self.domain_end:
            raise DomainError(
                f"domain_start must be below domain_end, got [{self.domain_start}, {self.domain_end}]"
            )
        if self.singular_offset < 0:
            raise DomainError("singular_offset must be non-negative")
        if self.singular_offset >= self.domain_end - self.domain_start:
            raise DomainError("singular_offset must be shorter than the domain")

    @property
    def integration_start(self):
        return self.domain_start + self.singular_offset


@dataclass(frozen=True, eq=False)
class Mesh:
    n_subintervals: int
    spacing: float
    nodes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'nodes', _frozen_array(self.nodes))
        if self.nodes.shape != (self.n_subintervals + 1,):
            raise DomainError("a mesh with N subintervals has N + 1 nodes")
        if np.any(np.diff(self.nodes) <= 0):
            raise DomainError("mesh nodes must be strictly increasing")

    @property
    def domain_start(self):
        return float(self.nodes[0])

    @property
    def domain_end(self):
        return float(self.nodes[-1])


@dataclass(frozen=True, eq=False)
class SolutionProfile:
    """Paired abscissae and solution values"""
    abscissae: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'abscissae', _frozen_array(self.abscissae))
        object.__setattr__(self, 'values', _frozen_array(self.values))
        if self.abscissae.ndim != 1 or self.abscissae.shape != self.values.shape:
            raise DomainError("abscissae and values must be 1-D and of equal length")
        if len(self.abscissae) < 2:
            raise DomainError("a profile needs at least two samples")
        if np.any(np.diff(self.abscissae) <= 0):
            raise DomainError("profile abscissae must be strictly increasing")

    def __len__(self):
        return len(self.abscissae)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Newton unknowns w_1..w_N plus the pinned right boundary value w_{N+1}"""
    interior: np.ndarray
    boundary_value: float

    def __post_init__(self):
        object.__setattr__(self, 'interior', _frozen_array(self.interior))
        if self.interior.ndim != 1:
            raise DomainError("grid function interior must be 1-D")

    def full(self):
        return np.append(self.interior, self.boundary_value)


@dataclass(frozen=True)
class SolverReport:
    method: Method
    iterations: int
    converged: bool
    final_metric: float
    tolerance: float
    history: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, 'history', tuple(float(m) for m in self.history))
        if self.iterations < 0:
            raise DomainError("iterations must be non-negative")
        if len(self.history) != self.iterations:
            raise DomainError("history must hold one metric per iteration")
        if self.converged and not self.final_metric < self.tolerance:
            raise DomainError("a converged report needs final_metric below tolerance")


def build_mesh(a, b, n):
    """Uniform mesh with nodes a + i*h; the last node is pinned to b"""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise DomainError(f"mesh needs at least 2 subintervals, got {n!r}")
    if not a < b:
        raise DomainError(f"mesh needs a < b, got [{a}, {b}]")

    h = (b - a) / n
    nodes = a + np.arange(n + 1) * h
    nodes[-1] = b
    return Mesh(n_subintervals=int(n), spacing=h, nodes=nodes)


def count_sign_changes(profile, dead_band=0.0):
    """Count zero crossings, ignoring values within +/- dead_band"""
    if dead_band < 0:
        raise DomainError("dead_band must be non-negative")

    values = profile.values
    significant = values[np.abs(values) > dead_band]
    if len(significant) < 2:
        return 0
    signs = np.sign(significant)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def profile_max_abs_difference(p1, p2):
    """Max |p1 - p2| over p1's abscissae, with p2 linearly interpolated.

    Only abscissae inside the overlap of the two domains are compared.
    """
    lo = max(p1.abscissae[0], p2.abscissae[0])
    hi = min(p1.abscissae[-1], p2.abscissae[-1])
    inside = (p1.abscissae >= lo) & (p1.abscissae <= hi)
    if lo > hi or not np.any(inside):
        raise DomainError("profiles do not share any part of their domains")

    x = p1.abscissae[inside]
    other = np.interp(x, p2.abscissae, p2.values)
    return float(np.max(np.abs(p1.values[inside] - other)))
