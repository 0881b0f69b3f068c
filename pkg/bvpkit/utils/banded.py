"""
Banded Linear Algebra

Storage follows the LAPACK / ``scipy.linalg.solve_banded`` layout: entry
A[i, j] of an (l, u)-banded matrix lives at ``bands[u + i - j, j]``.
"""

from dataclasses import dataclass, field

import numpy as np

from bvpkit.models.errors import DomainError, SingularMatrixError


@dataclass(eq=False)
class BandedSystem:
    """Square matrix with ``lower_bandwidth`` sub- and ``upper_bandwidth`` super-diagonals.

    The Newton Jacobian uses (1, 2): every row is tridiagonal except the first,
    which carries the three-point endpoint stencil.
    """
    dimension: int
    lower_bandwidth: int = 1
    upper_bandwidth: int = 2
    bands: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.dimension < 1:
            raise DomainError("banded system needs a positive dimension")
        shape = (self.lower_bandwidth + self.upper_bandwidth + 1, self.dimension)
        if self.bands is None:
            self.bands = np.zeros(shape)
        elif self.bands.shape != shape:
            raise DomainError(f"band storage must have shape {shape}, got {self.bands.shape}")

    def in_band(self, i, j):
        return (0 <= i < self.dimension and 0 <= j < self.dimension
                and -self.lower_bandwidth <= j - i <= self.upper_bandwidth)

    def __getitem__(self, index):
        i, j = index
        if not self.in_band(i, j):
            return 0.0
        return self.bands[self.upper_bandwidth + i - j, j]

    def __setitem__(self, index, value):
        i, j = index
        if not self.in_band(i, j):
            raise IndexError(f"entry ({i}, {j}) lies outside the band")
        self.bands[self.upper_bandwidth + i - j, j] = value

    def set_diagonal(self, offset, values, start_row=0):
        """Write ``values`` along diagonal j - i = offset, starting at ``start_row``"""
        rows = np.arange(start_row, start_row + len(values))
        cols = rows + offset
        if len(values) and not (self.in_band(rows[0], cols[0]) and self.in_band(rows[-1], cols[-1])):
            raise IndexError(f"diagonal {offset} from row {start_row} leaves the band")
        self.bands[self.upper_bandwidth - offset, cols] = values

    def to_dense(self):
        dense = np.zeros((self.dimension, self.dimension))
        for offset in range(-self.lower_bandwidth, self.upper_bandwidth + 1):
            rows = np.arange(max(0, -offset), min(self.dimension, self.dimension - offset))
            dense[rows, rows + offset] = self.bands[self.upper_bandwidth - offset, rows + offset]
        return dense

    def matvec(self, x):
        return self.to_dense() @ np.asarray(x, dtype=float)

    def norm_inf(self):
        return float(np.max(np.sum(np.abs(self.to_dense()), axis=1)))


def solve_banded(system, rhs):
    """Solve system @ x = rhs by banded LU with partial pivoting.

    Row interchanges can push fill up to lower + upper bandwidth above the
    diagonal, so the factorisation works on a widened copy; ``system`` is not
    modified.
    """
    n = system.dimension
    b = np.array(rhs, dtype=float)
    if b.shape != (n,):
        raise DomainError(f"right-hand side must have length {n}, got shape {b.shape}")

    kl = system.lower_bandwidth
    kv = system.lower_bandwidth + system.upper_bandwidth

    # work[kv + i - j, j] = A[i, j] for -kl <= i - j ... j - i <= kv
    work = np.zeros((kl + kv + 1, n))
    work[kl:, :] = system.bands

    def at(i, j):
        return kv + i - j, j

    pivots = np.arange(n)
    for k in range(n):
        last = min(n - 1, k + kl)
        column = [abs(work[at(i, k)]) for i in range(k, last + 1)]
        p = k + int(np.argmax(column))
        if work[at(p, k)] == 0.0:
            raise SingularMatrixError(k)
        pivots[k] = p

        right = min(n - 1, k + kv)
        if p != k:
            for j in range(k, right + 1):
                work[at(k, j)], work[at(p, j)] = work[at(p, j)], work[at(k, j)]

        pivot = work[at(k, k)]
        for i in range(k + 1, last + 1):
            factor = work[at(i, k)] / pivot
            work[at(i, k)] = factor
            for j in range(k + 1, right + 1):
                work[at(i, j)] -= factor * work[at(k, j)]

    for k in range(n):
        p = pivots[k]
        if p != k:
            b[k], b[p] = b[p], b[k]
        for i in range(k + 1, min(n - 1, k + kl) + 1):
            b[i] -= work[at(i, k)] * b[k]

    x = np.empty(n)
    for k in range(n - 1, -1, -1):
        total = b[k]
        for j in range(k + 1, min(n - 1, k + kv) + 1):
            total -= work[at(k, j)] * x[j]
        x[k] = total / work[at(k, k)]

    if not np.all(np.isfinite(x)):
        raise SingularMatrixError(int(np.argmin(np.isfinite(x))))
    return x
