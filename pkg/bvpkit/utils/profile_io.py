"""
Profile CSV Utilities
"""

import numpy as np

from bvpkit.models.core import SolutionProfile
from bvpkit.models.errors import DomainError


CSV_HEADER = 'r,v'


def write_profile_csv(profile, path):
    """Write ``r,v`` rows with 17 significant digits so values round-trip exactly"""
    data = np.column_stack((profile.abscissae, profile.values))
    np.savetxt(
        path,
        data,
        fmt='%.17g',
        delimiter=',',
        header=CSV_HEADER,
        comments='',
        encoding='utf-8',
    )


def read_profile_csv(path):
    with open(path, encoding='utf-8') as handle:
        header = handle.readline().strip()
        if header != CSV_HEADER:
            raise DomainError(f"expected header {CSV_HEADER!r}, found {header!r}")
        data = np.loadtxt(handle, delimiter=',', ndmin=2)
    return SolutionProfile(abscissae=data[:, 0], values=data[:, 1])
