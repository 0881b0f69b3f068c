"""
bvpkit - two-point boundary value problem solvers
"""

__version__ = '1.0.0'
