"""
Solver Services Package
"""
