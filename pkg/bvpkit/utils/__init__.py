"""
bvpkit Utilities Package
"""
