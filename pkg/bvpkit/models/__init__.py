"""
Domain Models Package
"""
