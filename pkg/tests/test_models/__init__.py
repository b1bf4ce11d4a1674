"""
Model tests
"""
