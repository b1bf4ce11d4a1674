"""
Harness tests
"""
