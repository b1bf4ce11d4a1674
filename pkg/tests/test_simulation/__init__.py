"""
Simulation tests
"""
