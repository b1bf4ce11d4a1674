"""
Kernel tests
"""
