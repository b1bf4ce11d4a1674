"""
Utility tests
"""
