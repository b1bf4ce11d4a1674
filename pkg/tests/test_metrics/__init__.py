"""
Metrics tests
"""
