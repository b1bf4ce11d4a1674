"""
Receiver chain tests
"""
