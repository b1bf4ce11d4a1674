"""
Equalizer tests
"""
