"""
Test suite for the VAO nonlinearity compensation workbench
"""
