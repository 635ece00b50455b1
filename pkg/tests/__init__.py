"""
Test suite for conc-bounds.
"""
