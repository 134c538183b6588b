"""
Test suite for the Steinberg character calculator
"""
