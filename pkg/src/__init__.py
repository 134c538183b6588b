"""
Steinberg Character Calculator

Exact evaluation of the Steinberg character of split reductive p-adic groups
on very regular and topologically unipotent elements, with independent
cross-checks through the affine Iwahori-Hecke algebra.
"""

__version__ = "1.0.0"
