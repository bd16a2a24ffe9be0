"""
horocurv

Numerical toolkit for the shape operator and intrinsic scalar curvature of
horospheres in negatively curved model spaces, computed through the matrix
Riccati equation along geodesics.
"""

__version__ = "0.1.0"
