"""Pants-complex constructions in hyperbolic 3-space.

Holonomy representations for 2-complexes built from skew pairs of pants,
numerical quasi-isometry certification, sampled verification of the
underlying hyperbolic trigonometry, and exact integer homology.
"""

__version__ = "0.1.0"
