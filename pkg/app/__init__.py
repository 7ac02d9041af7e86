"""
historylab

History-space analysers over finite-dimensional Hilbert spaces: the commutant subspace,
path measures, consistency defects, refinement checks and trajectory sampling.
"""

__version__ = "0.1.0"
