"""
modspace
========
Modulation spaces M^s_{p,q} on periodic grids: norms, box decompositions,
Fourier-multiplier propagators, Duhamel solvers and critical-exponent probes.
"""

__version__ = "1.0.0"
