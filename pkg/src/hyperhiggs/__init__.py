"""Hyperboloidal evolution and energy diagnostics for wave-Klein-Gordon-Dirac systems.

Desk-scale numerical companion for the spontaneously broken abelian U(1)
model and the Dirac-Proca system on Minkowski spacetime: constraint-compatible
initial data, method-of-lines evolution, and the full family of hyperboloidal
energy functionals and decay/constraint diagnostics.
"""

__version__ = "0.1.0"
