"""
agt_simulator — Simulator for adiabatic gate teleportation

Builds, diagonalizes and propagates the piecewise adiabatic Hamiltonians of the
adiabatic-gate-teleportation scheme on at most eight qubits.
"""

__version__ = "1.0.0"
