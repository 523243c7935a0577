"""Exact solution of the Kitaev model on two- and three-leg ladders and the square torus.

Closed-form spectra, eigenstates, thermodynamics and reduced density
matrices, each checked against a brute-force x-basis oracle.
"""

from .lattice import Lattice, LatticeKind, build
from .pauli import PauliString
from .spectrum import Couplings, QuantumNumbers, enumerate_spectrum
from .thermo import ThermalPoint

__all__ = ["Couplings", "Lattice", "LatticeKind", "PauliString", "QuantumNumbers",
           "ThermalPoint", "build", "enumerate_spectrum"]
__version__ = "0.1.0"
