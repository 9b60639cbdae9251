"""Bound states of a 2D Dirac oscillator threaded by an Aharonov-Bohm flux line."""
from .spectrum import (
    Branch,
    EnergyLevel,
    FluxDecomposition,
    PhysicalParams,
    QuantumNumbers,
    Regularity,
    classify_state,
    decompose_flux,
    energy_level,
)

__all__ = [
    "Branch",
    "EnergyLevel",
    "FluxDecomposition",
    "PhysicalParams",
    "QuantumNumbers",
    "Regularity",
    "classify_state",
    "decompose_flux",
    "energy_level",
]
__version__ = "0.1.0"
