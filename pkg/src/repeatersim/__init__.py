"""Hybrid quantum-dot / color-center repeater chain toolkit.

Submodules
----------
twoqubit    two-qubit states, gates, noise channels, metrics
photonics   Lorentzian modes and Fabry-Perot filtering
interface   cavity reflection model and heralded spin-spin states
presets     default emitter, cavity and chain parameter sets
optimize    derivative-free cavity optimization and parameter sweeps
chain       repeater-chain timing, yields, distillation, key rates
scenario    scenario-file ingestion
cli         command-line entry point
"""

__version__ = "0.1.0"
