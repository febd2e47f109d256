"""Simulator for an Ising chain of spin-1/2 nuclei driven by resonant RF pulses.

Creates the (|000> - |101>)/sqrt(2) entangled state with a pi/2 + pi pulse
sequence and studies preparation fidelity versus the second- to
first-neighbor coupling ratio.
"""
from .chain import ChainParams, eigenenergies, eigenenergy, flip_resonance, omega_mk
from .drive import Pulse, rhs, to_interaction, to_schrodinger, w_element, w_matrix
from .integrator import (NormDriftError, OracleError, StepPolicy, Trajectory,
                         evolve_pulse, oracle_evolve, oracle_sequence,
                         run_sequence, step_rk4)
from .observables import (FidelityResult, SpinExpectations, bell_target,
                          expect_ixy, expect_iz, fidelity, populations,
                          spin_expectations)
from .state import INTERACTION, SCHRODINGER, StateVector, basis_state

__all__ = [
    "ChainParams", "Pulse", "StateVector", "StepPolicy", "Trajectory",
    "FidelityResult", "SpinExpectations", "NormDriftError", "OracleError",
    "INTERACTION", "SCHRODINGER",
    "eigenenergy", "eigenenergies", "omega_mk", "flip_resonance",
    "w_element", "w_matrix", "rhs", "to_schrodinger", "to_interaction",
    "step_rk4", "evolve_pulse", "run_sequence", "oracle_evolve",
    "oracle_sequence", "populations", "expect_iz", "expect_ixy",
    "spin_expectations", "fidelity", "bell_target", "basis_state",
]

__version__ = "0.1.0"
