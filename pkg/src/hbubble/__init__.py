"""Degree-2 H-bubbles on the unit disk: closed forms, quadrature and reduced energies."""

from .bubbles import BubbleParams, MapSample, RotationSO3, bubble_eval, bubble_grad, degree_numeric
from .energy import (EnergyBreakdown, InteractionInputs, ReducedEnergyInputs, energy_free,
                     energy_full, hessian_A, reduced_energy_F, reduced_energy_grad, sigma_energy)
from .harmonic import DatumField, HarmonicField, poisson_extend, robin_closed, robin_numeric
from .reduced_solver import ReducedState, SolveReport, init_state, newton_solve

__version__ = "0.1.0"

__all__ = [
    "BubbleParams", "MapSample", "RotationSO3", "bubble_eval", "bubble_grad", "degree_numeric",
    "EnergyBreakdown", "InteractionInputs", "ReducedEnergyInputs", "energy_free", "energy_full",
    "hessian_A", "reduced_energy_F", "reduced_energy_grad", "sigma_energy",
    "DatumField", "HarmonicField", "poisson_extend", "robin_closed", "robin_numeric",
    "ReducedState", "SolveReport", "init_state", "newton_solve",
]
