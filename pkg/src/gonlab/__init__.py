"""Parametric geometry of numbers: successive minima along rays, exponent brackets, checks."""

from .errors import BudgetExceeded, GonlabError, Inconclusive, InputError
from .exact import LogReal
from .exponents import (
    ExponentEstimate,
    dual_weighted_Omega,
    dual_weighted_omega,
    inhom_omega,
    lattice_Omega,
    lattice_omega,
    lattice_psi,
    weighted_Omega,
    weighted_omega,
)
from .lattice import Lattice, ThetaMatrix, dual, identity_lattice, make_lattice, theta_lattice
from .minima import MinimaProfile, successive_minima
from .params import TauVector, Weights, gamma_delta, mu_of_gamma, mu_star_of_delta

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ExponentEstimate",
    "GonlabError",
    "Inconclusive",
    "InputError",
    "Lattice",
    "LogReal",
    "MinimaProfile",
    "TauVector",
    "ThetaMatrix",
    "Weights",
    "dual",
    "dual_weighted_Omega",
    "dual_weighted_omega",
    "gamma_delta",
    "identity_lattice",
    "inhom_omega",
    "lattice_Omega",
    "lattice_omega",
    "lattice_psi",
    "make_lattice",
    "mu_of_gamma",
    "mu_star_of_delta",
    "successive_minima",
    "theta_lattice",
    "weighted_Omega",
    "weighted_omega",
]
