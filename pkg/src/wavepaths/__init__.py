"""Particle paths beneath linear shallow-water waves with uniform vorticity."""

from .classifier import ClassifierAnalysis, classify, classify_flow, sign_table
from .errors import InputError, NumericalError, WavePathsError
from .irrotational import classify_irrotational, trajectory_irrotational
from .model import FlowConfig, ParticleState, Shape, Trajectory, TrajectoryClass, velocity_field
from .oracle import empirical_class, integrate_raw
from .vorticity import first_integral, integrate_orbit, orbit_period

__all__ = [
    "ClassifierAnalysis", "FlowConfig", "InputError", "NumericalError", "ParticleState", "Shape",
    "Trajectory", "TrajectoryClass", "WavePathsError", "classify", "classify_flow",
    "classify_irrotational", "empirical_class", "first_integral", "integrate_orbit",
    "integrate_raw", "orbit_period", "sign_table", "trajectory_irrotational", "velocity_field",
]
