"""Emitter dynamics against a discretized effective bath."""
from __future__ import annotations

from .bath import DiscretizedBath, discretize, explicit_bath, single_mode_bath
from .krylov import evolve_krylov, lanczos_expm
from .model import (
    EmitterConfig,
    Engine,
    InitialState,
    Observables,
    SimulationParams,
    StarHamiltonian,
    Trajectory,
    build_hamiltonian,
    emitter_density_matrix,
    emitter_vector,
    observables,
)
from .mps import MPSState, evolve_mps, paired_layout


def simulate(bath: DiscretizedBath, emitter: EmitterConfig, params: SimulationParams, **kwargs) -> Trajectory:
    """Build the star Hamiltonian and run the engine selected in ``params``."""
    h = build_hamiltonian(bath, emitter)
    if params.engine is Engine.KRYLOV:
        return evolve_krylov(h, emitter.initial_state, params)
    return evolve_mps(h, emitter.initial_state, params, **kwargs)


__all__ = [
    "DiscretizedBath", "discretize", "explicit_bath", "single_mode_bath",
    "evolve_krylov", "lanczos_expm", "EmitterConfig", "Engine", "InitialState",
    "Observables", "SimulationParams", "StarHamiltonian", "Trajectory",
    "build_hamiltonian", "emitter_density_matrix", "emitter_vector", "observables",
    "MPSState", "evolve_mps", "paired_layout", "simulate",
]
