"""
Star-geometry emitter-bath Hamiltonian, simulation parameters and observables.

``H = w_a sz/2 + sum_k w_k n_k - sx sum_k g_k (a_k + a_k^dagger)`` in
``omega_ref`` units. The emitter basis is ``(|+>, |->)`` with
``sz |+> = +|+>``; the bath starts in the vacuum.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..exceptions import ConfigError
from .bath import DiscretizedBath

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


class InitialState(str, enum.Enum):
    X_MINUS = "x_minus"
    X_PLUS = "x_plus"
    GROUND = "ground"
    EXCITED = "excited"


def emitter_vector(state) -> np.ndarray:
    state = InitialState(state)
    s = 1 / math.sqrt(2)
    return {
        InitialState.X_MINUS: np.array([s, -s], dtype=complex),
        InitialState.X_PLUS: np.array([s, s], dtype=complex),
        InitialState.EXCITED: np.array([1.0, 0.0], dtype=complex),
        InitialState.GROUND: np.array([0.0, 1.0], dtype=complex),
    }[state]


@dataclass(frozen=True)
class EmitterConfig:
    omega_a: float
    eta: float
    initial_state: InitialState = InitialState.X_MINUS

    def __post_init__(self):
        object.__setattr__(self, "initial_state", InitialState(self.initial_state))
        if not self.omega_a > 0:
            raise ConfigError("omega_a must be positive")
        if not self.eta > 0:
            raise ConfigError("eta must be positive")


class Engine(str, enum.Enum):
    KRYLOV = "krylov"
    MPS = "mps"


@dataclass(frozen=True)
class SimulationParams:
    dt: float = 5e-4
    t_final: float = 50.0
    engine: Engine = Engine.MPS
    n_ph: int = 2
    max_bond: int = 64
    truncation: float = 1e-12
    krylov_dim: int = 16
    sample_every: int = 1

    def __post_init__(self):
        object.__setattr__(self, "engine", Engine(self.engine))
        if not self.dt > 0:
            raise ConfigError("dt must be positive")
        if not self.t_final >= 0:
            raise ConfigError("t_final must be non-negative")
        if self.n_ph < 2:
            raise ConfigError("local boson dimension n_ph must be at least 2")
        if self.max_bond < 2:
            raise ConfigError("maximum bond dimension must be at least 2")
        if not 0 <= self.truncation < 1:
            raise ConfigError("truncation must lie in [0, 1)")
        if self.krylov_dim < 2:
            raise ConfigError("krylov_dim must be at least 2")
        if self.sample_every < 1:
            raise ConfigError("sample_every must be at least 1")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))


@dataclass(frozen=True)
class StarHamiltonian:
    """Operator description shared by both propagators."""

    omega_a: float
    frequencies: np.ndarray
    couplings: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.frequencies.size

    def emitter_term(self) -> np.ndarray:
        return 0.5 * self.omega_a * SIGMA_Z

    def mode_gate_generator(self, k: int, n_ph: int) -> np.ndarray:
        """``w_k n_k - g_k sx x_k`` on (emitter, mode k), shape ``(2 n_ph, 2 n_ph)``."""
        n, x = number_op(n_ph), position_op(n_ph)
        return self.frequencies[k] * np.kron(np.eye(2), n) - self.couplings[k] * np.kron(SIGMA_X, x)

    def sparse(self, n_ph: int) -> sp.csr_matrix:
        """Full matrix on emitter (x) mode_1 (x) ... (x) mode_N."""
        n_modes = self.n_modes
        n_op = sp.csr_matrix(number_op(n_ph))
        x_op = sp.csr_matrix(position_op(n_ph))

        def mode_op(op, k):
            left = sp.identity(n_ph**k, format="csr", dtype=complex)
            right = sp.identity(n_ph ** (n_modes - k - 1), format="csr", dtype=complex)
            return sp.kron(sp.kron(left, op), right, format="csr")

        dim_b = n_ph**n_modes
        h_bath = sp.csr_matrix((dim_b, dim_b), dtype=complex)
        x_sum = sp.csr_matrix((dim_b, dim_b), dtype=complex)
        for k in range(n_modes):
            h_bath = h_bath + self.frequencies[k] * mode_op(n_op, k)
            x_sum = x_sum + self.couplings[k] * mode_op(x_op, k)
        eye_bath = sp.identity(dim_b, format="csr", dtype=complex)
        h = (
            sp.kron(sp.csr_matrix(self.emitter_term()), eye_bath)
            + sp.kron(sp.identity(2, dtype=complex), h_bath)
            - sp.kron(sp.csr_matrix(SIGMA_X), x_sum)
        )
        return sp.csr_matrix(h)

    def dense(self, n_ph: int) -> np.ndarray:
        return self.sparse(n_ph).toarray()


def number_op(n_ph: int) -> np.ndarray:
    return np.diag(np.arange(n_ph, dtype=float)).astype(complex)


def position_op(n_ph: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, n_ph, dtype=float)), 1)
    return (a + a.T).astype(complex)


def build_hamiltonian(bath: DiscretizedBath, emitter: EmitterConfig) -> StarHamiltonian:
    return StarHamiltonian(float(emitter.omega_a), bath.frequencies.copy(), bath.couplings.copy())


@dataclass(frozen=True)
class Observables:
    sx: float
    sy: float
    sz: float
    norm: float


def emitter_density_matrix(state: np.ndarray) -> np.ndarray:
    """Reduced emitter state from a vector whose leading axis is the emitter."""
    psi = np.asarray(state).reshape(2, -1)
    return psi @ psi.conj().T


def observables(state: np.ndarray) -> Observables:
    """Pauli expectations of the (normalized) emitter and the state norm."""
    rho = emitter_density_matrix(state)
    norm = float(np.real(np.trace(rho)))
    scale = 1.0 / norm if norm > 0 else 0.0
    return Observables(
        float(np.real(np.trace(rho @ SIGMA_X))) * scale,
        float(np.real(np.trace(rho @ SIGMA_Y))) * scale,
        float(np.real(np.trace(rho @ SIGMA_Z))) * scale,
        math.sqrt(norm),
    )


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    sx: np.ndarray
    sz: np.ndarray
    norm_deviation: np.ndarray
    max_bond: np.ndarray
    energy: np.ndarray
    truncation_error: float = 0.0
    bond_exhausted: bool = False
    engine: str = ""
    notes: tuple = field(default=())
