"""
Matrix-product-state propagation of the star Hamiltonian.

The chain holds the emitter at one end followed by the modes in pairs of
negative and positive frequency. One time step is the symmetric splitting

    exp(-i H_A dt/2) * prod_k exp(-i dt h_k) * exp(-i H_A dt/2),
    h_k = w_k n_k - g_k sx x_k,

where the ``h_k`` all commute, so the product is exact. It is applied as a
swap network: the emitter is carried through the chain, each two-site gate
acting on (emitter, mode k) and exchanging their positions, and the sweep
direction alternates between steps. The orthogonality centre always sits on
the emitter, so the truncation after each gate is optimal and the emitter's
reduced state is read from a single tensor.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from ..exceptions import BondDimensionError
from .model import (
    SIGMA_X,
    SimulationParams,
    StarHamiltonian,
    Trajectory,
    emitter_vector,
    number_op,
    position_op,
)

EMITTER = -1


def paired_layout(frequencies: np.ndarray) -> list[int]:
    """Mode indices ordered as (-w_1, +w_1, -w_2, +w_2, ...) by increasing ``|w|``."""
    neg = sorted(np.flatnonzero(frequencies < 0), key=lambda k: abs(frequencies[k]))
    pos = sorted(np.flatnonzero(frequencies >= 0), key=lambda k: frequencies[k])
    out: list[int] = []
    for i in range(max(len(neg), len(pos))):
        if i < len(neg):
            out.append(int(neg[i]))
        if i < len(pos):
            out.append(int(pos[i]))
    return out


def _svd(m: np.ndarray):
    try:
        return la.svd(m, full_matrices=False, lapack_driver="gesdd", check_finite=False)
    except la.LinAlgError:
        return la.svd(m, full_matrices=False, lapack_driver="gesvd", check_finite=False)


@dataclass
class MPSState:
    """Product-state-initialized MPS with bookkeeping for the swap network."""

    tensors: list[np.ndarray]
    layout: list[int]  # site label per position; EMITTER or a mode index
    max_bond: int
    truncation: float
    discarded: float = 0.0
    exhausted: bool = False

    @classmethod
    def product(cls, emitter: np.ndarray, mode_order: list[int], n_ph: int, max_bond: int, truncation: float):
        tensors = [np.asarray(emitter, dtype=complex).reshape(1, 2, 1)]
        vac = np.zeros((1, n_ph, 1), dtype=complex)
        vac[0, 0, 0] = 1.0
        tensors += [vac.copy() for _ in mode_order]
        return cls(tensors, [EMITTER] + list(mode_order), max_bond, truncation)

    @property
    def emitter_position(self) -> int:
        return self.layout.index(EMITTER)

    def bond_dimensions(self) -> list[int]:
        return [t.shape[2] for t in self.tensors[:-1]]

    def _split(self, theta: np.ndarray, rows: int, cols: int):
        u, s, vh = _svd(np.ascontiguousarray(theta).reshape(rows, cols))
        weight = s**2
        total = weight.sum()
        if total == 0:
            raise BondDimensionError("state collapsed to zero norm")
        tail = np.cumsum(weight[::-1])[::-1] / total  # tail[i] = weight discarded if keeping i values
        keep = int(np.searchsorted(-tail, -self.truncation, side="left"))
        keep = max(1, min(keep, s.size))
        if keep > self.max_bond:
            self.exhausted = True
            keep = self.max_bond
        lost = float(tail[keep]) if keep < s.size else 0.0
        self.discarded += lost
        s = s[:keep] / np.sqrt(1.0 - lost) if lost < 1 else s[:keep]
        return u[:, :keep], s, vh[:keep]

    def apply_emitter(self, op: np.ndarray):
        p = self.emitter_position
        self.tensors[p] = np.einsum("ij,ajb->aib", op, self.tensors[p])

    def sweep(self, gates: dict[int, np.ndarray]):
        """Pass the emitter to the other end, applying each mode's gate on the way."""
        n = len(self.tensors)
        if self.emitter_position == 0:
            for p in range(n - 1):
                a, b = self.tensors[p], self.tensors[p + 1]
                k = self.layout[p + 1]
                dl, dr, d = a.shape[0], b.shape[2], b.shape[1]
                theta = (a.reshape(dl * 2, -1) @ b.reshape(b.shape[0], -1)).reshape(dl, 2 * d, dr)
                theta = (gates[k] @ theta).reshape(dl, 2, d, dr).transpose(0, 2, 1, 3)
                u, s, vh = self._split(theta, dl * d, 2 * dr)
                self.tensors[p] = u.reshape(dl, d, -1)
                self.tensors[p + 1] = (s[:, None] * vh).reshape(-1, 2, dr)
                self.layout[p], self.layout[p + 1] = k, EMITTER
        elif self.emitter_position == n - 1:
            for p in range(n - 1, 0, -1):
                a, b = self.tensors[p - 1], self.tensors[p]
                k = self.layout[p - 1]
                dl, dr, d = a.shape[0], b.shape[2], a.shape[1]
                theta = (a.reshape(dl * d, -1) @ b.reshape(b.shape[0], -1)).reshape(dl, d, 2, dr)
                theta = theta.transpose(0, 2, 1, 3).reshape(dl, 2 * d, dr)
                theta = gates[k] @ theta
                u, s, vh = self._split(theta, dl * 2, d * dr)
                self.tensors[p - 1] = (u * s[None, :]).reshape(dl, 2, -1)
                self.tensors[p] = vh.reshape(-1, d, dr)
                self.layout[p - 1], self.layout[p] = EMITTER, k
        else:
            raise RuntimeError("emitter must sit at an end of the chain before a sweep")

    def emitter_density_matrix(self) -> np.ndarray:
        t = self.tensors[self.emitter_position]
        return np.einsum("aib,ajb->ij", t, t.conj())

    def energy(self, h: StarHamiltonian, n_ph: int) -> float:
        """``<H>`` by contracting a bond-dimension-3 operator chain."""
        env = np.zeros((1, 3, 1), dtype=complex)
        env[0, 0, 0] = 1.0
        seen_emitter = False
        eye_b = np.eye(n_ph, dtype=complex)
        n_op, x_op = number_op(n_ph), position_op(n_ph)
        for label, t in zip(self.layout, self.tensors):
            d = t.shape[1]
            w = np.zeros((3, 3, d, d), dtype=complex)
            if label == EMITTER:
                w[0, 0] = np.eye(2)
                w[2, 2] = np.eye(2)
                w[0, 2] = h.emitter_term()
                w[0, 1] = -SIGMA_X
                w[1, 2] = -SIGMA_X
                seen_emitter = True
            else:
                w[0, 0] = eye_b
                w[1, 1] = eye_b
                w[2, 2] = eye_b
                w[0, 2] = h.frequencies[label] * n_op
                if seen_emitter:
                    w[1, 2] = h.couplings[label] * x_op
                else:
                    w[0, 1] = h.couplings[label] * x_op
            env = np.einsum("awc,aib,wvij,cjd->bvd", env, t.conj(), w, t, optimize=True)
        norm = self.norm_squared()
        return float(env[0, 2, 0].real / norm)

    def norm_squared(self) -> float:
        return float(np.real(np.trace(self.emitter_density_matrix())))


def _mode_gates(h: StarHamiltonian, n_ph: int, dt: float) -> dict[int, np.ndarray]:
    """Per-mode propagators as ``(2 n_ph, 2 n_ph)`` matrices."""
    gates = {}
    for k in range(h.n_modes):
        u = la.expm(-1j * dt * h.mode_gate_generator(k, n_ph))
        gates[k] = u  # acts on the (emitter, mode) pair index
    return gates


def evolve_mps(
    h: StarHamiltonian,
    initial_state,
    params: SimulationParams,
    track_energy: bool = True,
    strict_bond: bool = False,
) -> Trajectory:
    """Second-order swap-network propagation; see the module docstring.

    Bond exhaustion (a cut that needed more than ``max_bond`` values to stay
    within ``truncation``) is recorded on the trajectory and, with
    ``strict_bond``, raised as :class:`BondDimensionError`.
    """
    state = MPSState.product(
        emitter_vector(initial_state), paired_layout(h.frequencies), params.n_ph,
        params.max_bond, params.truncation,
    )
    gates = _mode_gates(h, params.n_ph, params.dt)
    half_a = la.expm(-0.5j * params.dt * h.emitter_term())
    times, sx, sz, nd, bonds, en = [], [], [], [], [], []

    def record(step):
        rho = state.emitter_density_matrix()
        norm = float(np.real(np.trace(rho)))
        times.append(step * params.dt)
        sx.append(float(2 * rho[0, 1].real / norm))
        sz.append(float((rho[0, 0] - rho[1, 1]).real / norm))
        nd.append(abs(np.sqrt(norm) - 1.0))
        bonds.append(max(state.bond_dimensions(), default=1))
        en.append(state.energy(h, params.n_ph) if track_energy else np.nan)

    record(0)
    for step in range(1, params.n_steps + 1):
        state.apply_emitter(half_a)
        state.sweep(gates)
        state.apply_emitter(half_a)
        if strict_bond and state.exhausted:
            raise BondDimensionError(
                f"bond dimension {params.max_bond} exhausted at t = {step * params.dt:g}"
            )
        if step % params.sample_every == 0 or step == params.n_steps:
            record(step)
    notes = ("bond dimension exhausted",) if state.exhausted else ()
    return Trajectory(
        np.array(times), np.array(sx), np.array(sz), np.array(nd), np.array(bonds, dtype=int),
        np.array(en), truncation_error=state.discarded, bond_exhausted=state.exhausted,
        engine="mps", notes=notes,
    )
