"""Explicit eigenvectors Lambda |Psi_l> in the x-basis.

``|Psi_l>`` is the projector product ``prod_p (1 + (-1)^{l_p} B_p)`` applied
to the all-plus basis state.  Every factor is built in integer arithmetic, so
amplitudes stay exact until the single normalisation at the end.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import pauli
from .lattice import Lattice, LatticeKind
from .pauli import PauliString
from .spectrum import (Couplings, QuantumNumbers, check_qn, energy, iter_quantum_numbers,
                       random_quantum_numbers)


class ZeroStateError(ValueError):
    """The projector product annihilates the reference state."""


@dataclass(frozen=True)
class EigenstateHandle:
    qn: QuantumNumbers
    vector: np.ndarray
    energy: float


def _psi_l_unnormalized(lattice: Lattice, l: Sequence[int]) -> np.ndarray:
    if len(l) != lattice.num_plaquettes:
        raise ValueError(f"l has {len(l)} entries, lattice has {lattice.num_plaquettes} plaquettes")
    v = pauli.omega_plus(lattice.num_links, dtype=np.int64)
    for bit, b in zip(l, pauli.plaquette_operators(lattice)):
        v = pauli.apply_projector_factor(bit, b, v)
    return v


def _normalize(v: np.ndarray) -> np.ndarray:
    norm2 = int(np.dot(v, v))
    if norm2 == 0:
        raise ZeroStateError("projector product vanishes")
    return v / np.sqrt(norm2)


def build_psi_l(lattice: Lattice, l: Sequence[int]) -> np.ndarray:
    """Normalised ``prod_p (1 + (-1)^{l_p} B_p) |Omega_+>``.

    On the torus the plaquettes multiply to the identity, so the product is
    zero whenever ``sum(l)`` is odd; that raises :class:`ZeroStateError`.
    """
    return _normalize(_psi_l_unnormalized(lattice, l))


def build_lambda(lattice: Lattice, qn: QuantumNumbers) -> PauliString:
    check_qn(lattice, qn)
    if lattice.kind is LatticeKind.TWO_LEG:
        bits = qn.r + qn.s
    elif lattice.kind is LatticeKind.THREE_LEG:
        bits = qn.r + qn.s + qn.t
    else:
        bits = qn.s
    # excitation_curve lists the Lambda support in the same order
    links = [k for k, b in zip(lattice.excitation_curve, bits) if b]
    return PauliString.from_z(links, lattice.num_links)


def build_eigenstate(lattice: Lattice, qn: QuantumNumbers, c: Couplings) -> EigenstateHandle:
    v = pauli.apply(build_lambda(lattice, qn), _psi_l_unnormalized(lattice, qn.l))
    return EigenstateHandle(qn, _normalize(v), energy(lattice, qn, c))


def build_top_state(lattice: Lattice, c: Couplings) -> EigenstateHandle:
    """``prod_i (1 - B_i) |Omega_->``, the highest state of the two-leg ladder.

    It carries eigenvalue -1 for every vertex and plaquette.  Its labels are
    ``l = r = 1, s = 0``: it equals ``+-Lambda_{1,0}|Psi_1>``.
    """
    if lattice.kind is not LatticeKind.TWO_LEG:
        raise ValueError("top state construction needs every vertex of odd degree (two-leg ladder)")
    v = pauli.omega_minus(lattice.num_links, dtype=np.int64)
    for b in pauli.plaquette_operators(lattice):
        v = pauli.apply_projector_factor(1, b, v)
    N = lattice.size
    qn = QuantumNumbers(l=(1,) * N, r=(1,) * N, s=(0,) * N)
    return EigenstateHandle(qn, _normalize(v), N * (2 * c.J + c.K))


def all_eigenstates(lattice: Lattice, c: Couplings) -> list[EigenstateHandle]:
    """Every labelled eigenstate, in enumeration order (small ladders only)."""
    return [build_eigenstate(lattice, qn, c) for qn in iter_quantum_numbers(lattice)]


def eigenvector_matrix(handles: Sequence[EigenstateHandle]) -> np.ndarray:
    return np.stack([h.vector for h in handles], axis=1)


def gram_matrix(handles: Sequence[EigenstateHandle]) -> np.ndarray:
    V = eigenvector_matrix(handles)
    return V.T @ V


def random_eigenstates(lattice: Lattice, c: Couplings, count: int,
                       rng: np.random.Generator) -> list[EigenstateHandle]:
    even = lattice.kind is LatticeKind.SQUARE_TORUS
    return [build_eigenstate(lattice, random_quantum_numbers(lattice, rng, even_l=even), c)
            for _ in range(count)]


# --- binary dump -------------------------------------------------------------

STATE_MAGIC = b"KLSTATE1"
_HEADER = struct.Struct("<8sQ")  # magic, num_links: 16 bytes


def save_state(path: str | Path, vector: np.ndarray, num_links: int) -> None:
    vector = np.asarray(vector, dtype="<f8")
    if vector.shape != (1 << num_links,):
        raise ValueError("vector length does not match num_links")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(STATE_MAGIC, num_links))
        fh.write(vector.tobytes())


def load_state(path: str | Path) -> tuple[np.ndarray, int]:
    data = Path(path).read_bytes()
    magic, num_links = _HEADER.unpack_from(data)
    if magic != STATE_MAGIC:
        raise ValueError(f"{path}: not a state dump")
    vector = np.frombuffer(data, dtype="<f8", offset=_HEADER.size)
    if vector.shape != (1 << num_links,):
        raise ValueError(f"{path}: truncated state dump")
    return vector.astype(np.float64), num_links
