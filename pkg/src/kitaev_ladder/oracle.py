"""Brute-force reference: the Hamiltonian as an explicit x-basis operator.

Nothing here uses the closed-form spectrum, states or thermodynamics; the
only shared code is the lattice geometry and the Pauli bitmask algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import pauli
from .lattice import Lattice
from .pauli import PauliString
from .spectrum import BudgetError, Couplings

MATVEC_MAX_LINKS = 18
DENSE_MAX_LINKS = 12


@dataclass
class SparseHamiltonian:
    lattice: Lattice
    couplings: Couplings
    terms: list[tuple[PauliString, float]]
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def num_links(self) -> int:
        return self.lattice.num_links

    @property
    def dimension(self) -> int:
        return 1 << self.num_links

    @cached_property
    def _diagonal(self) -> np.ndarray:
        # the vertex terms are pure X: diagonal in the x-basis
        diag = np.zeros(self.dimension)
        for p, coeff in self.terms:
            if p.zmask == 0:
                diag += coeff * p.sign * pauli.parity_signs(self.num_links, p.xmask)
        return diag

    @cached_property
    def _flips(self) -> list[tuple[int, float]]:
        out = []
        for p, coeff in self.terms:
            if p.zmask:
                if p.xmask:
                    raise NotImplementedError("mixed X/Z terms do not occur in this model")
                out.append((p.zmask, coeff * p.sign))
        return out

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        out = self._diagonal * v
        idx = pauli.basis_indices(self.num_links)
        for zmask, coeff in self._flips:
            out += coeff * v[idx ^ zmask]
        return out

    def matvec_termwise(self, v: np.ndarray) -> np.ndarray:
        """Same product, one :func:`pauli.apply` per term (slower second path)."""
        out = np.zeros(self.dimension)
        for p, coeff in self.terms:
            out += coeff * pauli.apply(p, np.asarray(v, dtype=np.float64))
        return out

    def dense(self) -> np.ndarray:
        if self.num_links > DENSE_MAX_LINKS:
            raise BudgetError(f"dense H needs 2^{self.num_links} > 2^{DENSE_MAX_LINKS} dimension")
        if "dense" not in self._cache:
            H = np.diag(self._diagonal)
            idx = pauli.basis_indices(self.num_links)
            for zmask, coeff in self._flips:
                H[idx ^ zmask, idx] += coeff
            self._cache["dense"] = H
        return self._cache["dense"]

    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        if "eigh" not in self._cache:
            self._cache["eigh"] = np.linalg.eigh(self.dense())
        return self._cache["eigh"]


def build_hamiltonian(lattice: Lattice, c: Couplings) -> SparseHamiltonian:
    """H = -J sum_s A_s - K sum_p B_p."""
    if lattice.num_links > MATVEC_MAX_LINKS:
        raise BudgetError(f"{lattice.num_links} links exceed the matvec budget of {MATVEC_MAX_LINKS}")
    n = lattice.num_links
    terms = [(PauliString.from_x(star, n), -c.J) for star in lattice.vertex_stars]
    terms += [(PauliString.from_z(b, n), -c.K) for b in lattice.plaquette_boundaries]
    return SparseHamiltonian(lattice, c, terms)


def full_diagonalization(h: SparseHamiltonian) -> np.ndarray:
    return np.sort(h.eigh()[0])


def _boltzmann(h: SparseHamiltonian, beta: float) -> tuple[np.ndarray, np.ndarray, float]:
    E, V = h.eigh()
    shift = E.min()
    return np.exp(-beta * (E - shift)), V, shift


def log_thermal_trace(h: SparseHamiltonian, beta: float) -> float:
    """ln Tr exp(-beta H)."""
    w, _, shift = _boltzmann(h, beta)
    return float(np.log(w.sum()) - beta * shift)


def thermal_trace(h: SparseHamiltonian, f: PauliString | None, beta: float) -> float:
    """Tr(f exp(-beta H)), with ``f=None`` meaning the identity."""
    w, V, shift = _boltzmann(h, beta)
    scale = np.exp(-beta * shift)
    if f is None:
        return float(w.sum() * scale)
    # diagonal of V^T F V without forming F
    FV = np.stack([pauli.apply(f, V[:, k]) for k in range(V.shape[1])], axis=1)
    expect = np.einsum("ik,ik->k", V, FV)
    return float(np.dot(w, expect) * scale)


def thermal_average(h: SparseHamiltonian, f: PauliString, beta: float) -> float:
    w, V, _ = _boltzmann(h, beta)
    FV = np.stack([pauli.apply(f, V[:, k]) for k in range(V.shape[1])], axis=1)
    expect = np.einsum("ik,ik->k", V, FV)
    return float(np.dot(w, expect) / w.sum())


def thermal_density_matrix(h: SparseHamiltonian, beta: float) -> np.ndarray:
    w, V, _ = _boltzmann(h, beta)
    return (V * (w / w.sum())) @ V.T


def thermal_energy(h: SparseHamiltonian, beta: float) -> float:
    w, _, _ = _boltzmann(h, beta)
    E = h.eigh()[0]
    return float(np.dot(w, E) / w.sum())


def thermal_entropy(h: SparseHamiltonian, beta: float) -> float:
    """Von Neumann entropy (nats) of the Gibbs state."""
    w, _, _ = _boltzmann(h, beta)
    p = w / w.sum()
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def residual(h: SparseHamiltonian, v: np.ndarray, e: float) -> float:
    """||H v - e v||_2."""
    return float(np.linalg.norm(h.matvec(v) - e * np.asarray(v)))
