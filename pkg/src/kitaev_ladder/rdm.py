"""Reduced density matrices of ladder subsystems.

Subsystem basis convention: bit ``j`` of a subsystem index is the x-basis
bit of ``links[j]``, so the subsystem index is ``sum_j bit(links[j]) << j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import pauli
from .lattice import Lattice, LatticeKind
from .spectrum import BudgetError, all_energies
from .states import all_eigenstates, eigenvector_matrix
from .thermo import ThermalPoint, wilson_x_average

KEEP_MAX_LINKS = 12
ENSEMBLE_MAX_N = 3


@dataclass(frozen=True)
class Subsystem:
    name: str
    links: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.links)


def _two_leg(lattice: Lattice):
    if lattice.kind is not LatticeKind.TWO_LEG:
        raise ValueError("subsystems A-D are defined on the two-leg ladder")


def subsystem_A(lattice: Lattice, leg: str = "upper") -> Subsystem:
    _two_leg(lattice)
    return Subsystem("A", lattice.groups[leg])


def subsystem_B(lattice: Lattice) -> Subsystem:
    _two_leg(lattice)
    return Subsystem("B", lattice.groups["rung"])


def subsystem_C(lattice: Lattice, rungs: Sequence[int]) -> Subsystem:
    _two_leg(lattice)
    rungs = tuple(sorted(set(int(i) for i in rungs)))
    if not rungs:
        raise ValueError("C must contain at least one rung")
    if len(rungs) >= lattice.size:
        raise ValueError("C must be a proper subset of the rungs; all rungs is subsystem B")
    if rungs[0] < 0 or rungs[-1] >= lattice.size:
        raise ValueError(f"rung index out of range 0..{lattice.size - 1}")
    return Subsystem("C", tuple(lattice.groups["rung"][i] for i in rungs))


def subsystem_D(lattice: Lattice, site: int = 0) -> Subsystem:
    """The two leg links opposite each other at ``site``: (i', i'')."""
    _two_leg(lattice)
    return Subsystem("D", (lattice.groups["lower"][site], lattice.groups["upper"][site]))


# --- brute-force partial traces -----------------------------------------------

def _split_indices(keep: Sequence[int], num_links: int) -> tuple[np.ndarray, np.ndarray]:
    idx = pauli.basis_indices(num_links)
    rest = [k for k in range(num_links) if k not in set(keep)]
    sub = np.zeros_like(idx)
    env = np.zeros_like(idx)
    for j, k in enumerate(keep):
        sub |= ((idx >> k) & 1) << j
    for j, k in enumerate(rest):
        env |= ((idx >> k) & 1) << j
    return sub, env


def partial_trace(state: np.ndarray, keep: Sequence[int] | Subsystem, num_links: int) -> np.ndarray:
    """Reduce a pure state (1-D) or density matrix (2-D) onto ``keep``.

    ``state`` may also be a 2-D stack of column vectors with a 1-D weight
    vector passed through :func:`ensemble_partial_trace`.
    """
    links = keep.links if isinstance(keep, Subsystem) else tuple(keep)
    if len(links) > KEEP_MAX_LINKS:
        raise BudgetError(f"kept subsystem of {len(links)} links exceeds 2^{KEEP_MAX_LINKS}")
    sub, env = _split_indices(links, num_links)
    dk, de = 1 << len(links), 1 << (num_links - len(links))
    state = np.asarray(state)
    if state.ndim == 1:
        M = np.zeros((dk, de), dtype=state.dtype)
        M[sub, env] = state
        return M @ M.conj().T
    # rho_sub[a, b] = sum_e rho[(a, e), (b, e)]
    order = np.empty(dk * de, dtype=np.int64)
    order[sub * de + env] = np.arange(dk * de)
    R = state[np.ix_(order, order)].reshape(dk, de, dk, de)
    return np.einsum("aebe->ab", R)


def ensemble_partial_trace(vectors: np.ndarray, weights: np.ndarray,
                           keep: Sequence[int] | Subsystem, num_links: int) -> np.ndarray:
    """sum_k w_k tr_env |v_k><v_k| for the columns ``v_k`` of ``vectors``."""
    links = keep.links if isinstance(keep, Subsystem) else tuple(keep)
    sub, env = _split_indices(links, num_links)
    dk, de = 1 << len(links), 1 << (num_links - len(links))
    T = np.zeros((dk, de, vectors.shape[1]))
    T[sub, env, :] = vectors * np.sqrt(weights)[None, :]
    return np.einsum("aes,bes->ab", T, T)


def thermal_rdm_closed_form_states(lattice: Lattice, keep: Sequence[int] | Subsystem,
                                   tp: ThermalPoint) -> np.ndarray:
    """Boltzmann-weighted partial trace over every labelled eigenstate."""
    if lattice.size > ENSEMBLE_MAX_N or lattice.num_links > KEEP_MAX_LINKS:
        raise BudgetError("thermal eigenstate ensembles are limited to small ladders")
    c = tp.couplings
    handles = all_eigenstates(lattice, c)
    E = all_energies(lattice, c)
    w = np.exp(-tp.beta * (E - E.min()))
    return ensemble_partial_trace(eigenvector_matrix(handles), w / w.sum(), keep, lattice.num_links)


# --- closed forms --------------------------------------------------------------

def maximally_mixed(n_links: int) -> np.ndarray:
    d = 1 << n_links
    return np.eye(d) / d


def rho_A_closed(N: int) -> np.ndarray:
    """One full leg: I / 2^N at every temperature and in every eigenstate."""
    if N > KEEP_MAX_LINKS:
        raise BudgetError(f"dense I/2^{N} exceeds the 2^{KEEP_MAX_LINKS} limit")
    return maximally_mixed(N)


def parity_projector_diag(n: int, parity: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    return ((np.bitwise_count(idx) & 1) == parity).astype(float)


@dataclass(frozen=True)
class ParityMixture:
    """w_even * sigma_even + w_odd * sigma_odd on an n-link register.

    sigma_even (sigma_odd) is the uniform mixture of the 2^{n-1} x-basis
    states with an even (odd) number of |-> links.
    """

    weight_even: float
    weight_odd: float
    size: int

    def __post_init__(self):
        if self.weight_even < -1e-15 or self.weight_odd < -1e-15:
            raise ValueError("weights must be non-negative")
        if abs(self.weight_even + self.weight_odd - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")

    def eigenvalues(self) -> tuple[tuple[float, int], tuple[float, int]]:
        """(value, multiplicity) for the even and the odd block."""
        m = 1 << (self.size - 1)
        return (self.weight_even / m, m), (self.weight_odd / m, m)

    def entropy(self, base: float = 2.0) -> float:
        total = 0.0
        for p, mult in self.eigenvalues():
            if p > 0:
                total -= mult * p * math.log(p)
        return total / math.log(base)

    def dense(self) -> np.ndarray:
        if self.size > KEEP_MAX_LINKS:
            raise BudgetError(f"dense parity mixture limited to {KEEP_MAX_LINKS} links")
        m = 1 << (self.size - 1)
        diag = (self.weight_even * parity_projector_diag(self.size, 0)
                + self.weight_odd * parity_projector_diag(self.size, 1)) / m
        return np.diag(diag)


def sigma_even(n: int) -> np.ndarray:
    return ParityMixture(1.0, 0.0, n).dense()


def sigma_odd(n: int) -> np.ndarray:
    return ParityMixture(0.0, 1.0, n).dense()


def rho_B_closed(tp: ThermalPoint) -> ParityMixture:
    w = wilson_x_average(tp)
    return ParityMixture(0.5 * (1 + w), 0.5 * (1 - w), tp.N)


def shannon_bits(p: float) -> float:
    return -sum(q * math.log2(q) for q in (p, 1.0 - p) if q > 0)


def entropy_B(tp: ThermalPoint, base: float = 2.0) -> float:
    """S(rho_B) = N - 1 + H((1 + <W_x>)/2), converted from bits to ``base``."""
    bits = tp.N - 1 + shannon_bits(0.5 * (1 + wilson_x_average(tp)))
    return bits * math.log(2.0) / math.log(base)


def rho_C_closed(lattice: Lattice, sub: Subsystem) -> np.ndarray:
    """A proper, non-empty subset of rungs: maximally mixed at all temperatures."""
    rungs = set(lattice.groups["rung"])
    if not sub.links or not set(sub.links) <= rungs:
        raise ValueError("C must be a non-empty set of rung links")
    if len(sub.links) == len(rungs):
        raise ValueError("C equal to all rungs is subsystem B; use rho_B_closed")
    return maximally_mixed(len(sub.links))


def rho_D_closed() -> np.ndarray:
    """Two opposite leg links: I/4 at every temperature."""
    return maximally_mixed(2)


# --- metrics -------------------------------------------------------------------

def von_neumann_entropy(rho: np.ndarray, base: float = 2.0) -> float:
    ev = np.linalg.eigvalsh(rho)
    ev = ev[ev > 1e-15]
    return float(-np.sum(ev * np.log(ev)) / math.log(base))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(a - b))))


def rdm_report(name: str, tp: ThermalPoint, rho: np.ndarray, units: str = "bits",
               brute_force: np.ndarray | None = None) -> dict:
    n = int(round(math.log2(rho.shape[0])))
    ev = np.sort(np.linalg.eigvalsh(rho))
    report = {
        "subsystem": name,
        "beta": tp.beta,
        "J": tp.J,
        "K": tp.K,
        "N": tp.N,
        "eigenvalues": [float(x) for x in ev],
        "entropy_bits": von_neumann_entropy(rho, 2.0),
        "trace_distance_to_maximally_mixed": trace_distance(rho, maximally_mixed(n)),
    }
    if units == "nats":
        report["entropy_nats"] = von_neumann_entropy(rho, math.e)
    if brute_force is not None:
        report["closed_vs_brute_force_trace_distance"] = trace_distance(rho, brute_force)
    return report
