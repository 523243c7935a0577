"""X/Z Pauli strings as bitmask pairs, acting on x-basis state vectors.

A string is stored in the canonical order ``sign * X^xmask Z^zmask``.  In the
x-basis (bit ``k`` of a basis index is 0 for ``|+>`` and 1 for ``|->`` on
link ``k``) a Z flips a bit and an X contributes a sign ``(-1)^bit``, so no
operator in the model ever produces a complex amplitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .lattice import Lattice, link_mask

MAX_LINKS = 24


class DimensionError(ValueError):
    """Hilbert space larger than the dense state-vector cap."""


@dataclass(frozen=True)
class PauliString:
    num_links: int
    xmask: int = 0
    zmask: int = 0
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        full = (1 << self.num_links) - 1
        if (self.xmask | self.zmask) & ~full:
            raise ValueError("mask has bits beyond num_links")

    @classmethod
    def identity(cls, num_links: int) -> PauliString:
        return cls(num_links)

    @classmethod
    def from_x(cls, links: Iterable[int], num_links: int) -> PauliString:
        return cls(num_links, xmask=link_mask(links))

    @classmethod
    def from_z(cls, links: Iterable[int], num_links: int) -> PauliString:
        return cls(num_links, zmask=link_mask(links))

    @property
    def is_identity(self) -> bool:
        return self.xmask == 0 and self.zmask == 0

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)

    def __neg__(self) -> PauliString:
        return PauliString(self.num_links, self.xmask, self.zmask, -self.sign)

    def __str__(self) -> str:
        chars = []
        for k in range(self.num_links):
            x = (self.xmask >> k) & 1
            z = (self.zmask >> k) & 1
            chars.append("I" if not (x or z) else "X" if not z else "Z" if not x else "XZ")
        body = " ".join(f"{c}{k}" for k, c in enumerate(chars) if c != "I") or "I"
        return ("-" if self.sign < 0 else "+") + body


def _check_sizes(a: PauliString, b: PauliString):
    if a.num_links != b.num_links:
        raise ValueError(f"size mismatch: {a.num_links} vs {b.num_links} links")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    _check_sizes(a, b)
    # moving b's X's to the left past a's Z's
    swaps = (a.zmask & b.xmask).bit_count()
    sign = a.sign * b.sign * (-1) ** swaps
    return PauliString(a.num_links, a.xmask ^ b.xmask, a.zmask ^ b.zmask, sign)


def symplectic_form(a: PauliString, b: PauliString) -> int:
    _check_sizes(a, b)
    return ((a.xmask & b.zmask).bit_count() + (a.zmask & b.xmask).bit_count()) % 2


def commutes(a: PauliString, b: PauliString) -> bool:
    return symplectic_form(a, b) == 0


def check_dimension(num_links: int) -> int:
    if num_links > MAX_LINKS:
        raise DimensionError(f"2^{num_links} amplitudes exceed the 2^{MAX_LINKS} cap")
    return 1 << num_links


_INDEX_CACHE: dict[int, np.ndarray] = {}


def basis_indices(num_links: int) -> np.ndarray:
    dim = check_dimension(num_links)
    idx = _INDEX_CACHE.get(num_links)
    if idx is None:
        idx = np.arange(dim, dtype=np.int64)
        idx.setflags(write=False)
        _INDEX_CACHE[num_links] = idx
    return idx


def parity_signs(num_links: int, xmask: int) -> np.ndarray:
    """(-1)^popcount(i & xmask) for every basis index i, as int8."""
    idx = basis_indices(num_links)
    bits = np.bitwise_count(idx & xmask) & 1
    return (1 - 2 * bits).astype(np.int8)


def apply(p: PauliString, v: np.ndarray) -> np.ndarray:
    """Return ``p @ v`` for a dense x-basis vector ``v`` (not modified)."""
    v = np.asarray(v)
    if v.shape != (1 << p.num_links,):
        raise ValueError(f"vector of shape {v.shape} does not match {p.num_links} links")
    out = v[basis_indices(p.num_links) ^ p.zmask] if p.zmask else v.copy()
    if p.xmask:
        out *= parity_signs(p.num_links, p.xmask)
    if p.sign < 0:
        out = -out
    return out


def apply_projector_factor(sign_bit: int, p: PauliString, v: np.ndarray) -> np.ndarray:
    """One unnormalised factor ``(1 + (-1)^sign_bit p)`` applied to ``v``."""
    pv = apply(p, v)
    return v - pv if sign_bit else v + pv


def to_dense(p: PauliString) -> np.ndarray:
    dim = check_dimension(p.num_links)
    idx = basis_indices(p.num_links)
    mat = np.zeros((dim, dim))
    # column j holds p|j>: Z sends j -> j^z, then X contributes a sign on the row
    rows = idx ^ p.zmask
    mat[rows, idx] = p.sign * parity_signs(p.num_links, p.xmask)[rows]
    return mat


def basis_state(num_links: int, index: int = 0, dtype=np.float64) -> np.ndarray:
    v = np.zeros(check_dimension(num_links), dtype=dtype)
    v[index] = 1
    return v


def omega_plus(num_links: int, dtype=np.float64) -> np.ndarray:
    """All links in |+>: the basis state with index 0."""
    return basis_state(num_links, 0, dtype)


def omega_minus(num_links: int, dtype=np.float64) -> np.ndarray:
    """All links in |->: the basis state with every bit set."""
    return basis_state(num_links, (1 << num_links) - 1, dtype)


# --- model operators -------------------------------------------------------

def star_operators(lattice: Lattice) -> list[PauliString]:
    return [PauliString.from_x(s, lattice.num_links) for s in lattice.vertex_stars]


def plaquette_operators(lattice: Lattice) -> list[PauliString]:
    return [PauliString.from_z(b, lattice.num_links) for b in lattice.plaquette_boundaries]


def wilson_x(lattice: Lattice) -> PauliString:
    return PauliString.from_x(lattice.wx_support, lattice.num_links)


def wilson_z(lattice: Lattice) -> PauliString:
    return PauliString.from_z(lattice.wz_support, lattice.num_links)
