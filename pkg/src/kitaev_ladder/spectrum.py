"""Closed-form energies of the simultaneous eigenstates and spectrum tables.

Every energy is linear in the couplings, ``E = a*J + b*K`` with integer
``a`` and ``b``.  The pair is accumulated exactly and only turned into a float
at the end, so degeneracy counting never depends on float collisions.

Quantum numbers are enumerated bit-lexicographically (the order of
``itertools.product([0, 1], repeat=n)``): ``l`` is the outer index, the
concatenation ``(r, s[, t])`` the inner one.  On the torus the inner index is
``s`` along the excitation curve.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .lattice import Lattice, LatticeKind

ENUMERATION_BUDGET_BITS = 26
ENERGY_TOL = 1e-9


class BudgetError(ValueError):
    """Requested enumeration or dense construction is beyond the size budget."""


@dataclass(frozen=True)
class Couplings:
    J: float = 1.0
    K: float = 1.0

    def inverted(self) -> Couplings:
        return Couplings(-self.J, -self.K)


@dataclass(frozen=True)
class QuantumNumbers:
    l: tuple[int, ...]
    r: tuple[int, ...] = ()
    s: tuple[int, ...] = ()
    t: tuple[int, ...] | None = None

    def __post_init__(self):
        for name in ("l", "r", "s", "t"):
            bits = getattr(self, name)
            if bits is None:
                continue
            bits = tuple(int(b) for b in bits)
            if any(b not in (0, 1) for b in bits):
                raise ValueError(f"{name} must be a 0/1 vector, got {bits}")
            object.__setattr__(self, name, bits)

    @staticmethod
    def ising(bits: Sequence[int]) -> np.ndarray:
        return 1 - 2 * np.asarray(bits, dtype=np.int64)

    @property
    def inner_bits(self) -> tuple[int, ...]:
        return self.r + self.s + (self.t or ())

    def complement(self, *names: str) -> QuantumNumbers:
        flip = lambda bits: tuple(1 - b for b in bits)
        fields = {n: getattr(self, n) for n in ("l", "r", "s", "t")}
        for n in names:
            fields[n] = flip(fields[n])
        return QuantumNumbers(**fields)


def qn_shape(lattice: Lattice) -> dict[str, int]:
    N = lattice.size
    if lattice.kind is LatticeKind.TWO_LEG:
        return {"l": N, "r": N, "s": N}
    if lattice.kind is LatticeKind.THREE_LEG:
        return {"l": 2 * N, "r": N, "s": N, "t": N}
    return {"l": N * N, "s": N * N}


def check_qn(lattice: Lattice, qn: QuantumNumbers):
    shape = qn_shape(lattice)
    want = (shape["l"], shape.get("r", 0), shape["s"], shape.get("t"))
    got = (len(qn.l), len(qn.r), len(qn.s), None if qn.t is None else len(qn.t))
    if got != want:
        raise ValueError(f"quantum-number lengths (l, r, s, t)={got} do not match "
                         f"{lattice.kind.value} N={lattice.size}: {want}")


# --- single-state energies ---------------------------------------------------

def _cyclic_bonds(S: np.ndarray) -> np.ndarray:
    return S * np.roll(S, 1)  # S_{i-1} S_i


def coefficients(lattice: Lattice, qn: QuantumNumbers) -> tuple[int, int]:
    """Integer pair (a, b) with E = a*J + b*K."""
    check_qn(lattice, qn)
    L = QuantumNumbers.ising(qn.l)
    S = QuantumNumbers.ising(qn.s)
    if lattice.kind is LatticeKind.TWO_LEG:
        R = QuantumNumbers.ising(qn.r)
        # A+_j = X_{(j-1)'} X_j X_{j'} sees r_j, s_{j-1} and s_j
        a = -np.sum(R * (_cyclic_bonds(S) + 1))
    elif lattice.kind is LatticeKind.THREE_LEG:
        R = QuantumNumbers.ising(qn.r)
        T = QuantumNumbers.ising(qn.t)
        a = -np.sum(R * T * _cyclic_bonds(S) + R + T)
    else:
        a = -np.sum(_cyclic_bonds(S))
    return int(a), int(-np.sum(L))


def energy(lattice: Lattice, qn: QuantumNumbers, c: Couplings) -> float:
    a, b = coefficients(lattice, qn)
    return a * c.J + b * c.K


def _require(lattice: Lattice, kind: LatticeKind):
    if lattice.kind is not kind:
        raise ValueError(f"expected a {kind.value} lattice, got {lattice.kind.value}")


def energy_two_leg(lattice: Lattice, qn: QuantumNumbers, c: Couplings) -> float:
    _require(lattice, LatticeKind.TWO_LEG)
    return energy(lattice, qn, c)


def energy_three_leg(lattice: Lattice, qn: QuantumNumbers, c: Couplings) -> float:
    _require(lattice, LatticeKind.THREE_LEG)
    return energy(lattice, qn, c)


def energy_square(lattice: Lattice, qn: QuantumNumbers, c: Couplings) -> float:
    _require(lattice, LatticeKind.SQUARE_TORUS)
    return energy(lattice, qn, c)


# --- enumeration -------------------------------------------------------------

def _bit_table(n: int) -> np.ndarray:
    """Row k holds the n bits of k, most significant first."""
    k = np.arange(1 << n, dtype=np.int64)[:, None]
    return (k >> np.arange(n - 1, -1, -1)) & 1


def total_bits(lattice: Lattice) -> int:
    return sum(qn_shape(lattice).values())


def coefficient_tables(lattice: Lattice) -> tuple[np.ndarray, np.ndarray]:
    """Vectors ``b[l_index]`` and ``a[inner_index]`` over all quantum numbers.

    The energy of ``(l_index, inner_index)`` is ``a[inner]*J + b[l]*K``.
    """
    nbits = total_bits(lattice)
    if nbits > ENUMERATION_BUDGET_BITS:
        raise BudgetError(f"2^{nbits} quantum-number assignments exceed 2^{ENUMERATION_BUDGET_BITS}")
    shape = qn_shape(lattice)
    b = -np.sum(1 - 2 * _bit_table(shape["l"]), axis=1)

    inner = [k for k in ("r", "s", "t") if k in shape]
    bits = _bit_table(sum(shape[k] for k in inner))
    ising, offset = {}, 0
    for k in inner:
        ising[k] = 1 - 2 * bits[:, offset:offset + shape[k]]
        offset += shape[k]
    S = ising["s"]
    if lattice.kind is LatticeKind.TWO_LEG:
        a = -np.sum(ising["r"] * (S * np.roll(S, 1, axis=1) + 1), axis=1)
    elif lattice.kind is LatticeKind.THREE_LEG:
        R, T = ising["r"], ising["t"]
        a = -np.sum(R * T * S * np.roll(S, 1, axis=1) + R + T, axis=1)
    else:
        a = -np.sum(S * np.roll(S, 1, axis=1), axis=1)
    return a.astype(np.int64), b.astype(np.int64)


def all_energies(lattice: Lattice, c: Couplings) -> np.ndarray:
    """Energies of every quantum-number assignment, l outer / inner inner."""
    a, b = coefficient_tables(lattice)
    return (b[:, None] * c.K + a[None, :] * c.J).ravel()


def quantum_numbers_at(lattice: Lattice, l_index: int, inner_index: int) -> QuantumNumbers:
    shape = qn_shape(lattice)
    unpack = lambda value, n: tuple((value >> (n - 1 - j)) & 1 for j in range(n))
    l = unpack(l_index, shape["l"])
    names = [k for k in ("r", "s", "t") if k in shape]
    bits = unpack(inner_index, sum(shape[k] for k in names))
    fields, offset = {}, 0
    for k in names:
        fields[k] = bits[offset:offset + shape[k]]
        offset += shape[k]
    return QuantumNumbers(l=l, **fields)


def iter_quantum_numbers(lattice: Lattice) -> Iterator[QuantumNumbers]:
    shape = qn_shape(lattice)
    n_inner = sum(v for k, v in shape.items() if k != "l")
    for li in range(1 << shape["l"]):
        for ii in range(1 << n_inner):
            yield quantum_numbers_at(lattice, li, ii)


def random_quantum_numbers(lattice: Lattice, rng: np.random.Generator,
                           even_l: bool = False) -> QuantumNumbers:
    """Uniformly random quantum numbers; ``even_l`` forces an even plaquette sum."""
    shape = qn_shape(lattice)
    fields = {k: tuple(int(x) for x in rng.integers(0, 2, n)) for k, n in shape.items()}
    if even_l and sum(fields["l"]) % 2:
        l = list(fields["l"])
        l[int(rng.integers(len(l)))] ^= 1
        fields["l"] = tuple(l)
    return QuantumNumbers(**fields)


@dataclass(frozen=True)
class SpectrumHistogram:
    couplings: Couplings
    # (coeff_J, coeff_K, degeneracy), sorted by energy then coefficients
    rows: tuple[tuple[int, int, int], ...]
    tol: float = ENERGY_TOL

    def energy_of(self, a: int, b: int) -> float:
        return a * self.couplings.J + b * self.couplings.K

    @property
    def total(self) -> int:
        return sum(d for _, _, d in self.rows)

    def levels(self) -> list[tuple[float, int]]:
        """(energy, degeneracy) with coefficient pairs merged within ``tol``."""
        merged: list[list] = []
        for a, b, d in self.rows:
            e = self.energy_of(a, b)
            if merged and abs(e - merged[-1][0]) <= self.tol:
                merged[-1][1] += d
            else:
                merged.append([e, d])
        return [(e, d) for e, d in merged]

    @property
    def ground(self) -> tuple[float, int]:
        return self.levels()[0]

    @property
    def top(self) -> tuple[float, int]:
        return self.levels()[-1]

    def degeneracy_at(self, e: float) -> int:
        return sum(d for level, d in self.levels() if abs(level - e) <= self.tol)

    def multiset(self) -> np.ndarray:
        """Sorted energies with multiplicity (for comparison against ED)."""
        energies = [self.energy_of(a, b) for a, b, _ in self.rows]
        counts = [d for _, _, d in self.rows]
        return np.sort(np.repeat(energies, counts))

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["coeff_J", "coeff_K", "energy", "degeneracy"])
        for a, b, d in self.rows:
            w.writerow([a, b, f"{self.energy_of(a, b):.17g}", d])


def enumerate_spectrum(lattice: Lattice, c: Couplings) -> SpectrumHistogram:
    a, b = coefficient_tables(lattice)
    # the energy separates into an inner part and an l part, so the joint
    # histogram is the outer product of the two marginal histograms
    ca = Counter(a.tolist())
    cb = Counter(b.tolist())
    rows = [(ai, bi, na * nb) for ai, na in ca.items() for bi, nb in cb.items()]
    rows.sort(key=lambda row: (row[0] * c.J + row[1] * c.K, row[0], row[1]))
    return SpectrumHistogram(c, tuple(rows))


@dataclass
class SymmetryReport:
    checked: int
    s_complement_violations: list[QuantumNumbers]
    inversion_violations: list[QuantumNumbers]
    multiset_match: bool

    @property
    def ok(self) -> bool:
        return not self.s_complement_violations and not self.inversion_violations and self.multiset_match


def check_symmetries(lattice: Lattice, c: Couplings, samples: int | None = None,
                     rng: np.random.Generator | None = None) -> SymmetryReport:
    """Check the s-complement and (l, r)-complement spectrum identities.

    With ``samples=None`` every quantum-number assignment is checked;
    otherwise ``samples`` random ones.  Comparisons use the exact integer
    coefficients.
    """
    _require(lattice, LatticeKind.TWO_LEG)
    if samples is None:
        if total_bits(lattice) > 18:
            raise BudgetError("exhaustive symmetry check limited to 2^18 states")
        qns: Iterator[QuantumNumbers] = iter_quantum_numbers(lattice)
    else:
        rng = rng or np.random.default_rng(0)
        qns = (random_quantum_numbers(lattice, rng) for _ in range(samples))

    s_bad, inv_bad, n = [], [], 0
    for qn in qns:
        n += 1
        a, b = coefficients(lattice, qn)
        if coefficients(lattice, qn.complement("s")) != (a, b):
            s_bad.append(qn)
        # E_{lbar,rbar,s}(J,K) = E_{l,r,s}(-J,-K) in coefficients is (-a, -b)
        if coefficients(lattice, qn.complement("l", "r")) != (-a, -b):
            inv_bad.append(qn)

    forward = enumerate_spectrum(lattice, c).multiset()
    inverted = enumerate_spectrum(lattice, c.inverted()).multiset()
    # complementing (l, r) is a bijection on labels, so the identity maps the
    # whole (J, K) spectrum onto the (-J, -K) one
    match = bool(np.allclose(forward, inverted, atol=ENERGY_TOL, rtol=0))
    return SymmetryReport(n, s_bad, inv_bad, match)


def ground_energy(lattice: Lattice, c: Couplings) -> float:
    """-N(2J+K) on the two-leg ladder; other lattices via the all-zero labels."""
    shape = qn_shape(lattice)
    zero = QuantumNumbers(**{k: (0,) * n for k, n in shape.items()})
    return energy(lattice, zero, c)
