"""Ladder and torus geometries for the toric-code Hamiltonian.

Links carry global indices assigned block-wise so that bitmasks are
deterministic:

* two-leg ladder: rungs ``i`` -> ``i``, lower leg ``i'`` -> ``N + i``,
  upper leg ``i''`` -> ``2N + i``.  Leg link ``i'`` joins sites ``i`` and
  ``i + 1``; plaquette ``i`` sits between rungs ``i`` and ``i + 1``.
* three-leg ladder: lower rungs, upper rungs, lower leg, middle leg,
  upper leg, each a block of ``N``.
* square torus: horizontal links row-major, then vertical links.

Site indices are 0-based and cyclic mod ``N``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class DegenerateLatticeError(ValueError):
    """Raised for sizes where plaquette links would coincide."""


class LatticeKind(enum.Enum):
    TWO_LEG = "two-leg"
    THREE_LEG = "three-leg"
    SQUARE_TORUS = "square-torus"


@dataclass(frozen=True)
class Lattice:
    kind: LatticeKind
    size: int
    num_links: int
    vertex_stars: tuple[tuple[int, ...], ...]
    plaquette_boundaries: tuple[tuple[int, ...], ...]
    wz_support: tuple[int, ...]
    wx_support: tuple[int, ...]
    excitation_curve: tuple[int, ...]
    # named link blocks, e.g. "rung", "lower", "upper"
    groups: dict[str, tuple[int, ...]] = field(default_factory=dict, compare=False)
    vertex_names: tuple[str, ...] = ()

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_stars)

    @property
    def num_plaquettes(self) -> int:
        return len(self.plaquette_boundaries)

    @property
    def is_ladder(self) -> bool:
        return self.kind is not LatticeKind.SQUARE_TORUS

    def link_block(self, name: str) -> tuple[int, ...]:
        return self.groups[name]


def build_two_leg_ladder(N: int) -> Lattice:
    if N < 2:
        raise DegenerateLatticeError(f"two-leg ladder needs N >= 2, got {N}")
    rung = lambda i: i % N
    lower = lambda i: N + i % N
    upper = lambda i: 2 * N + i % N

    # A+_i = X_{(i-1)'} X_i X_{i'},  A-_i = X_{(i-1)''} X_i X_{i''}
    stars = [(lower(i - 1), rung(i), lower(i)) for i in range(N)]
    stars += [(upper(i - 1), rung(i), upper(i)) for i in range(N)]
    names = [f"A+_{i}" for i in range(N)] + [f"A-_{i}" for i in range(N)]
    # B_i = Z_i Z_{i+1} Z_{i'} Z_{i''}
    plaquettes = [(rung(i), rung(i + 1), lower(i), upper(i)) for i in range(N)]

    rungs = tuple(range(N))
    lowers = tuple(range(N, 2 * N))
    uppers = tuple(range(2 * N, 3 * N))
    return Lattice(
        kind=LatticeKind.TWO_LEG,
        size=N,
        num_links=3 * N,
        vertex_stars=tuple(stars),
        plaquette_boundaries=tuple(plaquettes),
        wz_support=lowers,
        wx_support=rungs,
        excitation_curve=rungs + lowers,
        groups={"rung": rungs, "lower": lowers, "upper": uppers},
        vertex_names=tuple(names),
    )


def build_three_leg_ladder(N: int) -> Lattice:
    if N < 2:
        raise DegenerateLatticeError(f"three-leg ladder needs N >= 2, got {N}")
    rung_lo = lambda i: i % N
    rung_up = lambda i: N + i % N
    leg_lo = lambda i: 2 * N + i % N
    leg_mid = lambda i: 3 * N + i % N
    leg_up = lambda i: 4 * N + i % N

    stars = [(leg_lo(i - 1), rung_lo(i), leg_lo(i)) for i in range(N)]
    stars += [(leg_mid(i - 1), rung_lo(i), rung_up(i), leg_mid(i)) for i in range(N)]
    stars += [(leg_up(i - 1), rung_up(i), leg_up(i)) for i in range(N)]
    names = [f"A+_{i}" for i in range(N)]
    names += [f"A0_{i}" for i in range(N)]
    names += [f"A-_{i}" for i in range(N)]
    plaquettes = [(rung_lo(i), rung_lo(i + 1), leg_lo(i), leg_mid(i)) for i in range(N)]
    plaquettes += [(rung_up(i), rung_up(i + 1), leg_mid(i), leg_up(i)) for i in range(N)]

    block = lambda k: tuple(range(k * N, (k + 1) * N))
    groups = {
        "rung_lower": block(0),
        "rung_upper": block(1),
        "lower": block(2),
        "middle": block(3),
        "upper": block(4),
    }
    # Lambda_{r,s,t} support: lower rungs (r), middle leg (s), upper rungs (t)
    curve = groups["rung_lower"] + groups["middle"] + groups["rung_upper"]
    return Lattice(
        kind=LatticeKind.THREE_LEG,
        size=N,
        num_links=5 * N,
        vertex_stars=tuple(stars),
        plaquette_boundaries=tuple(plaquettes),
        wz_support=groups["middle"],
        wx_support=groups["rung_lower"],
        excitation_curve=curve,
        groups=groups,
        vertex_names=tuple(names),
    )


def build_square_torus(N: int) -> Lattice:
    if N < 3:
        raise DegenerateLatticeError(f"square torus needs N >= 3, got {N}")
    h = lambda x, y: (y % N) * N + (x % N)
    v = lambda x, y: N * N + (y % N) * N + (x % N)

    stars, names, plaquettes = [], [], []
    for y in range(N):
        for x in range(N):
            stars.append((h(x, y), h(x - 1, y), v(x, y), v(x, y - 1)))
            names.append(f"A_{x},{y}")
            plaquettes.append((h(x, y), v(x + 1, y), h(x, y + 1), v(x, y)))

    return Lattice(
        kind=LatticeKind.SQUARE_TORUS,
        size=N,
        num_links=2 * N * N,
        vertex_stars=tuple(stars),
        plaquette_boundaries=tuple(plaquettes),
        wz_support=tuple(h(x, 0) for x in range(N)),
        wx_support=tuple(v(x, 0) for x in range(N)),
        excitation_curve=_torus_curve(N),
        groups={
            "horizontal": tuple(range(N * N)),
            "vertical": tuple(range(N * N, 2 * N * N)),
        },
        vertex_names=tuple(names),
    )


def _torus_curve(N: int) -> tuple[int, ...]:
    # Helical Hamiltonian cycle: N-1 steps right then one step up, N times.
    # It closes on itself with winding (N-1, 1), so it is not a boundary.
    x = y = 0
    links = []
    for _ in range(N):
        for _ in range(N - 1):
            links.append(y * N + x)
            x = (x + 1) % N
        links.append(N * N + y * N + x)
        y = (y + 1) % N
    assert (x, y) == (0, 0)
    return tuple(links)


def excitation_curve(lattice: Lattice) -> tuple[int, ...]:
    """Ordered links on which Z-flips generate every excited state.

    For ladders this is the Lambda support (rungs then leg links, in the
    order the quantum numbers r, s[, t] are stored).
    """
    return lattice.excitation_curve


def build(kind: LatticeKind | str, N: int) -> Lattice:
    kind = LatticeKind(kind)
    builders = {
        LatticeKind.TWO_LEG: build_two_leg_ladder,
        LatticeKind.THREE_LEG: build_three_leg_ladder,
        LatticeKind.SQUARE_TORUS: build_square_torus,
    }
    return builders[kind](N)


def link_mask(links: Iterable[int]) -> int:
    mask = 0
    for k in links:
        mask ^= 1 << k
    return mask


def gf2_rank(masks: Sequence[int]) -> int:
    """Rank over GF(2) of row vectors given as integer bitmasks."""
    basis: dict[int, int] = {}  # leading bit -> row
    for row in masks:
        while row:
            lead = row.bit_length() - 1
            if lead not in basis:
                basis[lead] = row
                break
            row ^= basis[lead]
    return len(basis)


def in_span(target: int, masks: Sequence[int]) -> bool:
    return gf2_rank(list(masks) + [target]) == gf2_rank(masks)
