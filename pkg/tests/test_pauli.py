import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kitaev_ladder import pauli, states
from kitaev_ladder.pauli import DimensionError, PauliString
from kitaev_ladder.spectrum import QuantumNumbers

N_LINKS = 5


@st.composite
def pauli_strings(draw, n=N_LINKS):
    full = (1 << n) - 1
    return PauliString(n, draw(st.integers(0, full)), draw(st.integers(0, full)),
                       draw(st.sampled_from((1, -1))))


@settings(max_examples=200, deadline=None)
@given(pauli_strings(), pauli_strings())
def test_product_matches_dense(a, b):
    assert np.array_equal(pauli.to_dense(a * b), pauli.to_dense(a) @ pauli.to_dense(b))


@settings(max_examples=200, deadline=None)
@given(pauli_strings(), pauli_strings(), pauli_strings())
def test_product_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@settings(max_examples=200, deadline=None)
@given(pauli_strings(), pauli_strings())
def test_commutes_matches_dense(a, b):
    A, B = pauli.to_dense(a), pauli.to_dense(b)
    assert pauli.commutes(a, b) == np.array_equal(A @ B, B @ A)
    assert pauli.symplectic_form(a, b) == pauli.symplectic_form(b, a)


@settings(max_examples=100, deadline=None)
@given(pauli_strings(), st.lists(st.floats(-1, 1), min_size=1 << N_LINKS, max_size=1 << N_LINKS))
def test_apply_matches_dense(p, amps):
    v = np.array(amps)
    assert np.allclose(pauli.apply(p, v), pauli.to_dense(p) @ v, atol=1e-14)


@settings(max_examples=100, deadline=None)
@given(pauli_strings())
def test_strings_without_y_are_involutions(p):
    # X^x Z^z squared is +-1; with x & z = 0 it is exactly +1
    q = PauliString(p.num_links, p.xmask & ~p.zmask, p.zmask, p.sign)
    assert (q * q) == PauliString.identity(p.num_links)


def test_z_squared_is_identity():
    z = PauliString.from_z([1], 4)
    prod = z * z
    assert prod.is_identity and prod.sign == 1


def test_loop_operators_commute_on_two_leg(ladder3):
    wx, wz = pauli.wilson_x(ladder3), pauli.wilson_z(ladder3)
    assert not set(ladder3.wx_support) & set(ladder3.wz_support)
    assert (wx * wz).sign == 1 and pauli.commutes(wx, wz)


def test_plaquette_squares_to_identity(ladder2):
    b = pauli.plaquette_operators(ladder2)[0]
    assert (b * b).is_identity


def test_stabilizers_commute(ladder3, three_leg2, torus3):
    for lat in (ladder3, three_leg2, torus3):
        ops = pauli.star_operators(lat) + pauli.plaquette_operators(lat)
        assert all(pauli.commutes(a, b) for a, b in itertools.combinations(ops, 2))
        for op in (pauli.wilson_x(lat), pauli.wilson_z(lat)):
            assert all(pauli.commutes(op, s) for s in ops)


def test_single_link_anticommutes():
    assert not pauli.commutes(PauliString.from_z([1], 3), PauliString.from_x([1], 3))


def test_lambda_commutes_with_upper_star_iff_rung_bit_clear(ladder3):
    stars = dict(zip(ladder3.vertex_names, pauli.star_operators(ladder3)))
    for r in itertools.product((0, 1), repeat=3):
        for s in itertools.product((0, 1), repeat=3):
            lam = states.build_lambda(ladder3, QuantumNumbers(l=(0, 0, 0), r=r, s=s))
            for j in range(3):
                assert pauli.commutes(lam, stars[f"A-_{j}"]) == (r[j] == 0)


def test_apply_on_reference_states():
    n = 4
    omega = pauli.omega_plus(n)
    wx = PauliString.from_x(range(n), n)
    assert np.array_equal(pauli.apply(wx, omega), omega)
    flipped = pauli.apply(PauliString.from_z([2], n), omega)
    assert np.array_equal(flipped, pauli.basis_state(n, 1 << 2))


def test_plaquette_fixes_psi0(ladder2):
    psi0 = states.build_psi_l(ladder2, (0, 0))
    b = pauli.plaquette_operators(ladder2)[0]
    assert abs(np.dot(psi0, pauli.apply(b, psi0)) - 1.0) <= 1e-12


def test_projector_factor(ladder2):
    n = ladder2.num_links
    b = pauli.plaquette_operators(ladder2)[0]
    once = pauli.apply_projector_factor(0, b, pauli.omega_plus(n))
    nz = once[once != 0]
    assert len(nz) == 2 and nz[0] == nz[1]
    twice = pauli.apply_projector_factor(0, b, once)
    assert np.array_equal(twice, 2 * once)


def test_dimension_cap():
    with pytest.raises(DimensionError):
        pauli.check_dimension(pauli.MAX_LINKS + 1)


def test_size_mismatch():
    with pytest.raises(ValueError):
        PauliString.from_x([0], 2) * PauliString.from_x([0], 3)


def test_mask_out_of_range():
    with pytest.raises(ValueError):
        PauliString(2, xmask=0b100)
