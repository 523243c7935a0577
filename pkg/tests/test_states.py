import itertools

import numpy as np
import pytest

from kitaev_ladder import oracle, pauli, spectrum, states
from kitaev_ladder.spectrum import Couplings, QuantumNumbers

from conftest import SQRT2

C = Couplings(1.0, SQRT2)


def test_psi0_amplitudes(ladder2):
    psi0 = states.build_psi_l(ladder2, (0, 0))
    nz = psi0[psi0 != 0]
    assert len(nz) == 4 and np.allclose(nz, 0.5)


def test_lambda_identity_for_zero_labels(ladder2):
    lam = states.build_lambda(ladder2, QuantumNumbers(l=(0, 0), r=(0, 0), s=(0, 0)))
    assert lam.is_identity and lam.sign == 1


def test_ground_state_energy_and_residual(ladder2):
    g = states.build_eigenstate(ladder2, QuantumNumbers(l=(0, 0), r=(0, 0), s=(0, 0)), C)
    assert g.energy == pytest.approx(-2 * (2 + SQRT2))
    assert oracle.residual(oracle.build_hamiltonian(ladder2, C), g.vector, g.energy) <= 1e-12


def test_wz_partner_is_degenerate_and_orthogonal(ladder2):
    h = oracle.build_hamiltonian(ladder2, C)
    for qn in itertools.islice(spectrum.iter_quantum_numbers(ladder2), 0, 64, 7):
        a = states.build_eigenstate(ladder2, qn, C)
        b = states.build_eigenstate(ladder2, qn.complement("s"), C)
        assert a.energy == b.energy
        assert abs(a.vector @ b.vector) <= 1e-12
        assert oracle.residual(h, b.vector, b.energy) <= 1e-10


def test_gram_identity(ladder2):
    G = states.gram_matrix(states.all_eigenstates(ladder2, C))
    assert np.abs(G - np.eye(64)).max() <= 1e-12


def test_random_residuals_n3(ladder3, rng):
    h = oracle.build_hamiltonian(ladder3, C)
    for st in states.random_eigenstates(ladder3, C, 100, rng):
        assert oracle.residual(h, st.vector, st.energy) <= 1e-10


def test_differing_l_orthogonal(ladder3):
    base = dict(r=(1, 0, 1), s=(0, 1, 1))
    a = states.build_eigenstate(ladder3, QuantumNumbers(l=(0, 0, 0), **base), C)
    b = states.build_eigenstate(ladder3, QuantumNumbers(l=(0, 1, 0), **base), C)
    assert abs(a.vector @ b.vector) <= 1e-12


def test_top_state(ladder2, ladder3):
    for lat in (ladder2, ladder3):
        top = states.build_top_state(lat, C)
        assert top.energy == pytest.approx(lat.size * (2 + SQRT2))
        assert oracle.residual(oracle.build_hamiltonian(lat, C), top.vector, top.energy) <= 1e-10


def test_three_leg_all_states(three_leg2):
    h = oracle.build_hamiltonian(three_leg2, C)
    handles = states.all_eigenstates(three_leg2, C)
    assert max(oracle.residual(h, s.vector, s.energy) for s in handles) <= 1e-10
    G = states.gram_matrix(handles)
    assert np.abs(G - np.eye(1024)).max() <= 1e-12


@pytest.mark.slow
def test_torus_pairs_orthogonal(torus3, rng):
    handles = states.random_eigenstates(torus3, C, 20, rng)
    for a, b in itertools.combinations(handles, 2):
        if a.qn != b.qn:
            assert abs(a.vector @ b.vector) <= 1e-12


def test_torus_odd_plaquette_sum_vanishes(torus3):
    with pytest.raises(states.ZeroStateError):
        states.build_psi_l(torus3, (1,) + (0,) * 8)


def test_state_dump_roundtrip(tmp_path, ladder2):
    st = states.build_eigenstate(ladder2, QuantumNumbers(l=(1, 0), r=(0, 1), s=(1, 1)), C)
    path = tmp_path / "psi.bin"
    states.save_state(path, st.vector, ladder2.num_links)
    vec, n = states.load_state(path)
    assert n == 6 and np.array_equal(vec, st.vector)
    assert path.stat().st_size == 16 + 8 * 64


def test_state_dump_rejects_bad_magic(tmp_path):
    path = tmp_path / "bad.bin"
    path.write_bytes(b"NOTSTATE" + bytes(8 + 8 * 2))
    with pytest.raises(ValueError):
        states.load_state(path)


def test_lambda_energy_shift_matches_stabilizer_signs(ladder3):
    """Each vertex term flips sign exactly where Lambda anticommutes with it."""
    qn = QuantumNumbers(l=(0, 0, 0), r=(1, 1, 0), s=(0, 1, 0))
    lam = states.build_lambda(ladder3, qn)
    broken = sum(not pauli.commutes(lam, a) for a in pauli.star_operators(ladder3))
    e0 = spectrum.ground_energy(ladder3, C)
    assert spectrum.energy(ladder3, qn, C) == pytest.approx(e0 + 2 * C.J * broken)
