import itertools
import math

import numpy as np
import pytest

from kitaev_ladder import oracle, pauli, rdm, states
from kitaev_ladder.rdm import ParityMixture
from kitaev_ladder.spectrum import BudgetError, Couplings, QuantumNumbers
from kitaev_ladder.thermo import ThermalPoint

C = Couplings(1.0, 1.0)


def gibbs(lat, beta, c=C):
    return oracle.thermal_density_matrix(oracle.build_hamiltonian(lat, c), beta)


def test_psi0_leg_is_maximally_mixed(ladder2):
    psi0 = states.build_psi_l(ladder2, (0, 0))
    rho = rdm.partial_trace(psi0, rdm.subsystem_A(ladder2), 6)
    assert np.allclose(rho, np.eye(4) / 4, atol=1e-12)


def test_product_state_stays_pure(ladder2):
    omega = pauli.omega_plus(6)
    for sub in (rdm.subsystem_A(ladder2), rdm.subsystem_B(ladder2), rdm.subsystem_D(ladder2)):
        rho = rdm.partial_trace(omega, sub, 6)
        target = np.zeros_like(rho)
        target[0, 0] = 1
        assert np.allclose(rho, target)


def test_every_eigenstate_leg_maximally_mixed(ladder2):
    for st in states.all_eigenstates(ladder2, C):
        for leg in ("upper", "lower"):
            rho = rdm.partial_trace(st.vector, rdm.subsystem_A(ladder2, leg), 6)
            assert rdm.trace_distance(rho, rdm.rho_A_closed(2)) <= 1e-12


def test_pairs_of_leg_links(ladder3):
    st = states.all_eigenstates(ladder3, C)[77]
    for pair in itertools.combinations(ladder3.groups["upper"], 2):
        assert np.allclose(rdm.partial_trace(st.vector, pair, 9), np.eye(4) / 4, atol=1e-12)


def test_thermal_leg_n3(ladder3):
    rho = rdm.partial_trace(gibbs(ladder3, 2.0), rdm.subsystem_A(ladder3), 9)
    assert rdm.trace_distance(rho, np.eye(8) / 8) <= 1e-10


@pytest.mark.parametrize("beta", [0.7, 0.9])
def test_rho_B_against_ed_and_ensemble(ladder2, beta):
    tp = ThermalPoint(beta, C, 2)
    closed = rdm.rho_B_closed(tp).dense()
    sub = rdm.subsystem_B(ladder2)
    assert rdm.trace_distance(closed, rdm.partial_trace(gibbs(ladder2, beta), sub, 6)) <= 1e-10
    ens = rdm.thermal_rdm_closed_form_states(ladder2, sub, tp)
    assert rdm.trace_distance(closed, ens) <= 1e-10


def test_entropy_B(ladder2):
    tp = ThermalPoint(0.9, C, 2)
    brute = rdm.partial_trace(gibbs(ladder2, 0.9), rdm.subsystem_B(ladder2), 6)
    assert abs(rdm.von_neumann_entropy(brute) - rdm.entropy_B(tp)) <= 1e-9
    assert rdm.entropy_B(tp) == pytest.approx(rdm.rho_B_closed(tp).entropy(), abs=1e-14)


def test_parity_mixture_limits():
    assert rdm.rho_B_closed(ThermalPoint(50.0, C, 3)).weight_even == pytest.approx(1.0)
    hot = rdm.rho_B_closed(ThermalPoint(0.0, C, 3))
    assert np.allclose(hot.dense(), np.eye(8) / 8)
    assert rdm.shannon_bits(1.0) == 0 and rdm.shannon_bits(0.5) == 1


def test_parity_mixture_validation():
    with pytest.raises(ValueError):
        ParityMixture(0.7, 0.7, 3)


def test_rho_C(ladder3):
    tp_beta = 1.1
    G = gibbs(ladder3, tp_beta)
    for k in (1, 2):
        for rungs in itertools.combinations(range(3), k):
            sub = rdm.subsystem_C(ladder3, rungs)
            brute = rdm.partial_trace(G, sub, 9)
            assert rdm.trace_distance(brute, rdm.rho_C_closed(ladder3, sub)) <= 1e-10


def test_rho_B_traces_to_uniform(ladder3):
    closed = rdm.rho_B_closed(ThermalPoint(0.4, C, 3)).dense()
    # trace out the last rung (subsystem bit 2)
    reduced = rdm.partial_trace(closed, (0, 1), 3)
    assert np.allclose(reduced, np.eye(4) / 4, atol=1e-15)


def test_C_validation(ladder3):
    with pytest.raises(ValueError):
        rdm.subsystem_C(ladder3, [0, 1, 2])
    with pytest.raises(ValueError):
        rdm.subsystem_C(ladder3, [])
    with pytest.raises(ValueError):
        rdm.subsystem_C(ladder3, [5])


@pytest.mark.parametrize("beta", [0.5, 2.0])
def test_rho_D_thermal(ladder2, beta):
    brute = rdm.partial_trace(gibbs(ladder2, beta), rdm.subsystem_D(ladder2), 6)
    assert rdm.trace_distance(brute, rdm.rho_D_closed()) <= 1e-10


def test_rho_D_single_ground_state(ladder2):
    g = states.build_eigenstate(ladder2, QuantumNumbers(l=(0, 0), r=(0, 0), s=(0, 0)), C)
    rho = rdm.partial_trace(g.vector, rdm.subsystem_D(ladder2), 6)
    assert np.allclose(rho, np.diag([0.5, 0, 0, 0.5]), atol=1e-12)


def test_I4_has_zero_negativity():
    rho = rdm.rho_D_closed()
    # partial transpose of I/4 is itself
    pt = rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
    assert np.linalg.eigvalsh(pt).min() >= 0


def test_report_fields(ladder2):
    tp = ThermalPoint(1.0, C, 2)
    rep = rdm.rdm_report("A", tp, rdm.rho_A_closed(2), "nats", rdm.rho_A_closed(2))
    assert rep["trace_distance_to_maximally_mixed"] <= 1e-10
    assert rep["entropy_nats"] == pytest.approx(2 * math.log(2))
    assert rep["closed_vs_brute_force_trace_distance"] == 0


def test_keep_budget():
    with pytest.raises(BudgetError):
        rdm.rho_A_closed(20)
