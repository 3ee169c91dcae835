import math

import numpy as np
import pytest

from qorbits.errors import DegenerateChartError, ResonanceError
from qorbits.hamiltonian import (
    PSI4,
    analytic_spectrum,
    branch_sign,
    build_hamiltonian,
    eigvec_pair,
    jacobi_eigh,
    match_states,
    numeric_spectrum,
    perturbed_eigenstates,
)
from qorbits.model import HamiltonianParams


def test_build_zero():
    h = build_hamiltonian(HamiltonianParams(0, 0, 0, 0))
    assert np.allclose(h, 0)


def test_build_field_only():
    h = build_hamiltonian(HamiltonianParams(1, 0, 0, 0))
    assert np.allclose(h, np.diag([2, 0, 0, -2]))


def test_build_sigma1_coupling():
    h = build_hamiltonian(HamiltonianParams(0, 1, 0, 0))
    assert np.allclose(h, np.fliplr(np.eye(4)))


def test_build_hermitian_and_traceless(rng):
    for _ in range(25):
        b, c1, c2, c3 = rng.uniform(-2, 2, size=4)
        p = HamiltonianParams(b, c1, c2, c3, beta=abs(rng.normal()) * 0.1)
        h = build_hamiltonian(p)
        assert np.max(np.abs(h - h.conj().T)) < 1e-14
        assert abs(np.trace(h)) < 1e-12


def test_analytic_spectrum_residuals_random(rng):
    worst = 0.0
    for _ in range(100):
        b, c1, c2, c3 = rng.uniform(-2, 2, size=4)
        p = HamiltonianParams(b, c1, c2, c3)
        spec = analytic_spectrum(p)
        worst = max(worst, spec.residuals(build_hamiltonian(p)).max())
        # trace identity and pairwise orthonormality
        assert abs(spec.energies.sum()) < 1e-12
        gram = spec.states.conj() @ spec.states.T
        assert np.max(np.abs(gram - np.eye(4))) < 1e-10
    assert worst < 1e-10


def test_psi4_for_any_params(rng):
    for _ in range(10):
        b, c1, c2, c3 = rng.uniform(-2, 2, size=4)
        spec = analytic_spectrum(HamiltonianParams(b, c1, c2, c3))
        assert np.allclose(spec.states[3], PSI4)
        assert spec.energies[3] == pytest.approx(-c3 - (c1 + c2), abs=1e-14)


def test_phi_zero_symmetric_eigenvector():
    spec = analytic_spectrum(HamiltonianParams(0, 1, 0, 0))
    bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
    assert np.allclose(spec.states[0], bell)
    assert spec.energies[0] == pytest.approx(1.0)


def test_pure_field_limit_eigenvectors():
    # c_minus = 0 puts phi at +pi/2; the stable forms stay finite
    spec = analytic_spectrum(HamiltonianParams(0.7, 0.5, 0.5, 0.2))
    assert np.allclose(spec.states[0], [1, 0, 0, 0])
    assert np.allclose(spec.states[1], [0, 0, 0, -1])
    h = build_hamiltonian(HamiltonianParams(0.7, 0.5, 0.5, 0.2))
    assert spec.residuals(h).max() < 1e-12


def test_eigvec_pair_matches_printed_form(rng):
    # the s*sqrt(1 +- sin phi) representation equals cos/sqrt on both branches
    for phi in rng.uniform(-np.pi, np.pi, size=40):
        if abs(math.cos(phi)) < 1e-3:
            continue
        psi1, psi2 = eigvec_pair(phi)
        a1 = math.cos(phi) / math.sqrt(1 - math.sin(phi)) / math.sqrt(2)
        d1 = math.sqrt(1 - math.sin(phi)) / math.sqrt(2)
        a2 = math.cos(phi) / math.sqrt(1 + math.sin(phi)) / math.sqrt(2)
        d2 = -math.sqrt(1 + math.sin(phi)) / math.sqrt(2)
        assert abs(psi1[0] - a1) < 1e-12 and abs(psi1[3] - d1) < 1e-12
        assert abs(psi2[0] - a2) < 1e-12 and abs(psi2[3] - d2) < 1e-12


def test_branch_sign_boundary():
    assert branch_sign(math.pi / 2) == 1.0
    assert branch_sign(3 * math.pi / 2) == 1.0
    assert branch_sign(3.0) == -1.0


def test_degenerate_chart_refused():
    with pytest.raises(DegenerateChartError):
        analytic_spectrum(HamiltonianParams(0, 0.5, 0.5, 0.3))


def test_jacobi_diag():
    evals, evecs = jacobi_eigh(np.diag([2.0, 0.0, 0.0, -2.0]))
    assert np.allclose(evals, [-2, 0, 0, 2])
    assert np.allclose(np.abs(evecs.conj().T @ evecs), np.eye(4), atol=1e-14)


def test_jacobi_identity():
    evals, evecs = jacobi_eigh(np.eye(4, dtype=complex))
    assert np.allclose(evals, 1.0)
    assert np.allclose(evecs.conj().T @ evecs, np.eye(4), atol=1e-14)


def test_jacobi_vs_lapack_random(rng):
    for _ in range(40):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = a + a.conj().T
        evals, evecs = jacobi_eigh(h)
        ref = np.linalg.eigvalsh(h)
        assert np.max(np.abs(evals - ref)) < 1e-12
        # each column is an eigenvector
        for k in range(4):
            assert np.linalg.norm(h @ evecs[:, k] - evals[k] * evecs[:, k]) < 1e-12


def test_jacobi_rejects_non_hermitian():
    with pytest.raises(ValueError):
        jacobi_eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_numeric_matches_analytic_energies(rng):
    for _ in range(40):
        b, c1, c2, c3 = rng.uniform(-2, 2, size=4)
        p = HamiltonianParams(b, c1, c2, c3)
        h = build_hamiltonian(p)
        num = numeric_spectrum(h)
        ana = analytic_spectrum(p)
        assert np.max(np.abs(np.sort(ana.energies) - num.energies)) < 1e-12


def test_match_states_overlap():
    p = HamiltonianParams(0.5, 0.8, 0.2, 0.3)
    ana = analytic_spectrum(p)
    num = numeric_spectrum(build_hamiltonian(p))
    perm = match_states(ana.states, num.states)
    for k, idx in enumerate(perm):
        assert abs(np.vdot(num.states[idx], ana.states[k])) > 1 - 1e-10


def test_perturbed_beta_zero_is_analytic():
    p = HamiltonianParams(0.5, 0.8, 0.2, 0.3)
    a = analytic_spectrum(p)
    z = perturbed_eigenstates(p, 0.0)
    assert np.allclose(a.states, z.states)
    assert np.allclose(a.energies, z.energies)


def test_perturbed_psi4_unchanged():
    p = HamiltonianParams(0.5, 0.8, 0.2, 0.3)
    spec = perturbed_eigenstates(p, 0.05)
    assert np.allclose(spec.states[3], PSI4)


def test_perturbed_residual_scales_as_beta_squared():
    # log-log slope of the residual against the exactly perturbed matrix
    p = HamiltonianParams(0.5, 0.8, 0.2, 0.3)
    betas = np.array([1e-2, 1e-3, 1e-4])
    res = []
    for beta in betas:
        hp = build_hamiltonian(HamiltonianParams(0.5, 0.8, 0.2, 0.3, beta=beta))
        res.append(perturbed_eigenstates(p, beta).residuals(hp).max())
    slope = np.polyfit(np.log(betas), np.log(res), 1)[0]
    assert abs(slope - 2.0) < 0.1


def test_perturbed_matches_numeric_eigenvectors():
    # corrected vectors approach the exact ones of H' at O(beta^2)
    p = HamiltonianParams(0.5, 0.8, 0.2, 0.3)
    ks = []
    for beta in (1e-2, 1e-3, 1e-4):
        hp = build_hamiltonian(HamiltonianParams(0.5, 0.8, 0.2, 0.3, beta=beta))
        num = numeric_spectrum(hp)
        pert = perturbed_eigenstates(p, beta)
        perm = match_states(pert.states, num.states)
        worst = 0.0
        for k, idx in enumerate(perm):
            overlap = np.vdot(num.states[idx], pert.states[k])
            aligned = num.states[idx] * np.exp(1j * np.angle(overlap))
            worst = max(worst, np.linalg.norm(aligned - pert.states[k]))
        ks.append(worst / beta**2)
    ks = np.array(ks)
    assert np.max(ks) / np.min(ks) < 2.0  # stable prefactor over two decades


def test_perturbed_first_order_energies_vanish(rng):
    # the x-field perturbation has vanishing diagonal in the eigenbasis, so
    # eigenvalues are unchanged at first order; verified against the exact
    # spectrum of H'
    for _ in range(20):
        b, c1, c2, c3 = rng.uniform(-2, 2, size=4)
        p = HamiltonianParams(b, c1, c2, c3)
        spec = analytic_spectrum(p)
        v = build_hamiltonian(HamiltonianParams(0, 0, 0, 0, beta=1.0))
        diag = [abs(np.vdot(s, v @ s)) for s in spec.states]
        assert max(diag) < 1e-13
        beta = 1e-4
        hp = build_hamiltonian(HamiltonianParams(b, c1, c2, c3, beta=beta))
        exact = numeric_spectrum(hp).energies
        assert np.max(np.abs(np.sort(spec.energies) - exact)) < 40 * beta**2


def test_resonance_error():
    # 2 c3 - omega - c_plus = 0 at c3 = 0.5, omega = 0 + ... pick a resonant set
    p = HamiltonianParams(0.0, 0.6, 0.1, 0.5)  # omega=.5, c+=.7, 2c3-w-c+ = -0.2
    perturbed_eigenstates(p, 1e-3)  # fine
    resonant = HamiltonianParams(0.0, 0.35, 0.15, 0.35)
    # omega = 0.2, c_plus = 0.5, 2c3 - omega - c_plus = 0
    with pytest.raises(ResonanceError):
        perturbed_eigenstates(resonant, 1e-3)
