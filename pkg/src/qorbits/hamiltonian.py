"""Two-qubit Hamiltonian matrices, exact and numeric eigensystems, and
first-order perturbed eigenstates.

Basis ordering throughout: |uu>, |ud>, |du>, |dd> with u/d the sigma_3
eigenstates of each qubit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChartError, ResonanceError
from .model import DerivedParams, HamiltonianParams, derive_params

SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
ID2 = np.eye(2, dtype=complex)

# Bell-type stationary eigenvectors (|ud> +- |du>)/sqrt(2)
PSI3 = np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2)
PSI4 = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)

HERMITICITY_TOL = 1e-14

# Default resonance threshold on the perturbation denominators 2c3 +- omega - c_plus
RESONANCE_THRESHOLD = 1e-6


def build_hamiltonian(p: HamiltonianParams) -> np.ndarray:
    """Assemble b(s3 x 1 + 1 x s3) + sum_j c_j s_j x s_j + beta(s1 x 1 + 1 x s1)."""
    h = p.b * (np.kron(SIGMA_3, ID2) + np.kron(ID2, SIGMA_3))
    h = h + p.c1 * np.kron(SIGMA_1, SIGMA_1)
    h = h + p.c2 * np.kron(SIGMA_2, SIGMA_2)
    h = h + p.c3 * np.kron(SIGMA_3, SIGMA_3)
    if p.beta != 0.0:
        h = h + p.beta * (np.kron(SIGMA_1, ID2) + np.kron(ID2, SIGMA_1))
    return h


@dataclass(frozen=True)
class Spectrum:
    """Energies E1..E4 and eigenvectors psi1..psi4 (rows of `states`)."""

    energies: np.ndarray
    states: np.ndarray

    def residuals(self, h: np.ndarray) -> np.ndarray:
        """||H psi_k - E_k psi_k|| for each k."""
        return np.array(
            [
                np.linalg.norm(h @ self.states[k] - self.energies[k] * self.states[k])
                for k in range(len(self.energies))
            ]
        )


def branch_sign(phi: float) -> float:
    # +1 on the closed principal branch cos(phi) >= 0; a tiny band below 0
    # is snapped to +1 so that float pi/2-multiples land on the declared
    # branch rather than on rounding noise of cos.
    return 1.0 if math.cos(phi) >= -1e-12 else -1.0


def eigvec_pair(phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvectors psi1, psi2 living in span(|uu>, |dd>).

    Evaluated in the form  psi1 = (s*sqrt(1+sin phi), 0, 0, sqrt(1-sin phi))/sqrt(2)
    with s = sign(cos phi), which equals the cos(phi)/sqrt(1 -+ sin phi)
    representation wherever the latter is defined and stays finite at the
    pure-field limit |sin phi| -> 1.
    """
    s = branch_sign(phi)
    sp = math.sqrt(max(0.0, 1.0 + math.sin(phi)))
    sm = math.sqrt(max(0.0, 1.0 - math.sin(phi)))
    psi1 = np.array([s * sp, 0, 0, sm], dtype=complex) / math.sqrt(2)
    psi2 = np.array([s * sm, 0, 0, -sp], dtype=complex) / math.sqrt(2)
    return psi1, psi2


def eigvec_pair_dphi(phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Analytic d/dphi of eigvec_pair (used by closed-form cross checks)."""
    s = branch_sign(phi)
    c = math.cos(phi)
    sp = math.sqrt(max(1e-300, 1.0 + math.sin(phi)))
    sm = math.sqrt(max(1e-300, 1.0 - math.sin(phi)))
    d1 = np.array([s * c / (2 * sp), 0, 0, -c / (2 * sm)], dtype=complex) / math.sqrt(2)
    d2 = np.array([-s * c / (2 * sm), 0, 0, -c / (2 * sp)], dtype=complex) / math.sqrt(2)
    return d1, d2


def analytic_energies(d: DerivedParams, c3: float) -> np.ndarray:
    return np.array(
        [c3 + d.omega, c3 - d.omega, -c3 + d.c_plus, -c3 - d.c_plus]
    )


def analytic_spectrum(p: HamiltonianParams) -> Spectrum:
    """Exact eigensystem of the unperturbed Hamiltonian (beta ignored)."""
    d = derive_params(p)
    if d.degenerate:
        raise DegenerateChartError(
            "omega = 0 (b = 0 and c1 = c2): phi is undefined"
        )
    psi1, psi2 = eigvec_pair(d.phi)
    states = np.array([psi1, psi2, PSI3, PSI4])
    return Spectrum(analytic_energies(d, p.c3), states)


def jacobi_eigh(
    h: np.ndarray, off_tol: float = 1e-14, max_sweeps: int = 60
) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
    rotations.

    Sweeps 2x2 unitary eliminations over all (p, q) pairs until the
    off-diagonal Frobenius norm drops below off_tol.  Returns eigenvalues
    ascending and the matching eigenvectors as columns.
    """
    a = np.array(h, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if np.linalg.norm(a - a.conj().T) > HERMITICITY_TOL * max(1.0, np.linalg.norm(a)):
        raise ValueError("matrix is not Hermitian")
    v = np.eye(n, dtype=complex)
    mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.abs(a[mask]) ** 2)))
        if off < off_tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < off_tol / (n * n):
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # G differs from identity only in rows/cols p, q:
                #   G[p,p]=c, G[p,q]=s*phase, G[q,p]=-s*conj(phase), G[q,q]=c
                gp = a[:, p].copy()
                gq = a[:, q].copy()
                a[:, p] = c * gp - s * np.conj(phase) * gq
                a[:, q] = s * phase * gp + c * gq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * phase * rq
                a[q, :] = s * np.conj(phase) * rp + c * rq
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * np.conj(phase) * vq
                v[:, q] = s * phase * vp + c * vq
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    evals = np.diag(a).real
    order = np.argsort(evals, kind="stable")
    return evals[order], v[:, order]


def numeric_spectrum(h: np.ndarray, off_tol: float = 1e-14) -> Spectrum:
    """Oracle eigensystem via the Jacobi solver; eigenvalues ascending."""
    evals, evecs = jacobi_eigh(h, off_tol=off_tol)
    return Spectrum(evals, evecs.T)


def match_states(reference: np.ndarray, candidates: np.ndarray) -> list[int]:
    """Match each reference vector to the candidate of maximal overlap.

    Degenerate candidates are interchangeable; a greedy assignment over
    |<cand|ref>| is sufficient here because overlaps are close to 0 or 1.
    """
    taken: set[int] = set()
    matches = []
    for ref in reference:
        overlaps = np.abs(candidates @ ref.conj())
        for idx in np.argsort(-overlaps):
            if int(idx) not in taken:
                taken.add(int(idx))
                matches.append(int(idx))
                break
    return matches


def perturbation_denominators(omega: float, c3: float, c_plus: float):
    """The two energy denominators 2c3 + omega - c_plus and 2c3 - omega - c_plus."""
    return 2.0 * c3 + omega - c_plus, 2.0 * c3 - omega - c_plus


def perturbed_eigenstates(
    p: HamiltonianParams, beta: float, rho: float = RESONANCE_THRESHOLD
) -> Spectrum:
    """First-order eigenvectors of H + beta(s1 x 1 + 1 x s1), energies unchanged.

    The perturbation couples psi1, psi2 to psi3 only; psi4 is annihilated by
    it and stays exact.  Each corrected vector is normalized before return.
    """
    spec = analytic_spectrum(p)
    d = derive_params(p)
    if beta == 0.0:
        return spec
    den1, den2 = perturbation_denominators(d.omega, p.c3, d.c_plus)
    if abs(den1) < rho or abs(den2) < rho:
        raise ResonanceError(
            f"perturbation-theory breakdown: denominators ({den1:.3e}, {den2:.3e}) "
            f"below threshold {rho:.1e}"
        )
    psi1, psi2 = spec.states[0], spec.states[1]
    # <psi3|V|psi_l> = sqrt(2) (a_l + d_l) for the x-field perturbation V
    m13 = math.sqrt(2) * float((psi1[0] + psi1[3]).real)
    m23 = math.sqrt(2) * float((psi2[0] + psi2[3]).real)
    v1 = psi1 + beta * (m13 / den1) * PSI3
    v2 = psi2 + beta * (m23 / den2) * PSI3
    v3 = PSI3 - beta * ((m13 / den1) * psi1 + (m23 / den2) * psi2)
    states = np.array([v / np.linalg.norm(v) for v in (v1, v2, v3, PSI4)])
    return Spectrum(spec.energies.copy(), states)
