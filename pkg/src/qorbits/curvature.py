"""Finite-difference Riemannian curvature over metric fields, the closed-form
uniform-coefficient example (metric, Ricci, scalar 14/gamma^2), and the long
closed-form scalar curvature of the linearly perturbed metric.

Sign convention: Riemann is

    R^r_{smn} = d_m Gamma^r_{ns} - d_n Gamma^r_{ms}
                + Gamma^r_{ml} Gamma^l_{ns} - Gamma^r_{nl} Gamma^l_{ms},

Ricci its (r, m) contraction; a round 2-sphere of radius r then has scalar
curvature +2/r^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FormulaDomainError, SingularMetricError
from .fubini_study import MetricTensor

DEFAULT_CURVATURE_STEP = 1e-3
SINGULARITY_TOL = 1e-10


@dataclass(frozen=True)
class MetricField:
    """Metric tensor as a function of chart coordinates.

    evaluator maps a coordinate vector to a (dim, dim) array; domain, when
    given, is a per-coordinate (lo, hi) box inside which finite differences
    are trusted.
    """

    dim: int
    evaluator: object
    domain: tuple[tuple[float, float], ...] | None = None

    def __call__(self, xi) -> np.ndarray:
        g = self.evaluator(np.asarray(xi, dtype=float))
        g = g.entries if isinstance(g, MetricTensor) else np.asarray(g, dtype=float)
        if g.shape != (self.dim, self.dim):
            raise ValueError(f"evaluator returned shape {g.shape}")
        return g

    @classmethod
    def from_family(cls, family, gamma: float = 1.0, h: float = 1e-5,
                    domain=None) -> "MetricField":
        from .fubini_study import numeric_fs_metric

        dim = len(family.chart)
        return cls(
            dim,
            lambda xi: numeric_fs_metric(family, xi, gamma=gamma, h=h).entries,
            domain,
        )

    def check_interior(self, xi, margin: float):
        if self.domain is None:
            return
        for k, (lo, hi) in enumerate(self.domain):
            if not (lo + margin <= xi[k] <= hi - margin):
                raise ValueError(
                    f"point {xi} not interior to domain with margin {margin}"
                )


@dataclass(frozen=True)
class CurvatureReport:
    point: np.ndarray
    christoffel: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    h: float
    metric_condition: float
    note: str = ""


def _metric_partials(mf: MetricField, xi, h: float) -> np.ndarray:
    dim = mf.dim
    dg = np.empty((dim, dim, dim))
    for mu in range(dim):
        step = np.zeros(dim)
        step[mu] = h
        dg[mu] = (mf(xi + step) - mf(xi - step)) / (2.0 * h)
    return dg


def christoffel_at(mf: MetricField, xi, h: float) -> np.ndarray:
    """Gamma^r_{mn} = 1/2 g^{rl} (d_m g_{ln} + d_n g_{lm} - d_l g_{mn})."""
    g = mf(xi)
    evals = np.linalg.eigvalsh(g)
    if np.min(np.abs(evals)) < SINGULARITY_TOL:
        raise SingularMetricError(
            f"metric singular at {np.asarray(xi)}: eigenvalues {evals}"
        )
    ginv = np.linalg.inv(g)
    dg = _metric_partials(mf, xi, h)
    t1 = np.einsum("rl,mln->rmn", ginv, dg)
    t3 = np.einsum("rl,lmn->rmn", ginv, dg)
    return 0.5 * (t1 + t1.transpose(0, 2, 1) - t3)


def _curvature_tensors(mf: MetricField, xi, h: float):
    dim = mf.dim
    gamma = christoffel_at(mf, xi, h)
    dgamma = np.empty((dim, dim, dim, dim))
    for mu in range(dim):
        step = np.zeros(dim)
        step[mu] = h
        dgamma[mu] = (
            christoffel_at(mf, xi + step, h) - christoffel_at(mf, xi - step, h)
        ) / (2.0 * h)
    # R^r_{smn}
    riemann = (
        np.einsum("mrns->rsmn", dgamma)
        - np.einsum("nrms->rsmn", dgamma)
        + np.einsum("rml,lns->rsmn", gamma, gamma)
        - np.einsum("rnl,lms->rsmn", gamma, gamma)
    )
    ricci = np.einsum("rsrn->sn", riemann)
    g = mf(xi)
    ginv = np.linalg.inv(g)
    scalar = float(np.einsum("sn,sn->", ginv, ricci))
    return gamma, riemann, ricci, scalar


def curvature_at(
    mf: MetricField,
    xi,
    h: float = DEFAULT_CURVATURE_STEP,
    richardson: bool = True,
) -> CurvatureReport:
    """Curvature tensors at a point by nested central differences.

    With richardson=True the h and h/2 evaluations are combined as
    (4 T(h/2) - T(h))/3, removing the leading O(h^2) error.
    """
    xi = np.asarray(xi, dtype=float)
    mf.check_interior(xi, 2.0 * h)
    g = mf(xi)
    evals = np.linalg.eigvalsh(g)
    if np.min(np.abs(evals)) < SINGULARITY_TOL:
        raise SingularMetricError(
            f"metric singular at {xi}: eigenvalues {evals}"
        )
    cond = float(np.max(np.abs(evals)) / np.min(np.abs(evals)))
    if mf.dim == 1:
        z = np.zeros((1,) * 4)
        return CurvatureReport(
            xi, np.zeros((1, 1, 1)), z, np.zeros((1, 1)), 0.0, h, cond,
            note="dim-1 manifolds are intrinsically flat",
        )
    gam, rie, ric, sca = _curvature_tensors(mf, xi, h)
    if richardson:
        gam2, rie2, ric2, sca2 = _curvature_tensors(mf, xi, h / 2.0)
        gam = (4.0 * gam2 - gam) / 3.0
        rie = (4.0 * rie2 - rie) / 3.0
        ric = (4.0 * ric2 - ric) / 3.0
        sca = (4.0 * sca2 - sca) / 3.0
    return CurvatureReport(xi, gam, rie, ric, float(sca), h, cond)


def sphere_metric_field(radius: float) -> MetricField:
    """Round 2-sphere diag(r^2, r^2 sin^2 theta) in (theta, phi); R = 2/r^2."""

    def ev(xi):
        return np.diag([radius**2, radius**2 * math.sin(xi[0]) ** 2])

    return MetricField(2, ev)


def g0_uniform_metric(omega: float, alpha12: float, gamma: float = 1.0) -> np.ndarray:
    """Closed-form metric at uniform coefficients |eta_k| = 1/2 in the chart
    (omega, phi, c3, c_plus); alpha12 is the relative phase of the first two
    coefficients entering through sin(alpha12 + 2 omega)."""
    g2 = gamma * gamma
    u = alpha12 + 2.0 * omega
    return np.array(
        [
            [g2 / 2.0, 0.0, 0.0, 0.0],
            [0.0, g2 * (math.cos(2.0 * u) + 3.0) / 32.0, g2 * math.sin(u) / 4.0, 0.0],
            [0.0, g2 * math.sin(u) / 4.0, g2, 0.0],
            [0.0, 0.0, 0.0, g2 / 2.0],
        ]
    )


def g0_uniform_ricci(omega: float, alpha12: float) -> np.ndarray:
    """Cataloged Ricci tensor of g0_uniform_metric (scale-free)."""
    u = alpha12 + 2.0 * omega
    return np.array(
        [
            [3.0, 0.0, 0.0, 0.0],
            [0.0, (5.0 * math.cos(2.0 * u) + 7.0) / 16.0, math.sin(u) / 2.0, 0.0],
            [0.0, math.sin(u) / 2.0, 2.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ]
    )


def analytic_g0_and_ricci(omega: float, alpha12: float, gamma: float = 1.0):
    """(metric, Ricci, scalar) of the uniform-coefficient example; the scalar
    is the cataloged constant 14/gamma^2."""
    g = MetricTensor(
        g0_uniform_metric(omega, alpha12, gamma),
        gamma,
        ("omega", "phi", "c3", "c_plus"),
    )
    return g, g0_uniform_ricci(omega, alpha12), 14.0 / gamma**2


def g0_uniform_field(alpha12: float, gamma: float = 1.0) -> MetricField:
    return MetricField(4, lambda xi: g0_uniform_metric(xi[0], alpha12, gamma))


def _pert_core(omega: float) -> float:
    """Shared factor 4w sin w + sin w + sin 3w - 4w cos w + cos w - cos 5w."""
    return (
        4 * omega * math.sin(omega)
        + math.sin(omega)
        + math.sin(3 * omega)
        - 4 * omega * math.cos(omega)
        + math.cos(omega)
        - math.cos(5 * omega)
    )


def perturbed_scalar_curvature_closed_form(
    omega: float, beta: float, gamma: float = 1.0
) -> float:
    """Closed-form scalar curvature of the uniform-coefficient manifold under
    the linear x-field perturbation, transcribed verbatim from the catalog.

    The formula is a sum of five rational trigonometric blocks times
    cos(2w)/(gamma^2 (cos 4w + 1)^2).  Vanishing denominators raise
    FormulaDomainError naming the factor.  Its beta = 0 limit is compared
    against the constant 14/gamma^2 elsewhere; agreement is measured, not
    assumed.
    """
    w = omega
    sin, cos = math.sin, math.cos
    outer_den = (cos(4 * w) + 1.0) ** 2
    if abs(outer_den) < 1e-12:
        raise FormulaDomainError("(cos 4w + 1)^2 vanishes (w near pi/4 mod pi/2)")
    core = _pert_core(w)

    a1 = 8 * beta * cos(2 * w) ** 4 * (
        4 * w**2 * sin(w)
        + 6 * (w**2 - 2) * sin(w) * cos(2 * w)
        + 8 * w * cos(3 * w)
    )
    a2 = 6 * beta * w**2 * core + w**4 + w**4 * cos(4 * w)

    b1 = (cos(4 * w) + 1) * (
        beta
        * (
            -16 * w**2 * sin(w)
            + 16 * w**2 * sin(3 * w)
            - 2 * (8 * w**2 + 3 * w - 12) * cos(w)
            - 4 * (4 * w**2 + 9 * w - 1) * cos(3 * w)
            + 5 * w * sin(w)
            + 5 * w * sin(3 * w)
            + w * sin(5 * w)
            + w * sin(7 * w)
            - 4 * sin(w)
            + 24 * sin(3 * w)
            + 4 * sin(7 * w)
            - 6 * w * cos(7 * w)
            + 4 * cos(5 * w)
        )
        + 7 * w**3 * cos(2 * w)
        + w**3 * cos(6 * w)
    )
    b2 = 4 * beta * w * core + w**3 + w**3 * cos(4 * w)

    c1 = 2 * sin(4 * w) * (
        2 * beta * (14 * w**3 + 4 * w**2 - 7 * w + 6) * cos(w)
        - 2
        * beta
        * (
            14 * w**3 * sin(w)
            + 10 * w**3 * sin(3 * w)
            - 12 * w**2 * sin(w)
            + 7 * w**2 * sin(3 * w)
            + 7 * w**2 * sin(7 * w)
            + w**2 * cos(7 * w)
            + (4 * w**2 - 3) * cos(5 * w)
            + (10 * w**3 + 5 * w**2 + 12 * w - 3) * cos(3 * w)
            - w * sin(w)
            - w * sin(7 * w)
            + 3 * sin(w)
            - 6 * sin(3 * w)
            - 3 * sin(7 * w)
            + 5 * w * cos(7 * w)
        )
        + w**4 * sin(2 * w)
        + w**4 * sin(6 * w)
    )
    c2 = 6 * beta * w**2 * core + w**4 + w**4 * cos(4 * w)

    d1 = cos(2 * w) * (
        beta
        * (
            160 * w**2 * sin(w)
            - 152 * w**2 * sin(3 * w)
            + 104 * w**2 * sin(5 * w)
            - 104 * w**2 * cos(5 * w)
            - 2 * (80 * w**2 + 9 * w - 32) * cos(w)
            + (-152 * w**2 + 62 * w + 40) * cos(3 * w)
            + 52 * w * sin(w)
            - 46 * w * sin(3 * w)
            + 42 * w * sin(5 * w)
            + 19 * w * sin(7 * w)
            + 7 * w * sin(9 * w)
            + 16 * sin(3 * w)
            + 16 * sin(5 * w)
            - 54 * w * cos(5 * w)
            - 22 * w * cos(9 * w)
            + 24 * cos(5 * w)
            - 4 * cos(7 * w)
            + 4 * cos(9 * w)
        )
        + 19 * w**3
        + 24 * w**3 * cos(4 * w)
        + 5 * w**3 * cos(8 * w)
    )
    d2 = 6 * beta * w * core + w**3 + w**3 * cos(4 * w)

    e1 = cos(2 * w) * (
        -2 * beta * (40 * w**3 + 21 * w**2 - 44 * w + 6) * cos(w)
        + 2 * beta * (-100 * w**3 + 55 * w**2 + 36 * w - 6) * cos(3 * w)
        + beta
        * (
            80 * w**3 * sin(w)
            - 200 * w**3 * sin(3 * w)
            + 136 * w**3 * sin(5 * w)
            + 24 * w**2 * sin(w)
            - 82 * w**2 * sin(3 * w)
            + 54 * w**2 * sin(5 * w)
            + 25 * w**2 * sin(7 * w)
            + 9 * w**2 * sin(9 * w)
            + (-38 * w**2 + 8 * w + 12) * cos(9 * w)
            - 2 * (68 * w**3 + 31 * w**2 - 12 * w - 6) * cos(5 * w)
            - 16 * w * sin(w)
            + 48 * w * sin(3 * w)
            + 48 * w * sin(5 * w)
            + 16 * w * sin(9 * w)
            - 48 * sin(w)
            + 12 * sin(3 * w)
            - 36 * sin(5 * w)
            - 6 * sin(7 * w)
            - 6 * sin(9 * w)
        )
        + 18 * w**4
        + 24 * w**4 * cos(4 * w)
        + 6 * w**4 * cos(8 * w)
    )
    e2 = 6 * beta * w**2 * core + w**4 + w**4 * cos(4 * w)

    for name, den in (("A2", a2), ("B2", b2), ("C2", c2), ("D2", d2), ("E2", e2)):
        if abs(den) < 1e-300:
            raise FormulaDomainError(f"denominator {name} vanishes at omega={omega}")
    total = a1 / a2 + b1 / b2 + c1 / c2 + d1 / d2 + e1 / e2
    return cos(2 * w) / (gamma**2 * outer_den) * total
