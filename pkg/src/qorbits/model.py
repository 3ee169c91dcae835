"""Coupling parameters, derived chart quantities and the C1..C7 case classification.

The physical model is a pair of qubits with exchange couplings (c1, c2, c3),
a z-axis field b and an optional x-axis field beta.  Everything downstream is
parametrized by the derived quantities

    omega = sqrt((2b)^2 + c_minus^2),   c_pm = c1 +- c2,

with the angle phi fixed by (c_minus, 2b) = omega (cos phi, sin phi).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CaseMismatchError,
    ClassificationToleranceError,
    StationaryStateError,
)

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class HamiltonianParams:
    """Dimensionless couplings of the two-qubit Hamiltonian.

    beta is the strength of the x-axis field used as a linear perturbation.
    It is assumed small; no bound is enforced, but every report carries it.
    """

    b: float
    c1: float
    c2: float
    c3: float
    beta: float = 0.0

    def __post_init__(self):
        for name in ("b", "c1", "c2", "c3", "beta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.beta < 0:
            raise ValueError("beta must be >= 0")

    @property
    def c_plus(self) -> float:
        return self.c1 + self.c2

    @property
    def c_minus(self) -> float:
        return self.c1 - self.c2


@dataclass(frozen=True)
class DerivedParams:
    """Chart quantities (omega, phi, c_plus) derived from HamiltonianParams.

    The phi branch is fixed over the full quadrant: (c_minus, 2b) equals
    omega*(cos phi, sin phi) with phi in (-pi, pi].  When omega = 0 the angle
    is undefined; phi is set to 0 and `degenerate` is flagged, and chart-based
    operations must refuse such parameters.
    """

    omega: float
    phi: float
    c_plus: float
    c_minus: float
    degenerate: bool = False


def derive_params(p: HamiltonianParams) -> DerivedParams:
    """Map physical couplings to the (omega, phi, c_plus) chart."""
    two_b = 2.0 * p.b
    omega = math.hypot(two_b, p.c_minus)
    if omega == 0.0:
        return DerivedParams(0.0, 0.0, p.c_plus, p.c_minus, degenerate=True)
    phi = math.atan2(two_b, p.c_minus)
    return DerivedParams(omega, phi, p.c_plus, p.c_minus)


@dataclass(frozen=True)
class InitialCoefficients:
    """Complex coefficients eta_1..eta_4 of the initial state in the eigenbasis."""

    eta1: complex
    eta2: complex
    eta3: complex
    eta4: complex

    def __post_init__(self):
        norm2 = sum(abs(e) ** 2 for e in self.as_tuple())
        if abs(norm2 - 1.0) > _NORM_TOL:
            raise ValueError(
                f"coefficients must be normalized: |eta|^2 = {norm2!r}"
            )

    @classmethod
    def normalized(cls, eta1, eta2, eta3, eta4) -> "InitialCoefficients":
        """Build coefficients, rescaling to unit norm."""
        v = np.array([eta1, eta2, eta3, eta4], dtype=complex)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        v = v / n
        return cls(*v)

    def as_tuple(self):
        return (self.eta1, self.eta2, self.eta3, self.eta4)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=complex)

    @property
    def abs2(self) -> np.ndarray:
        return np.abs(self.as_array()) ** 2

    @property
    def eta12_plus(self) -> float:
        a = self.abs2
        return float(a[0] + a[1])

    @property
    def eta12_minus(self) -> float:
        a = self.abs2
        return float(a[0] - a[1])

    @property
    def eta34_plus(self) -> float:
        a = self.abs2
        return float(a[2] + a[3])

    @property
    def eta34_minus(self) -> float:
        a = self.abs2
        return float(a[2] - a[3])

    @property
    def alphas(self) -> np.ndarray:
        """Individual phases alpha_k = arg(eta_k); 0 for vanishing coefficients."""
        return np.array(
            [cmath.phase(e) if e != 0 else 0.0 for e in self.as_tuple()]
        )


# Charts of the per-case state manifolds (Table of dimensions).
CASE_CHARTS = {
    "C1": ("c_plus",),
    "C2": ("phi",),
    "C3": ("omega", "phi"),
    "C4": ("phi", "c"),
    "C5": ("omega", "phi", "c"),
    "C6": ("phi", "c", "c_plus"),
    "C7": ("omega", "phi", "c3", "c_plus"),
}


@dataclass(frozen=True)
class CaseClass:
    """Case label C1..C7 plus, where relevant, the indices (l, j) of the
    nonzero coefficients: l among {1, 2}, j among {3, 4}."""

    label: str
    l: int | None = None
    j: int | None = None

    def __post_init__(self):
        if self.label not in CASE_CHARTS:
            raise ValueError(f"unknown case label {self.label!r}")
        if self.l is not None and self.l not in (1, 2):
            raise ValueError("l must be 1 or 2")
        if self.j is not None and self.j not in (3, 4):
            raise ValueError("j must be 3 or 4")

    @property
    def chart(self) -> tuple[str, ...]:
        return CASE_CHARTS[self.label]

    @property
    def dimension(self) -> int:
        return len(self.chart)


# Magnitudes in (tol, AMBIGUITY_FACTOR*tol) can be neither called zero nor
# confidently nonzero; classification refuses them.
AMBIGUITY_FACTOR = 10.0


def classify(eta: InitialCoefficients, tol: float = 1e-12) -> CaseClass:
    """Classify initial coefficients by their zero pattern.

    tol is the threshold on |eta_i| below which a coefficient counts as zero.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    mags = np.abs(eta.as_array())
    ambiguous = (mags > tol) & (mags < AMBIGUITY_FACTOR * tol)
    if ambiguous.any():
        idx = int(np.argmax(ambiguous)) + 1
        raise ClassificationToleranceError(
            f"|eta{idx}| = {mags[idx - 1]:.3e} is within the ambiguity band of "
            f"tol = {tol:.3e}; use a tighter tol"
        )
    nz = mags > tol
    nz12 = [k for k in (0, 1) if nz[k]]
    nz34 = [k for k in (2, 3) if nz[k]]

    if not nz12 and len(nz34) == 1:
        raise StationaryStateError(
            f"only eta{nz34[0] + 1} is nonzero: stationary eigenstate, "
            "zero-dimensional orbit"
        )
    if not nz12 and len(nz34) == 2:
        return CaseClass("C1")
    if len(nz12) == 1 and not nz34:
        return CaseClass("C2", l=nz12[0] + 1)
    if len(nz12) == 2 and not nz34:
        return CaseClass("C3")
    if len(nz12) == 1 and len(nz34) == 1:
        return CaseClass("C4", l=nz12[0] + 1, j=nz34[0] + 1)
    if len(nz12) == 2 and len(nz34) == 1:
        return CaseClass("C5", j=nz34[0] + 1)
    if len(nz12) == 1 and len(nz34) == 2:
        return CaseClass("C6", l=nz12[0] + 1)
    if len(nz12) == 2 and len(nz34) == 2:
        return CaseClass("C7")
    raise StationaryStateError("all coefficients vanish below tol")


def require_case(case: CaseClass, eta: InitialCoefficients, tol: float = 1e-12):
    """Raise CaseMismatchError unless classify(eta) reproduces `case`."""
    found = classify(eta, tol)
    if found != case:
        raise CaseMismatchError(f"eta classifies as {found}, not {case}")
