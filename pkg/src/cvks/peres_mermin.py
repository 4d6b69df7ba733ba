"""Peres-Mermin square, its six row/column products and the KS combination.

    <chi> = <R1> + <R2> + <R3> + <C1> + <C2> - <C3>

is bounded by 4 for non-contextual hidden-variable models and equals 6 for
any two-qubit state.  Expectations can be taken in three realizations:

``ideal-qubit``   4x4 Pauli matrices acting on a two-qubit density matrix.
``cv-gate``       effective rotations via the fixed-reference gate pipeline.
``cv-closed-form`` effective rotations applied through the closed-form
                  four-term image with each ket's own label substituted for
                  alpha (see :func:`cvks.gates.apply_rotation`).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .coherent import CoherentSuperposition, DensityEnsemble, inner
from .gates import RotationSpec, apply_rotation

NCHV_BOUND = 4.0
QUANTUM_MAX = 6.0
IMAG_TOL = 1e-8

REALIZATIONS = ("ideal-qubit", "cv-gate", "cv-closed-form")


class ImaginaryResidueError(ArithmeticError):
    """A correlator came out with an imaginary part above the allowed residue."""


class PauliKind(enum.Enum):
    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"

    @property
    def matrix(self) -> np.ndarray:
        return _PAULI[self]

    @property
    def angles(self):
        """(theta, phi) selecting this Pauli from O(theta, phi); None for identity."""
        return _ANGLES[self]


_PAULI = {
    PauliKind.I: np.eye(2, dtype=complex),
    PauliKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    PauliKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    PauliKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}
_ANGLES = {
    PauliKind.I: None,
    PauliKind.X: (0.0, 0.0),
    PauliKind.Y: (0.0, -np.pi / 2),
    PauliKind.Z: (np.pi, 0.0),
}


@dataclass(frozen=True)
class TwoModeObservableSpec:
    mode1: PauliKind
    mode2: PauliKind

    @property
    def matrix(self) -> np.ndarray:
        return np.kron(self.mode1.matrix, self.mode2.matrix)

    def __str__(self):
        return f"{self.mode1.value}{self.mode2.value}"


class GammaKind(enum.Enum):
    ROW = "R"
    COLUMN = "C"


@dataclass(frozen=True)
class GammaProduct:
    kind: GammaKind
    index: int
    factors: tuple[TwoModeObservableSpec, TwoModeObservableSpec, TwoModeObservableSpec]

    @property
    def name(self) -> str:
        return f"{self.kind.value}{self.index}"

    @property
    def ks_sign(self) -> int:
        """Coefficient of this product in the KS combination."""
        return -1 if (self.kind is GammaKind.COLUMN and self.index == 3) else 1

    @property
    def matrix(self) -> np.ndarray:
        a, b, c = (f.matrix for f in self.factors)
        return a @ b @ c


def _obs(m1: str, m2: str) -> TwoModeObservableSpec:
    return TwoModeObservableSpec(PauliKind(m1), PauliKind(m2))


def build_square():
    """The 3x3 array of two-mode observables (rows indexed first)."""
    return (
        (_obs("Z", "I"), _obs("I", "Z"), _obs("Z", "Z")),
        (_obs("I", "X"), _obs("X", "I"), _obs("X", "X")),
        (_obs("Z", "X"), _obs("X", "Z"), _obs("Y", "Y")),
    )


def build_gamma(kind, k: int) -> GammaProduct:
    kind = GammaKind(kind) if not isinstance(kind, GammaKind) else kind
    if k not in (1, 2, 3):
        raise ValueError(f"k must be 1, 2 or 3, got {k!r}")
    sq = build_square()
    if kind is GammaKind.ROW:
        factors = sq[k - 1]
    else:
        factors = tuple(sq[i][k - 1] for i in range(3))
    return GammaProduct(kind, k, tuple(factors))


def all_gammas() -> list[GammaProduct]:
    """R1, R2, R3, C1, C2, C3 in that order."""
    return [build_gamma(kind, k) for kind in (GammaKind.ROW, GammaKind.COLUMN) for k in (1, 2, 3)]


def apply_gamma(
    g: GammaProduct,
    s: CoherentSuperposition,
    alpha: complex | None = None,
    substitute: bool = False,
) -> CoherentSuperposition:
    """Gamma|s> with the effective rotations; the last factor acts first."""
    if not substitute and alpha is None:
        raise ValueError("the fixed-reference realization needs alpha")
    ref = alpha if alpha is not None else 1.0
    for factor in reversed(g.factors):
        for mode, pk in ((1, factor.mode1), (2, factor.mode2)):
            if pk is PauliKind.I:
                continue
            theta, phi = pk.angles
            s = apply_rotation(RotationSpec(theta, phi, ref), s, mode, substitute=substitute)
    return s


def matrix_element(
    bra: CoherentSuperposition,
    g: GammaProduct,
    ket: CoherentSuperposition,
    realization: str = "cv-closed-form",
    alpha: complex | None = None,
) -> complex:
    """<bra|Gamma|ket> in one of the CV realizations."""
    if realization not in ("cv-gate", "cv-closed-form"):
        raise ValueError(f"matrix elements need a CV realization, got {realization!r}")
    out = apply_gamma(g, ket, alpha=alpha, substitute=realization == "cv-closed-form")
    return inner(bra, out)


def _as_density(state) -> np.ndarray:
    rho = np.asarray(state, dtype=complex)
    if rho.shape == (4,):
        rho = np.outer(rho, rho.conj())
    if rho.shape != (4, 4):
        raise ValueError("ideal-qubit realization expects a 4x4 density matrix or 4-vector")
    return rho


_DEFAULT = object()


def gamma_value(state, g: GammaProduct, realization: str = "ideal-qubit", alpha=None) -> complex:
    """Complex <Gamma> before the residue policy is applied."""
    if realization == "ideal-qubit":
        rho = _as_density(state)
        return complex(np.trace(rho @ g.matrix))
    if realization not in REALIZATIONS:
        raise ValueError(f"unknown realization {realization!r}")
    if isinstance(state, CoherentSuperposition):
        state = DensityEnsemble.pure(state)
    total = 0j
    for p, psi in state:
        if p == 0:
            continue
        total += p * matrix_element(psi, g, psi, realization, alpha)
    return total


def gamma_expectation(state, g: GammaProduct, realization: str = "ideal-qubit", alpha=None, imag_tol=_DEFAULT) -> float:
    """Re <Gamma>, policing the imaginary residue.

    ``imag_tol`` defaults to 1e-8 for the ideal realization.  For the CV
    realizations the products are not Hermitian at finite alpha and a
    residue is expected, so no check is made unless a tolerance is passed.
    """
    val = gamma_value(state, g, realization, alpha)
    if imag_tol is _DEFAULT:
        imag_tol = IMAG_TOL if realization == "ideal-qubit" else None
    if imag_tol is not None and abs(val.imag) > imag_tol:
        raise ImaginaryResidueError(
            f"<{g.name}> has imaginary part {val.imag:.3e} (> {imag_tol:g})"
        )
    return float(val.real)


def correlators(state, realization: str = "ideal-qubit", alpha=None, imag_tol=_DEFAULT) -> np.ndarray:
    """Array of <R1>, <R2>, <R3>, <C1>, <C2>, <C3>."""
    return np.array(
        [gamma_expectation(state, g, realization, alpha, imag_tol) for g in all_gammas()]
    )


def ks_combination(values) -> float:
    r1, r2, r3, c1, c2, c3 = values
    return float(r1 + r2 + r3 + c1 + c2 - c3)


def ks_function(state, realization: str = "ideal-qubit", alpha=None, imag_tol=_DEFAULT) -> float:
    return ks_combination(correlators(state, realization, alpha, imag_tol))
