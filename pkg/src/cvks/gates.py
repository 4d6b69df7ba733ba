"""Displacement and Kerr gates acting exactly on coherent superpositions.

Both gates map coherent kets to (sums of) coherent kets, so they can be
applied symbolically:

    D(b)|g>   = exp((b g* - b* g)/2) |g + b>
    U_NL|g>   = e^{-i pi/4}/sqrt(2) |g> + e^{i pi/4}/sqrt(2) |-g>

with U_NL = exp(-i pi n^2 / 2).  An effective qubit rotation O(theta, phi)
is compiled into the five-gate sequence

    D(-i phi/4a) U_NL D(i theta/4a) U_NL D(i phi/4a)

(rightmost factor acts first).  Modes are numbered 1 and 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .coherent import CoherentSuperposition, inner

KERR_WEIGHT = np.exp(-0.25j * np.pi) / np.sqrt(2.0)


@dataclass(frozen=True)
class Displace:
    beta: complex


@dataclass(frozen=True)
class Kerr:
    pass


Gate = Union[Displace, Kerr]
GateSequence = list


@dataclass(frozen=True)
class RotationSpec:
    """Parameters of the effective rotation O(theta, phi) about amplitude ``reference_alpha``."""

    theta: float
    phi: float
    reference_alpha: complex = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.theta) and np.isfinite(self.phi)):
            raise ValueError("rotation angles must be finite")
        if self.reference_alpha == 0:
            raise ValueError("reference_alpha must be non-zero")


def _column(mode: int) -> int:
    if mode not in (1, 2):
        raise ValueError(f"mode must be 1 or 2, got {mode!r}")
    return mode - 1


def _displace_terms(beta, s: CoherentSuperposition, col: int) -> CoherentSuperposition:
    # beta may be a scalar or one amplitude per term
    g = s.labels[:, col]
    beta = np.broadcast_to(np.asarray(beta, dtype=complex), g.shape)
    phase = np.exp(0.5 * (beta * np.conj(g) - np.conj(beta) * g))
    labels = np.array(s.labels)
    labels[:, col] = g + beta
    return CoherentSuperposition(s.weights * phase, labels)


def displace(beta: complex, s: CoherentSuperposition, mode: int = 1) -> CoherentSuperposition:
    return _displace_terms(complex(beta), s, _column(mode))


def kerr(s: CoherentSuperposition, mode: int = 1) -> CoherentSuperposition:
    col = _column(mode)
    flipped = np.array(s.labels)
    flipped[:, col] = -flipped[:, col]
    return CoherentSuperposition(
        np.concatenate([s.weights * KERR_WEIGHT, s.weights * np.conj(KERR_WEIGHT)]),
        np.concatenate([s.labels, flipped]),
    )


def compile_rotation(r: RotationSpec) -> GateSequence:
    """Gate list in application order (first element acts first)."""
    a = complex(r.reference_alpha)
    if a == 0:
        raise ValueError("reference_alpha must be non-zero")
    return [
        Displace(1j * r.phi / (4 * a)),
        Kerr(),
        Displace(1j * r.theta / (4 * a)),
        Kerr(),
        Displace(-1j * r.phi / (4 * a)),
    ]


def apply_gates(gates: GateSequence, s: CoherentSuperposition, mode: int = 1) -> CoherentSuperposition:
    for gate in gates:
        if isinstance(gate, Kerr):
            s = kerr(s, mode)
        else:
            s = displace(gate.beta, s, mode)
    return s


def substitution_reference(labels: np.ndarray):
    """Sign-fixed reference amplitudes and branch signs for the closed-form rule.

    A ket |g> is read as |+r> with r = g when Re(g) > 0 and as |-r> with
    r = -g otherwise (ties on the imaginary axis go to Im(r) >= 0).
    """
    labels = np.asarray(labels, dtype=complex)
    positive = (labels.real > 0) | ((labels.real == 0) & (labels.imag >= 0))
    return np.where(positive, labels, -labels), np.where(positive, 1, -1)


def apply_rotation(
    r: RotationSpec,
    s: CoherentSuperposition,
    mode: int = 1,
    substitute: bool = False,
) -> CoherentSuperposition:
    """Apply O(theta, phi) to one mode of ``s``.

    By default the compiled five-gate pipeline with reference amplitude
    ``r.reference_alpha`` is run exactly.

    With ``substitute=True`` each ket |g> is instead rewritten through the
    four-term closed-form image of |+-alpha> (times the pipeline phase
    -1j) with alpha replaced by the ket's own sign-fixed label.  On kets
    labelled +-alpha with real alpha both routes agree exactly; on shifted,
    complex labels the rewrite is not unitary.  It is the rule whose
    Peres-Mermin correlators reproduce the published closed forms.
    """
    col = _column(mode)
    if not substitute:
        return apply_gates(compile_rotation(r), s, mode)
    ref, sign = substitution_reference(s.labels[:, col])
    if np.any(ref == 0):
        raise ValueError("closed-form rule undefined on a vacuum label")
    w4, l4 = closed_form_transform(r.theta, r.phi, ref, sign)
    n = len(s)
    labels = np.repeat(s.labels, 4, axis=0)
    labels[:, col] = l4.reshape(n * 4)
    weights = (np.asarray(s.weights)[:, None] * (-1j) * w4).reshape(n * 4)
    return CoherentSuperposition(weights, labels)


def ideal_rotation(theta: float, phi: float) -> np.ndarray:
    """2x2 matrix of O(theta, phi) in the basis (|alpha>, |-alpha>)."""
    s, c = np.sin(theta / 2), np.cos(theta / 2)
    return np.array(
        [[s, np.exp(1j * phi) * c], [np.exp(-1j * phi) * c, -s]],
        dtype=complex,
    )


def closed_form_transform(theta: float, phi: float, alpha, sign):
    """Four-term image of |sign*alpha> under O(theta, phi) in closed form.

    Returns ``(weights, labels)`` for a single mode, each of shape
    ``alpha.shape + (4,)``; ``alpha`` and ``sign`` broadcast.  For real
    alpha the pipeline output equals ``-1j`` times this expansion term by
    term.
    """
    a = np.asarray(alpha, dtype=complex)
    sign = np.broadcast_to(np.asarray(sign), a.shape)
    if not np.all(np.isin(sign, (1, -1))):
        raise ValueError("sign must be +1 or -1")
    h = 1j * theta / (4 * a)
    f = 1j * phi / (2 * a)
    et, eti = np.exp(1j * theta / 4), np.exp(-1j * theta / 4)
    ep = np.exp(1j * phi / 2)
    w_plus = np.array([0.5 * et, 0.5j * et * ep, 0.5j * eti * ep, -0.5 * eti])
    w_minus = np.array([-0.5 * et, 0.5j * et / ep, 0.5j * eti / ep, 0.5 * eti])
    lab_plus = np.stack([a + h, -a - f - h, -a - f + h, a - h], axis=-1)
    lab_minus = np.stack([-a - h, a - f + h, a - f - h, -a + h], axis=-1)
    plus = (sign == 1)[..., None]
    weights = np.where(plus, w_plus, w_minus)
    labels = np.where(plus, lab_plus, lab_minus)
    return weights, labels


def rotation_fidelity_vs_ideal(r: RotationSpec) -> float:
    """Worst-case fidelity of the pipeline against the ideal 2x2 rotation.

    For each input |+-alpha> the pipeline output is compared with the
    ideal image O|+-alpha> written as a superposition of |alpha>, |-alpha>;
    the modulus of the normalised overlap removes one global phase.
    """
    a = complex(r.reference_alpha)
    o = ideal_rotation(r.theta, r.phi)
    worst = 1.0
    for idx, sgn in enumerate((1, -1)):
        out = apply_rotation(r, CoherentSuperposition.ket(sgn * a, 0.0), mode=1)
        target = CoherentSuperposition(o[:, idx], np.array([[a, 0.0], [-a, 0.0]]))
        num = abs(inner(target, out)) ** 2
        fid = num / (inner(target, target).real * inner(out, out).real)
        worst = min(worst, fid)
    return float(worst)
