"""Finite weighted superpositions of two-mode coherent states.

Every pure state in the effective-qubit part of the package is a list of
terms ``w_k |g1_k, g2_k>``.  Weights are kept complex and unreduced; no
global phase is ever discarded.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

LABEL_MERGE_TOL = 1e-12
WEIGHT_DROP_TOL = 1e-14


class DegenerateStateError(ValueError):
    """Raised when a superposition cancels to (numerically) zero norm."""


def overlap(a, b):
    """Single-mode coherent overlap <a|b>.

    Broadcasts over numpy arrays.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    d = a - b
    return np.exp(-0.5 * (d.real**2 + d.imag**2) + 1j * np.imag(np.conj(a) * b))


def _frozen(arr):
    arr = np.array(arr, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CoherentSuperposition:
    """sum_k weights[k] |labels[k, 0], labels[k, 1]>"""

    weights: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        w = _frozen(np.atleast_1d(self.weights))
        lab = _frozen(np.asarray(self.labels).reshape(-1, 2))
        if w.ndim != 1 or lab.shape[0] != w.shape[0]:
            raise ValueError("weights and labels disagree in term count")
        if w.size < 1:
            raise ValueError("a superposition needs at least one term")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(lab))):
            raise ValueError("non-finite weight or label")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "labels", lab)

    @classmethod
    def ket(cls, g1, g2, weight=1.0) -> "CoherentSuperposition":
        return cls(np.array([weight], dtype=complex), np.array([[g1, g2]], dtype=complex))

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[complex, Sequence[complex]]]):
        terms = list(terms)
        return cls(
            np.array([t[0] for t in terms], dtype=complex),
            np.array([tuple(t[1]) for t in terms], dtype=complex),
        )

    def __len__(self):
        return self.weights.shape[0]

    def scaled(self, factor) -> "CoherentSuperposition":
        return CoherentSuperposition(self.weights * factor, self.labels)

    def __add__(self, other: "CoherentSuperposition") -> "CoherentSuperposition":
        return CoherentSuperposition(
            np.concatenate([self.weights, other.weights]),
            np.concatenate([self.labels, other.labels]),
        )

    def norm_sq(self) -> float:
        return inner(self, self).real


def gram(bra: CoherentSuperposition, ket: CoherentSuperposition) -> np.ndarray:
    """Matrix of term-wise two-mode overlaps <bra_j|ket_k>."""
    lb, lk = bra.labels, ket.labels
    return overlap(lb[:, None, 0], lk[None, :, 0]) * overlap(lb[:, None, 1], lk[None, :, 1])


def inner(bra: CoherentSuperposition, ket: CoherentSuperposition) -> complex:
    """<bra|ket>, antilinear in the first argument."""
    return complex(np.conj(bra.weights) @ gram(bra, ket) @ ket.weights)


def normalize(s: CoherentSuperposition) -> CoherentSuperposition:
    n2 = inner(s, s).real
    if not n2 > 1e-300:
        raise DegenerateStateError(f"superposition has vanishing norm ({n2:g})")
    return s.scaled(1.0 / np.sqrt(n2))


def prune(
    s: CoherentSuperposition,
    tol: float = LABEL_MERGE_TOL,
    weight_tol: float = WEIGHT_DROP_TOL,
) -> CoherentSuperposition:
    """Merge terms whose labels agree to within ``tol`` and drop tiny weights.

    Labels are bucketed on a grid of pitch ``tol``; terms sharing a bucket
    are summed onto the first representative.
    """
    if tol < 0 or weight_tol < 0:
        raise ValueError("tolerances must be non-negative")
    if tol > 0:
        flat = np.stack(
            [s.labels[:, 0].real, s.labels[:, 0].imag, s.labels[:, 1].real, s.labels[:, 1].imag],
            axis=1,
        )
        keys = np.round(flat / tol).astype(np.int64)
        _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
        inverse = inverse.ravel()
        weights = np.zeros(first.shape[0], dtype=complex)
        np.add.at(weights, inverse, s.weights)
        labels = s.labels[first]
    else:
        weights, labels = s.weights, s.labels
    keep = np.abs(weights) >= weight_tol
    if not np.any(keep):
        # keep the largest surviving term so the result is still a valid state
        keep = np.zeros_like(keep)
        keep[np.argmax(np.abs(weights))] = True
    return CoherentSuperposition(weights[keep], labels[keep])


@dataclass(frozen=True)
class DensityEnsemble:
    """Convex mixture sum_c p_c |psi_c><psi_c| of coherent superpositions."""

    components: tuple[tuple[float, CoherentSuperposition], ...]

    def __post_init__(self):
        comps = tuple((float(p), s) for p, s in self.components)
        if not comps:
            raise ValueError("empty ensemble")
        probs = np.array([p for p, _ in comps])
        if np.any(probs < 0) or np.any(probs > 1):
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {probs.sum()!r}, not 1")
        for _, s in comps:
            if abs(s.norm_sq() - 1.0) > 1e-10:
                raise ValueError("ensemble component is not normalized")
        object.__setattr__(self, "components", comps)

    @classmethod
    def pure(cls, s: CoherentSuperposition) -> "DensityEnsemble":
        return cls(((1.0, s),))

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)
