"""CV Werner states built on entangled coherent states and their KS function.

    rho_w(a, p) = p |ECS(a)><ECS(a)| + (1-p)/4 sum_{s1,s2=+-} |s1 a, s2 a><s1 a, s2 a|
    |ECS(a)>    = N (sqrt(a) |alpha, alpha> + sqrt(1-a) |-alpha, -alpha>)
    N           = [1 + 2 sqrt(a(1-a)) exp(-4|alpha|^2)]^(-1/2)

Two evaluation conventions are provided:

``published``  rotations applied by closed-form substitution (see
               :func:`cvks.gates.apply_rotation`) and the ECS block weighted
               by N rather than N^2.  This is the combination whose
               KS values coincide with the published closed forms.
``exact``      fixed reference amplitude alpha in every rotation and the
               properly normalised ECS, i.e. ks_function(build_werner(w)).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closed_forms import READINGS, ClosedFormCase, closed_form_ks
from .coherent import CoherentSuperposition, DensityEnsemble, inner
from .peres_mermin import all_gammas, apply_gamma, ks_combination
from .records import SweepRecord, parallel_map, run_metadata


@dataclass(frozen=True)
class WernerParams:
    a: float
    p: float
    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.a <= 1.0:
            raise ValueError(f"a must lie in [0, 1], got {self.a}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @property
    def ecs_norm(self) -> float:
        return float((1 + 2 * np.sqrt(self.a * (1 - self.a)) * np.exp(-4 * abs(self.alpha) ** 2)) ** -0.5)


@dataclass(frozen=True)
class Convention:
    realization: str
    ecs_norm_power: int


CONVENTIONS = {
    "published": Convention("cv-closed-form", 1),
    "exact": Convention("cv-gate", 2),
}


def _convention(c) -> Convention:
    if isinstance(c, Convention):
        return c
    try:
        return CONVENTIONS[c]
    except KeyError:
        raise ValueError(f"unknown convention {c!r}; choose from {sorted(CONVENTIONS)}") from None


def ecs_state(a: float, alpha: float) -> CoherentSuperposition:
    n = WernerParams(a, 1.0, alpha).ecs_norm
    return CoherentSuperposition(
        np.array([n * np.sqrt(a), n * np.sqrt(1 - a)], dtype=complex),
        np.array([[alpha, alpha], [-alpha, -alpha]], dtype=complex),
    )


def build_werner(w: WernerParams) -> DensityEnsemble:
    """Five-component ensemble; zero-probability components are kept."""
    al = w.alpha
    comps = [(w.p, ecs_state(w.a, al))]
    for s1 in (1, -1):
        for s2 in (1, -1):
            comps.append(((1 - w.p) / 4, CoherentSuperposition.ket(s1 * al, s2 * al)))
    return DensityEnsemble(tuple(comps))


def werner_correlators_complex(w: WernerParams, convention="published") -> np.ndarray:
    """Complex <R1..C3> assembled from matrix elements between |+-alpha, +-alpha>."""
    conv = _convention(convention)
    substitute = conv.realization == "cv-closed-form"
    al = w.alpha
    signs = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
    kets = {s: CoherentSuperposition.ket(s[0] * al, s[1] * al) for s in signs}
    pp, mm = (1, 1), (-1, -1)
    n = w.ecs_norm ** conv.ecs_norm_power
    ca, cb = w.a, 1 - w.a
    cross = np.sqrt(w.a * (1 - w.a))
    out = []
    for g in all_gammas():
        images = {s: apply_gamma(g, k, alpha=al, substitute=substitute) for s, k in kets.items()}
        diag = {s: inner(kets[s], images[s]) for s in signs}
        mixed = sum(diag.values()) / 4
        ecs = n * (
            ca * diag[pp]
            + cross * (inner(kets[pp], images[mm]) + inner(kets[mm], images[pp]))
            + cb * diag[mm]
        )
        out.append(w.p * ecs + (1 - w.p) * mixed)
    return np.array(out)


def werner_correlators(w: WernerParams, convention="published") -> np.ndarray:
    return werner_correlators_complex(w, convention).real


def werner_ks(w: WernerParams, convention="published") -> float:
    return ks_combination(werner_correlators(w, convention))


def werner_sweep(alpha_grid, a: float, p: float, convention="published", threads=None, seed=None):
    """One :class:`SweepRecord` per alpha, in grid order.

    When (p, a) is one of the closed-form cases the record also carries the
    oracle value and the absolute deviation from it.
    """
    grid = np.asarray(alpha_grid, dtype=float).ravel()
    if grid.size == 0:
        raise ValueError("empty alpha grid")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("alpha grid must be positive and strictly increasing")
    case = ClosedFormCase.match(p, a)
    meta = run_metadata(seed=seed)
    meta["convention"] = convention if isinstance(convention, str) else repr(convention)
    if case is not None:
        meta["closed_form_reading"] = READINGS[case]

    def point(al):
        corr = werner_correlators(WernerParams(a, p, float(al)), convention)
        ks = ks_combination(corr)
        oracle = err = None
        if case is not None:
            oracle = closed_form_ks(case, float(al))
            err = abs(ks - oracle)
        return SweepRecord(float(al), ks, tuple(float(c) for c in corr), oracle, err, dict(meta))

    return parallel_map(point, grid, threads)
