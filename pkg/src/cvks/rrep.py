"""Glauber R-representation and the state-independent KS value.

For a density operator on a truncated Fock space,

    R(a*, b) = <a|rho|b> exp((|a|^2 + |b|^2)/2) = sum_nm conj(p_n(a)) rho_nm p_m(b),

with p_n(z) = z^n / sqrt(n!): the Gaussian factors of the coherent kets
cancel exactly, which is what makes R entire.  The two-mode function is
the same contraction on both modes.

Because every pseudo-spin Peres-Mermin product is +-identity at even
truncation, Tr(rho Gamma) is +-1 for every valid rho and the KS value is 6.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .peres_mermin import GammaProduct, all_gammas
from .pseudospin import _check_dim, _operator

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_FLOOR = -1e-10


class InvalidDensityError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DensityMatrixFock:
    """Density matrix on ``modes`` modes with cutoff ``D`` per mode."""

    matrix: np.ndarray
    D: int
    modes: int = 2

    def __post_init__(self):
        if self.modes not in (1, 2):
            raise InvalidDensityError("modes must be 1 or 2")
        if self.modes == 2 and (self.D < 2 or self.D % 2):
            raise InvalidDensityError(f"two-mode cutoff must be even, got {self.D}")
        if self.D < 1:
            raise InvalidDensityError("D must be positive")
        m = np.array(self.matrix, dtype=complex, copy=True)
        n = self.D**self.modes
        if m.shape != (n, n):
            raise InvalidDensityError(f"expected a {n}x{n} matrix, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise InvalidDensityError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > TRACE_TOL:
            raise InvalidDensityError(f"trace {np.trace(m).real!r} differs from 1")
        if np.linalg.eigvalsh(m).min() < PSD_FLOOR:
            raise InvalidDensityError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def tensor(self) -> np.ndarray:
        """rho[n1, n2, m1, m2] view of a two-mode matrix."""
        return self.matrix.reshape((self.D,) * (2 * self.modes))


def monomials(z, D: int) -> np.ndarray:
    """p_n(z) = z^n / sqrt(n!) for n < D; shape (D,) + z.shape."""
    z = np.asarray(z, dtype=complex)
    out = np.empty((D,) + z.shape, dtype=complex)
    out[0] = 1.0
    for n in range(1, D):
        out[n] = out[n - 1] * z / math.sqrt(n)
    return out


def r_function_single(rho: DensityMatrixFock, alpha, beta):
    """R(alpha*, beta); broadcasts over array arguments."""
    if rho.modes != 1:
        raise ValueError("single-mode R function needs a single-mode rho")
    pa = monomials(alpha, rho.D)
    pb = monomials(beta, rho.D)
    return np.einsum("n...,nm,m...->...", pa.conj(), rho.matrix, pb)


def r_function_two_mode(rho: DensityMatrixFock, alpha1, alpha2, beta1, beta2):
    """R(alpha1*, alpha2*, beta1, beta2); broadcasts over array arguments."""
    if rho.modes != 2:
        raise ValueError("two-mode R function needs a two-mode rho")
    D = rho.D
    a1, a2 = monomials(alpha1, D).conj(), monomials(alpha2, D).conj()
    b1, b2 = monomials(beta1, D), monomials(beta2, D)
    return np.einsum("i...,j...,ijkl,k...,l...->...", a1, a2, rho.tensor, b1, b2)


@dataclass(frozen=True)
class PolarGrid:
    """Gauss-Legendre radius x uniform angle product rule on a disc."""

    radial_nodes: int = 96
    angular_nodes: int = 96
    extent: float = 6.0

    def points(self, support: float):
        radius = self.extent + support
        t, w = np.polynomial.legendre.leggauss(self.radial_nodes)
        r = 0.5 * radius * (t + 1)
        wr = 0.5 * radius * w * r
        phi = 2 * np.pi * np.arange(self.angular_nodes) / self.angular_nodes
        z = (r[:, None] * np.exp(1j * phi[None, :])).ravel()
        wz = (wr[:, None] * np.full(self.angular_nodes, 2 * np.pi / self.angular_nodes)).ravel()
        return z, wz


def _grid_for(D: int, grid: PolarGrid | None) -> PolarGrid:
    grid = grid or PolarGrid()
    # the angular rule must resolve phase winding up to D - 1
    return PolarGrid(grid.radial_nodes, max(grid.angular_nodes, 2 * D), grid.extent)


def _mode_gram(D: int, grid: PolarGrid) -> np.ndarray:
    """M[n, m] = pi^-1 int conj(p_n) p_m exp(-|b|^2) d^2 b on the grid."""
    z, w = grid.points(math.sqrt(D))
    p = monomials(z, D) * np.sqrt(w * np.exp(-np.abs(z) ** 2) / np.pi)
    return p.conj() @ p.T


def normalization_integral(rho: DensityMatrixFock, grid: PolarGrid | None = None) -> float:
    """pi^-modes int R(b*, b) exp(-|b|^2) d^2 b over every mode.

    The single-mode integral evaluates R literally on the grid.  For two
    modes the product rule is contracted one mode at a time, which equals
    the tensor-product grid sum without materialising it.
    """
    grid = _grid_for(rho.D, grid)
    if rho.modes == 1:
        z, w = grid.points(math.sqrt(rho.D))
        vals = r_function_single(rho, z, z) * np.exp(-np.abs(z) ** 2)
        return float(np.real(np.sum(w * vals)) / np.pi)
    m = _mode_gram(rho.D, grid)
    return float(np.real(np.einsum("ijkl,ik,jl->", rho.tensor, m, m)))


def reconstruct_single(rho: DensityMatrixFock, grid: PolarGrid | None = None) -> np.ndarray:
    """Rebuild rho_nm from R sampled on a grid (round-trip check, D <= 4).

    rho = pi^-2 int |a> R(a*, b) <b| exp(-(|a|^2 + |b|^2)/2) d^2a d^2b.
    """
    if rho.modes != 1:
        raise ValueError("round trip is implemented for single-mode rho")
    if rho.D > 4:
        raise ValueError("reconstruction is ill-conditioned; use D <= 4")
    grid = _grid_for(rho.D, grid or PolarGrid(48, 32))
    z, w = grid.points(math.sqrt(rho.D))
    r_grid = r_function_single(rho, z[:, None], z[None, :])
    # <n|a> = exp(-|a|^2/2) p_n(a), so each side carries exp(-|a|^2)
    g = w * np.exp(-np.abs(z) ** 2)
    p = monomials(z, rho.D)
    return (p * g) @ r_grid @ (p.conj() * g).T / np.pi**2


def gamma_matrix_pseudospin(g: GammaProduct, D: int) -> np.ndarray:
    """Gamma as a D^2 x D^2 matrix with pseudo-spins on each mode."""
    D = _check_dim(D)
    mats = [np.kron(_operator(f.mode1, D), _operator(f.mode2, D)) for f in g.factors]
    return reduce(np.matmul, mats)


def ks_any_state(rho: DensityMatrixFock) -> float:
    """sum_i sign_i Tr(rho Gamma_i) with pseudo-spin products."""
    if rho.modes != 2:
        raise ValueError("the KS value needs a two-mode rho")
    total = 0.0
    for g in all_gammas():
        total += g.ks_sign * np.real(np.trace(rho.matrix @ gamma_matrix_pseudospin(g, rho.D)))
    return float(total)


def random_density(D: int, rank: int, seed, modes: int = 2) -> DensityMatrixFock:
    """Seeded Wishart-type density matrix G G^dagger / Tr with complex normal G."""
    n = D**modes
    if not 1 <= rank <= n:
        raise ValueError(f"rank must lie in [1, {n}]")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T) / np.trace(m).real
    return DensityMatrixFock(m, D, modes)


def thermal_density(nbar: float, D: int) -> DensityMatrixFock:
    """Single-mode thermal state truncated at D and renormalised."""
    q = nbar / (1 + nbar)
    diag = q ** np.arange(D)
    return DensityMatrixFock(np.diag(diag / diag.sum()), D, modes=1)
