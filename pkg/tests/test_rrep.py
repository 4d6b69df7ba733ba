import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cvks.coherent import overlap
from cvks.peres_mermin import all_gammas
from cvks.pseudospin import coherent_fock
from cvks.rrep import (
    DensityMatrixFock,
    InvalidDensityError,
    gamma_matrix_pseudospin,
    ks_any_state,
    normalization_integral,
    r_function_single,
    r_function_two_mode,
    random_density,
    reconstruct_single,
    thermal_density,
)

small = st.floats(-1.5, 1.5)
points = st.builds(complex, small, small)


def projector(v):
    return np.outer(v, v.conj())


def test_vacuum_r_is_one():
    vac = DensityMatrixFock(projector(np.eye(6)[0]), 6, modes=1)
    z = np.array([0.3, 1 + 1j, -2j])
    assert np.allclose(r_function_single(vac, z, z[::-1]), 1)
    vac2 = DensityMatrixFock(projector(np.eye(16)[0]), 4)
    assert abs(r_function_two_mode(vac2, 1, 2j, -1, 0.5) - 1) < 1e-15


def test_coherent_projector_r_function():
    D = 40
    rho = DensityMatrixFock(projector(coherent_fock(1.0, D, renormalize=True)), D, modes=1)
    for b in (0.0, 0.5 + 0.3j, 1.0, 2 - 1j):
        got = r_function_single(rho, b, b) * math.exp(-abs(b) ** 2)
        assert abs(got - math.exp(-abs(1 - b) ** 2)) < 1e-10


@given(points, points)
def test_r_matches_literal_definition(a, b):
    rho = random_density(8, 3, seed=1, modes=1)
    literal = np.vdot(_fock(a), rho.matrix @ _fock(b))
    literal *= math.exp((abs(a) ** 2 + abs(b) ** 2) / 2)
    assert abs(r_function_single(rho, a, b) - literal) < 1e-10 * max(1, abs(literal))


def _fock(z, D=8):
    # coherent amplitudes restricted to the support of rho (no tail check needed)
    v = np.empty(D, dtype=complex)
    v[0] = math.exp(-abs(z) ** 2 / 2)
    for n in range(1, D):
        v[n] = v[n - 1] * z / math.sqrt(n)
    return v


@given(points, points)
def test_r_conjugate_symmetry(a, b):
    rho = random_density(6, 4, seed=2, modes=1)
    assert abs(r_function_single(rho, a, b) - np.conj(r_function_single(rho, b, a))) < 1e-10


def test_thermal_normalisation():
    assert abs(normalization_integral(thermal_density(0.5, 40)) - 1) < 1e-4


def test_two_mode_normalisation():
    assert abs(normalization_integral(random_density(8, 3, seed=4)) - 1) < 1e-3


def test_two_mode_normalisation_matches_literal_grid():
    # brute-force tensor grid with the literal two-mode R on a coarse rule
    from cvks.rrep import PolarGrid

    rho = random_density(2, 2, seed=9)
    z, w = PolarGrid(24, 8, 6.0).points(math.sqrt(2))
    b1, b2 = np.meshgrid(z, z, indexing="ij")
    w2 = np.outer(w, w)
    vals = r_function_two_mode(rho, b1, b2, b1, b2) * np.exp(-np.abs(b1) ** 2 - np.abs(b2) ** 2)
    brute = np.real(np.sum(w2 * vals)) / np.pi**2
    assert abs(brute - normalization_integral(rho, PolarGrid(24, 8, 6.0))) < 1e-10


def test_factorised_r_function():
    ra, rb = random_density(4, 2, seed=5, modes=1), random_density(4, 3, seed=6, modes=1)
    rho = DensityMatrixFock(np.kron(ra.matrix, rb.matrix), 4)
    a1, a2, b1, b2 = 0.3 + 1j, -0.5, 1.2j, 0.7 - 0.2j
    lhs = r_function_two_mode(rho, a1, a2, b1, b2)
    rhs = r_function_single(ra, a1, b1) * r_function_single(rb, a2, b2)
    assert abs(lhs - rhs) < 1e-12


def test_reconstruction_round_trip():
    rho = random_density(4, 2, seed=7, modes=1)
    assert np.max(np.abs(reconstruct_single(rho) - rho.matrix)) < 1e-8
    with pytest.raises(ValueError):
        reconstruct_single(random_density(6, 2, seed=7, modes=1))


def test_gamma_products_are_identity():
    for D in (2, 6, 8):
        eye = np.eye(D * D)
        for g in all_gammas():
            expected = -eye if g.name == "C3" else eye
            assert np.array_equal(gamma_matrix_pseudospin(g, D), expected)


def test_ks_is_six_for_random_states():
    for seed in range(100):
        rho = random_density(6, 1 + seed % 36, seed)
        assert abs(ks_any_state(rho) - 6) < 1e-8


def test_ks_maximally_mixed_and_pure():
    assert abs(ks_any_state(DensityMatrixFock(np.eye(64) / 64, 8)) - 6) < 1e-10
    assert abs(ks_any_state(random_density(6, 1, seed=99)) - 6) < 1e-10


def test_random_density_properties():
    r1 = random_density(4, 1, seed=3)
    assert abs(np.trace(r1.matrix @ r1.matrix).real - 1) < 1e-12
    assert np.array_equal(random_density(4, 5, seed=3).matrix, random_density(4, 5, seed=3).matrix)
    with pytest.raises(ValueError):
        random_density(2, 5, seed=0)


def test_full_rank_purity():
    D = 6
    purities = [np.trace(random_density(D, D * D, seed=s).matrix @ random_density(D, D * D, seed=s).matrix).real for s in range(50)]
    # Wishart expectation of Tr(rho^2) for square complex G is 2n/(n^2+1) ~ 2/n
    n = D * D
    assert abs(np.mean(purities) / (2 * n / (n * n + 1)) - 1) < 0.2


def test_density_validation():
    with pytest.raises(InvalidDensityError):
        DensityMatrixFock(np.eye(4), 2)  # trace 4
    with pytest.raises(InvalidDensityError):
        DensityMatrixFock(np.diag([1.5, -0.5, 0, 0]), 2)
    with pytest.raises(InvalidDensityError):
        DensityMatrixFock(np.eye(9) / 9, 3)  # odd cutoff
    m = np.eye(4, dtype=complex) / 4
    m[0, 1] = 0.1j
    with pytest.raises(InvalidDensityError):
        DensityMatrixFock(m, 2)
