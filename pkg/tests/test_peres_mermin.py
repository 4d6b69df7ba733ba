import itertools

import numpy as np
import pytest

from cvks.coherent import CoherentSuperposition, DensityEnsemble
from cvks.peres_mermin import (
    NCHV_BOUND,
    QUANTUM_MAX,
    GammaKind,
    ImaginaryResidueError,
    PauliKind,
    all_gammas,
    build_gamma,
    build_square,
    gamma_expectation,
    ks_function,
)
from cvks.werner import ecs_state


def random_two_qubit_density(rng):
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def test_square_entries():
    sq = build_square()
    assert str(sq[2][2]) == "YY"
    assert str(sq[0][0]) == "ZI"
    assert str(sq[1][2]) == "XX"


def test_gamma_factors():
    assert [str(f) for f in build_gamma("R", 3).factors] == ["ZX", "XZ", "YY"]
    assert [str(f) for f in build_gamma(GammaKind.COLUMN, 3).factors] == ["ZZ", "XX", "YY"]
    assert [str(f) for f in build_gamma("R", 2).factors] == ["IX", "XI", "XX"]
    with pytest.raises(ValueError):
        build_gamma("R", 4)


def test_pauli_angle_map():
    assert PauliKind.X.angles == (0.0, 0.0)
    assert PauliKind.Y.angles == (0.0, -np.pi / 2)
    assert PauliKind.Z.angles == (np.pi, 0.0)
    assert PauliKind.I.angles is None


def test_factors_within_a_context_commute():
    for g in all_gammas():
        for a, b in itertools.combinations(g.factors, 2):
            assert np.allclose(a.matrix @ b.matrix, b.matrix @ a.matrix)


def test_products_are_plus_minus_identity():
    for g in all_gammas():
        expected = -np.eye(4) if g.name == "C3" else np.eye(4)
        assert np.array_equal(g.matrix, expected)
    total = np.eye(4)
    for g in all_gammas():
        total = total @ g.matrix
    assert np.array_equal(total, -np.eye(4))


def test_bounds_exposed():
    assert NCHV_BOUND == 4.0 and QUANTUM_MAX == 6.0


def test_ideal_ks_is_six_on_random_states(rng):
    for _ in range(100):
        rho = random_two_qubit_density(rng)
        assert abs(ks_function(rho) - 6) < 1e-12
        assert abs(gamma_expectation(rho, build_gamma("R", 1)) - 1) < 1e-12
        assert abs(gamma_expectation(rho, build_gamma("C", 3)) + 1) < 1e-12


def test_imaginary_residue_is_policed():
    # a non-Hermitian "density matrix" produces a complex trace
    bad = np.diag([0.25 + 1e-3j, 0.25, 0.25, 0.25])
    with pytest.raises(ImaginaryResidueError):
        gamma_expectation(bad, build_gamma("R", 1))


def test_cv_gate_r2_is_one_for_ecs():
    ecs = ecs_state(0.5, 3.0)
    val = gamma_expectation(DensityEnsemble.pure(ecs), build_gamma("R", 2), "cv-gate", alpha=3.0)
    assert abs(val - 1) < 1e-6


def test_cv_realizations_stay_below_six():
    for al in (0.6, 1.0, 2.0, 3.0):
        for realization in ("cv-gate", "cv-closed-form"):
            s = DensityEnsemble.pure(ecs_state(0.5, al))
            assert ks_function(s, realization, alpha=al) <= 6 + 1e-6


def test_cv_gate_needs_alpha():
    with pytest.raises(ValueError):
        ks_function(CoherentSuperposition.ket(1, 1), "cv-gate")
