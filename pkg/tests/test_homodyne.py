import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from cvks.coherent import CoherentSuperposition
from cvks.gates import RotationSpec, apply_rotation
from cvks.homodyne import (
    CLASSICAL_BOUND,
    TSIRELSON_BOUND,
    ChshAngles,
    QuadratureConvergenceError,
    QuadratureGridSpec,
    chsh_maximize,
    chsh_value,
    correlation_E,
    x_overlap,
)
from cvks.werner import WernerParams, build_werner

angle = st.floats(0, np.pi)


def rotated_single_mode(g, theta, alpha):
    return apply_rotation(RotationSpec(theta, 0.0, alpha), CoherentSuperposition.ket(g, 0))


def psi(s, x):
    return sum(w * x_overlap(x, g) for w, g in zip(s.weights, s.labels[:, 0]))


def quad_sign_expectation(s):
    f = lambda x: abs(psi(s, x)) ** 2
    return quad(f, 0, 40, limit=200, epsabs=1e-13)[0] - quad(f, -40, 0, limit=200, epsabs=1e-13)[0]


def sample_quadrature(s, n, rng, chunk=2_000_000):
    """Rejection sampling from |psi(x)|^2.

    Cauchy-Schwarz gives |psi|^2 <= n sum_k |w_k|^2 N(x; 2 Re g_k, 1), a
    Gaussian mixture that is easy to sample.
    """
    w = np.abs(s.weights) ** 2
    centers = 2 * s.labels[:, 0].real
    out = []
    while sum(len(o) for o in out) < n:
        k = rng.choice(len(w), size=chunk, p=w / w.sum())
        x = rng.normal(centers[k], 1.0)
        q = (w[None, :] * np.exp(-0.5 * (x[:, None] - centers[None, :]) ** 2)).sum(1) / np.sqrt(2 * np.pi)
        target = np.abs(psi(s, x)) ** 2
        out.append(x[rng.uniform(size=chunk) * len(s) * q < target])
    return np.concatenate(out)[:n]


def test_x_overlap_is_normalised():
    val = quad(lambda x: abs(x_overlap(x, 1.3)) ** 2, -30, 30, epsabs=1e-13)[0]
    assert abs(val - 1) < 1e-8
    val = quad(lambda x: abs(x_overlap(x, 0.4 - 0.9j)) ** 2, -30, 30, epsabs=1e-13)[0]
    assert abs(val - 1) < 1e-8


def test_x_overlap_peak_position():
    xs = np.linspace(-2, 8, 10001)
    assert abs(xs[np.argmax(np.abs(x_overlap(xs, 1.5)))] - 3.0) < 1e-3


def test_x_overlap_is_consistent_with_coherent_overlaps():
    from cvks.coherent import overlap

    a, b = 0.7 + 0.4j, -0.2 + 1.1j
    re = quad(lambda x: (np.conj(x_overlap(x, a)) * x_overlap(x, b)).real, -30, 30, epsabs=1e-13)[0]
    im = quad(lambda x: (np.conj(x_overlap(x, a)) * x_overlap(x, b)).imag, -30, 30, epsabs=1e-13)[0]
    assert abs(complex(re, im) - overlap(a, b)) < 1e-10


def test_vacuum_correlation_vanishes():
    vac = CoherentSuperposition.ket(0, 0)
    assert abs(correlation_E(vac, 0.0, 0.0, 1.0)) < 1e-10


@settings(max_examples=15)
@given(angle, angle, st.floats(0.5, 2.5))
def test_product_state_factorises_against_quad(ta, tb, al):
    g1, g2 = al, -0.8 * al
    e = correlation_E(CoherentSuperposition.ket(g1, g2), ta, tb, al)
    e1 = quad_sign_expectation(rotated_single_mode(g1, ta, al))
    e2 = quad_sign_expectation(rotated_single_mode(g2, tb, al))
    assert abs(e - e1 * e2) < 1e-8


def test_sigma_z_correlation_against_monte_carlo():
    al = 2.0
    e = correlation_E(CoherentSuperposition.ket(al, al), np.pi, np.pi, al)
    rng = np.random.default_rng(11)
    x = sample_quadrature(rotated_single_mode(al, np.pi, al), 10_000_000, rng)
    e1 = np.mean(np.sign(x))
    assert abs(e - e1**2) < 1e-3


@settings(max_examples=15)
@given(angle, angle, st.floats(0, 1), st.floats(0.6, 2.5))
def test_correlation_is_bounded(ta, tb, p, al):
    e = correlation_E(build_werner(WernerParams(0.5, p, al)), ta, tb, al)
    assert abs(e) <= 1 + 1e-9


@settings(max_examples=10)
@given(angle, angle, angle, angle)
def test_chsh_within_tsirelson(a, b, c, d):
    v = chsh_value(build_werner(WernerParams(0.5, 1.0, 2.5)), ChshAngles(a, b, c, d), 2.5)
    assert abs(v) <= TSIRELSON_BOUND + 1e-3


def test_degenerate_angles():
    st_ = build_werner(WernerParams(0.5, 1.0, 2.0))
    v = chsh_value(st_, ChshAngles(1.0, 1.0, 1.0, 1.0), 2.0)
    assert abs(v - 2 * correlation_E(st_, 1.0, 1.0, 2.0)) < 1e-12
    assert v <= CLASSICAL_BOUND + 1e-12


def test_bounds():
    assert CLASSICAL_BOUND == 2.0
    assert abs(TSIRELSON_BOUND - 2.8284271247461903) < 1e-15


def test_quadrature_gate_raises():
    coarse = QuadratureGridSpec(x_max=200.0, nodes_per_axis=64, max_doublings=1)
    with pytest.raises(QuadratureConvergenceError):
        correlation_E(CoherentSuperposition.ket(1.0, 1.0), 0.3, 0.3, 1.0, coarse)


def test_node_doubling_is_stable_at_defaults():
    st_ = build_werner(WernerParams(0.5, 0.8, 2.5))
    grid = QuadratureGridSpec()
    a = correlation_E(st_, 0.7, 2.1, 2.5, grid, check=False)
    b = correlation_E(st_, 0.7, 2.1, 2.5, QuadratureGridSpec(nodes_per_axis=1024), check=False)
    assert abs(a - b) < 1e-6


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        QuadratureGridSpec(nodes_per_axis=32)
    with pytest.raises(ValueError):
        ChshAngles(0.0, np.nan, 0.0, 0.0)


def test_maximize_is_seeded():
    st_ = build_werner(WernerParams(0.5, 1.0, 2.5))
    r1 = chsh_maximize(st_, 2.5, restarts=2, seed=3, max_iter=60)
    r2 = chsh_maximize(st_, 2.5, restarts=2, seed=3, max_iter=60, threads=1)
    assert r1[0] == r2[0] and np.array_equal(r1[1].as_array(), r2[1].as_array())


def test_no_violation_for_separable_mixture():
    best, _ = chsh_maximize(build_werner(WernerParams(0.5, 0.0, 2.0)), 2.0, restarts=4, seed=0)
    assert best <= CLASSICAL_BOUND + 5e-3


def test_restarts_validated():
    with pytest.raises(ValueError):
        chsh_maximize(CoherentSuperposition.ket(1, 1), 1.0, restarts=0)
