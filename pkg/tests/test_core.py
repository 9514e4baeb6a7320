import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from slhnet import (
    ArityError,
    SingularLoopError,
    SlhModel,
    beamsplitter,
    check_unitary,
    coherent_drive,
    concat,
    feedback,
    identity,
    phase_shift,
    series,
)


def test_model_coerces_and_freezes():
    m = SlhModel([[1.0]], [0.0], 0.0)
    assert m.scattering.dtype == np.complex128
    assert m.ports == 1
    with pytest.raises(ValueError):
        m.scattering[0, 0] = 2.0
    with pytest.raises(ValueError):
        m.coupling[0] = 1.0


def test_model_shape_validation():
    with pytest.raises(ArityError):
        SlhModel(np.ones((2, 3)), np.zeros(2), 0.0)
    with pytest.raises(ArityError):
        SlhModel(np.eye(2), np.zeros(3), 0.0)


def test_identity_is_series_unit():
    g = beamsplitter(0.3)
    for composed in (series(identity(2), g), series(g, identity(2))):
        assert_allclose(composed.scattering, g.scattering, atol=1e-15)
        assert_allclose(composed.coupling, g.coupling, atol=1e-15)
    with pytest.raises(ArityError):
        identity(0)


def test_series_multiplies_scattering():
    rng = np.random.default_rng(7)
    for _ in range(20):
        t1, t2 = rng.uniform(-math.pi, math.pi, size=2)
        g = series(beamsplitter(t2), beamsplitter(t1))
        assert_allclose(
            g.scattering,
            beamsplitter(t2).scattering @ beamsplitter(t1).scattering,
            atol=1e-15,
        )
    with pytest.raises(ArityError):
        series(identity(2), identity(3))


def test_series_hamiltonian_cross_term():
    # both stages driven: H picks up Im(L2^dag S2 L1)
    a, b = 0.7 + 0.2j, -0.1 + 0.9j
    g = series(coherent_drive([b]), coherent_drive([a]))
    assert_allclose(g.coupling, [a + b], atol=1e-15)
    assert_allclose(g.hamiltonian, (np.conj(b) * a).imag, atol=1e-15)


def test_concat_blocks():
    g = concat(phase_shift(0.4), beamsplitter(0.2))
    assert g.ports == 3
    assert_allclose(g.scattering[0, 0], np.exp(0.4j), atol=1e-15)
    assert_allclose(g.scattering[1:, 1:], beamsplitter(0.2).scattering, atol=1e-15)
    assert np.all(g.scattering[0, 1:] == 0) and np.all(g.scattering[1:, 0] == 0)
    d = concat(coherent_drive([1.0]), coherent_drive([2.0, 3.0]))
    assert_allclose(d.coupling, [1.0, 2.0, 3.0], atol=1e-15)


def test_feedback_of_any_beamsplitter_is_minus_one():
    # the (1,1) loop resums to c - (1 - c^2)/(1 - c) = -1 independent of theta
    for theta in (0.2, math.pi / 4, 1.1, -0.8):
        closed = feedback(beamsplitter(theta), 1, 1)
        assert closed.ports == 1
        assert_allclose(closed.scattering, [[-1.0]], atol=1e-12)


def test_feedback_through_swap_is_a_wire():
    swap = SlhModel(np.array([[0, 1], [1, 0]]), np.zeros(2), 0.0)
    closed = feedback(swap, 1, 1)
    assert_allclose(closed.scattering, [[1.0]], atol=1e-15)


def test_feedback_matches_direct_loop_solve():
    """Rank-one elimination vs solving the loop equation from scratch."""
    rng = np.random.default_rng(11)
    for _ in range(25):
        n = int(rng.integers(2, 6))
        q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
        coupling = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        model = SlhModel(q, coupling, 0.0)
        k = int(rng.integers(1, n + 1))
        l = int(rng.integers(1, n + 1))
        if abs(1.0 - q[k - 1, l - 1]) <= 1e-9:
            continue
        closed = feedback(model, k, l)

        # no external drive: out_i = L_i + S_il x with x = out_k solved directly
        ki, li = k - 1, l - 1
        x = coupling[ki] / (1.0 - q[ki, li])
        direct = coupling + q[:, li] * x
        keep = np.arange(n) != ki
        assert_allclose(closed.coupling, direct[keep], atol=1e-12)


def test_feedback_singular_loop_payload():
    with pytest.raises(SingularLoopError) as info:
        feedback(identity(2), 1, 1)
    assert info.value.k == 1 and info.value.l == 1
    assert info.value.s_kl == 1.0 + 0.0j
    with pytest.raises(ArityError):
        feedback(identity(2), 3, 1)
    with pytest.raises(ArityError):
        feedback(identity(1), 1, 1)


def test_check_unitary():
    assert check_unitary(np.eye(3), 0.0)
    assert not check_unitary(np.eye(3) * 1.1, 1e-10)
    with pytest.raises(ArityError):
        check_unitary(np.ones((2, 3)), 1e-10)
