from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from infoorder import arith
from infoorder.core import (
    Channel,
    InfoStructure,
    ProbVector,
    apply_garbling,
    bsc,
    compose,
    make_cond_independent,
    marginal,
    projection_kernel,
    quantize_channel,
    reduce_independent,
    refine_signal,
)
from infoorder.errors import (
    AbsoluteContinuityError,
    DegenerateDensityError,
    DimensionError,
    ValidationError,
)
from infoorder.instances import (
    GUESS_STATES,
    gaussian_bump_density,
    guessing_channel,
    guessing_mu1,
    kappa_tilde,
    random_channel,
    random_structure,
)


def test_probvector_validation():
    with pytest.raises(ValidationError):
        ProbVector((0, 1), arith.asarray(["1/2", "1/3"]))
    with pytest.raises(ValidationError):
        ProbVector((0, 1), arith.asarray(["3/2", "-1/2"]))
    with pytest.raises(ValidationError):
        ProbVector((0, 0), arith.asarray(["1/2", "1/2"]))


def test_channel_rows_must_be_stochastic():
    with pytest.raises(ValidationError):
        Channel((0, 1), (0, 1), arith.asarray([["1/2", "1/2"], ["1/2", "1/3"]]))


def test_cond_independent_uniform_guessing():
    zeta = ProbVector.uniform(GUESS_STATES)
    q = guessing_channel("9/10")
    mu = make_cond_independent(zeta, q, q)
    assert mu.cond_independent
    pair = marginal(mu, 1)
    expected = zeta.mass[:, None] * q.matrix
    assert (pair.table == expected).all()


def test_cond_independent_point_prior():
    zeta = ProbVector.point((0, 1, 2), 1)
    q1 = Channel.symmetric((0, 1, 2), Fraction(1, 2))
    q2 = Channel.symmetric((0, 1, 2), Fraction(2, 3))
    mu = make_cond_independent(zeta, q1, q2)
    assert (mu.joint[[0, 2]] == 0).all()
    assert (mu.joint[1] == np.outer(q1.matrix[1], q2.matrix[1])).all()


def test_cond_independent_identity_channels():
    zeta = ProbVector.uniform((0, 1))
    ident = Channel.identity((0, 1))
    mu = make_cond_independent(zeta, ident, ident)
    for x in range(2):
        for a in range(2):
            for b in range(2):
                assert mu.joint[x, a, b] == (Fraction(1, 2) if x == a == b else 0)


def test_cond_independent_label_mismatch():
    with pytest.raises(DimensionError):
        make_cond_independent(ProbVector.uniform((0, 1)), bsc(Fraction(1, 10)), Channel.identity((0, 1, 2)))


def test_cond_independent_flag_checked():
    mu = guessing_mu1()
    with pytest.raises(ValidationError):
        InfoStructure(mu.x_labels, mu.y1_labels, mu.y2_labels, mu.joint, cond_independent=True)


def test_shared_signal_marginal_is_prior_times_channel():
    mu = guessing_mu1()
    q = guessing_channel("9/10")
    for player in (1, 2):
        pair = marginal(mu, player)
        assert (pair.table == Fraction(1, 4) * q.matrix).all()
        assert pair.table.sum() == 1


def test_reduce_product_structure_has_unit_density():
    zeta = ProbVector.uniform((0, 1, 2))
    q1 = Channel.constant((0, 1, 2), ProbVector((0, 1), arith.asarray(["1/3", "2/3"])))
    q2 = Channel.constant((0, 1, 2), ProbVector((0, 1, 2), arith.asarray(["1/2", "1/4", "1/4"])))
    red = reduce_independent(make_cond_independent(zeta, q1, q2))
    assert (red.density == 1).all()


def test_reduce_shared_signal_uniform_reference():
    mu = guessing_mu1()
    u = ProbVector.uniform(GUESS_STATES)
    red = reduce_independent(mu, u, u)
    q = guessing_channel("9/10").matrix
    for x in range(4):
        for a in range(4):
            for b in range(4):
                assert red.density[x, a, b] == (16 * q[x, a] if a == b else 0)
    assert (red.reconstruct() == mu.joint).all()


def test_reduce_absolute_continuity_violation():
    zeta = ProbVector.uniform((0, 1))
    mu = make_cond_independent(zeta, Channel.identity((0, 1)), Channel.identity((0, 1)))
    with pytest.raises(AbsoluteContinuityError):
        reduce_independent(mu, ProbVector.point((0, 1), 0), None)


def test_kappa_tilde_correct_signal_probability():
    mu = apply_garbling(guessing_mu1(False), 1, kappa_tilde(rounded=True))
    ch = marginal(mu, 1).channel()
    for x in range(4):
        assert abs(ch.matrix[x, x] - 0.85) < 1e-3
    exact = marginal(apply_garbling(guessing_mu1(), 1, kappa_tilde(rounded=False)), 1).channel()
    assert all(exact.matrix[x, x] == Fraction(17, 20) for x in range(4))


def test_identity_garbling_is_noop(rng):
    mu = random_structure(rng, 3, 2, 3, exact=True)
    assert (apply_garbling(mu, 1, Channel.identity(mu.y1_labels)).joint == mu.joint).all()
    assert (apply_garbling(mu, 2, Channel.identity(mu.y2_labels)).joint == mu.joint).all()


def test_constant_kernel_makes_signal_uninformative(rng):
    mu = random_structure(rng, 3, 2, 2, exact=True)
    p = ProbVector((0, 1, 2), arith.asarray(["1/6", "1/3", "1/2"]))
    pair = marginal(apply_garbling(mu, 1, Channel.constant(mu.y1_labels, p)), 1)
    assert (pair.table == np.outer(mu.prior.mass, p.mass)).all()


def test_garbling_label_mismatch(rng):
    mu = random_structure(rng, 2, 2, 2, exact=True)
    with pytest.raises(DimensionError):
        apply_garbling(mu, 1, Channel.identity((0, 1, 2)))


def test_garbling_preserves_cond_independence(rng):
    mu = random_structure(rng, 3, 2, 2, exact=True, cond_independent=True)
    out = apply_garbling(mu, 2, random_channel(rng, mu.y2_labels, 3, exact=True))
    assert out.cond_independent


def test_refine_then_project_recovers(rng):
    mu = random_structure(rng, 2, 2, 3, exact=True)
    extra = random_channel(rng, mu.x_labels, 2, exact=True)
    for player in (1, 2):
        r = refine_signal(mu, player, extra)
        back = apply_garbling(r, player, projection_kernel(r.signal_labels(player), mu.signal_labels(player)))
        assert (back.joint == mu.joint).all()


sizes = st.integers(1, 4)


@given(seed=st.integers(0, 2**32 - 1), nx=sizes, n1=sizes, n2=sizes, exact=st.booleans())
def test_reconstruction_property(seed, nx, n1, n2, exact):
    mu = random_structure(np.random.default_rng(seed), nx, n1, n2, exact=exact)
    red = reduce_independent(mu)
    assert arith.allclose(red.reconstruct(), mu.joint, tol=1e-12)
    if exact:
        assert (red.reconstruct() == mu.joint).all()


@given(seed=st.integers(0, 2**32 - 1), player=st.sampled_from([1, 2]))
def test_garbling_composition_property(seed, player):
    rng = np.random.default_rng(seed)
    mu = random_structure(rng, 3, 2, 3, exact=True)
    ka = random_channel(rng, mu.signal_labels(player), 3, exact=True)
    kb = random_channel(rng, ka.output_labels, 2, exact=True)
    twice = apply_garbling(apply_garbling(mu, player, ka), player, kb)
    once = apply_garbling(mu, player, compose(kb, ka))
    assert (twice.joint == once.joint).all()


@given(seed=st.integers(0, 2**32 - 1), player=st.sampled_from([1, 2]))
def test_marginal_consistency_property(seed, player):
    rng = np.random.default_rng(seed)
    mu = random_structure(rng, 3, 3, 2, exact=True)
    other = 3 - player
    k = random_channel(rng, mu.signal_labels(player), 2, exact=True)
    assert (marginal(apply_garbling(mu, player, k), other).table == marginal(mu, other).table).all()
    assert marginal(mu, player).table.sum() == 1


# ---------------------------------------------------------------- quantization


def test_quantize_uniform_density():
    ch = quantize_channel(lambda y, x: np.ones_like(y), (0, 1), (0.0, 1.0), 4, exact=True)
    assert (ch.matrix == Fraction(1, 4)).all()
    fl = quantize_channel(lambda y, x: np.ones_like(y), (0, 1), (0.0, 1.0), 4)
    np.testing.assert_array_equal(fl.matrix, 0.25)


def test_quantize_single_cell():
    ch = quantize_channel(gaussian_bump_density({0: 0.25, 1: 0.75}, 0.2), (0, 1), (0, 1), 1)
    np.testing.assert_array_equal(ch.matrix, [[1.0], [1.0]])


def test_quantize_gaussian_against_adaptive_quadrature():
    means = {0: 0.25, 1: 0.75}
    dens = gaussian_bump_density(means, 0.2)
    ch = quantize_channel(dens, (0, 1), (0, 1), 16)
    edges = np.linspace(0, 1, 17)
    for i, x in enumerate((0, 1)):
        f = lambda y: float(np.exp(-((y - means[x]) ** 2) / (2 * 0.2**2)))  # noqa: E731
        cells = np.array([integrate.quad(f, edges[j], edges[j + 1])[0] for j in range(16)])
        np.testing.assert_allclose(ch.matrix[i], cells / cells.sum(), atol=1e-3)
        fine = quantize_channel(dens, (0, 1), (0, 1), 4096, subdivisions=1).matrix[i].reshape(16, 256).sum(axis=1)
        np.testing.assert_allclose(ch.matrix[i], fine, atol=1e-3)


@given(n=st.integers(1, 64), mean=st.floats(0, 1), sigma=st.floats(0.05, 2))
def test_quantize_rows_sum_to_one(n, mean, sigma):
    dens = gaussian_bump_density({0: mean, 1: 1 - mean}, sigma)
    exact = quantize_channel(dens, (0, 1), (0, 1), n, exact=True)
    assert all(sum(row) == 1 for row in exact.matrix)
    fl = quantize_channel(dens, (0, 1), (0, 1), n)
    np.testing.assert_allclose(fl.matrix.sum(axis=1), 1.0, atol=1e-15)


def test_quantize_degenerate_density():
    with pytest.raises(DegenerateDensityError):
        quantize_channel(lambda y, x: np.zeros_like(y), (0,), (0, 1), 4)
    with pytest.raises(DegenerateDensityError):
        quantize_channel(lambda y, x: -np.ones_like(y), (0,), (0, 1), 4)
