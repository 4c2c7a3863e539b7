import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from infoorder import arith
from infoorder.core import (
    Channel,
    Game,
    PairMeasure,
    ProbVector,
    apply_garbling,
    bsc,
    garble_pair,
    make_cond_independent,
)
from infoorder.errors import DimensionError, PriorMismatchError
from infoorder.instances import (
    GUESS_STATES,
    bsc_pair,
    guessing_channel,
    guessing_cost,
    guessing_game,
    guessing_mu1,
    guessing_mu2,
    kappa_tilde,
    matching_pennies,
    random_channel,
    random_game,
    random_prob,
    random_structure,
)
from infoorder.solver import (
    BehavioralStrategy,
    best_response_value,
    maximizer_value,
    normal_form,
    payoff,
    posterior_functional_check,
    posteriors,
    single_agent_value,
    value,
)


def identity_strategy(player, labels):
    return BehavioralStrategy(player, Channel.identity(labels))


def test_guessing_shared_signal():
    g, mu = guessing_game(), guessing_mu1()
    res = value(g, mu, cross_check=True)
    assert res.value == Fraction(-9, 2)
    assert res.duality_gap == 0
    # hand computation: both copy the common signal
    s1, s2 = identity_strategy(1, GUESS_STATES), identity_strategy(2, GUESS_STATES)
    assert payoff(g, mu, s1, s2) == Fraction(-9, 2)


def test_guessing_independent_signals():
    g, mu = guessing_game(), guessing_mu2()
    res = value(g, mu, cross_check=True)
    # -5 (0.9)(0.85) - 12 (0.85)(0.1)
    assert res.value == -5 * Fraction(9, 10) * Fraction(85, 100) - 12 * Fraction(85, 100) * Fraction(1, 10) == Fraction(-969, 200)
    s1, s2 = identity_strategy(1, GUESS_STATES), identity_strategy(2, GUESS_STATES)
    assert payoff(g, mu, s1, s2) == res.value


@pytest.mark.parametrize("mu", [guessing_mu1(), guessing_mu2()])
def test_identity_is_an_equilibrium(mu):
    g = guessing_game()
    s1, s2 = identity_strategy(1, GUESS_STATES), identity_strategy(2, GUESS_STATES)
    v = payoff(g, mu, s1, s2)
    assert best_response_value(g, mu, 2, s1) == v
    assert best_response_value(g, mu, 1, s2) == v


def test_matching_pennies_zero(rng):
    for exact in (True, False):
        mu = random_structure(rng, 2, 3, 2, exact=exact)
        res = value(matching_pennies(exact=exact), mu)
        assert res.value == 0 if exact else abs(res.value) < 1e-12


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        value(matching_pennies(x_labels=(0, 1, 2)), guessing_mu1())


def _scipy_matrix_value(p):
    m, n = p.shape
    res = linprog(np.r_[np.zeros(m), 1], A_ub=np.c_[p.T, -np.ones(n)], b_ub=np.zeros(n),
                  A_eq=np.r_[np.ones(m), 0][None], b_eq=[1], bounds=[(0, None)] * m + [(None, None)], method="highs")
    return res.fun


def test_normal_form_oracle_via_scipy():
    rng = np.random.default_rng(5)
    for _ in range(30):
        mu = random_structure(rng, 2, 2, 2, exact=False)
        g = random_game(rng, 2, 2, 2, exact=False)
        p, _, _ = normal_form(g, mu, exact=False)
        assert abs(value(g, mu).value - _scipy_matrix_value(p.astype(float))) < 1e-9


def _random_strategy(rng, player, signals, actions, exact):
    return BehavioralStrategy(player, random_channel(rng, signals, len(actions), exact, output_labels=actions))


def test_saddle_property():
    rng = np.random.default_rng(9)
    for exact in (True, False):
        for _ in range(8):
            nx, n1, n2, k1, k2 = (int(v) for v in rng.integers(1, 4, size=5))
            mu = random_structure(rng, nx, n1, n2, exact)
            g = random_game(rng, nx, k1, k2, exact)
            res = value(g, mu)
            v = payoff(g, mu, res.strategy1, res.strategy2)
            assert arith.allclose(np.array([v]), np.array([res.value]), tol=1e-9)
            for _ in range(50):
                d1 = _random_strategy(rng, 1, mu.y1_labels, g.u1_labels, exact)
                d2 = _random_strategy(rng, 2, mu.y2_labels, g.u2_labels, exact)
                lo = payoff(g, mu, res.strategy1, d2)
                hi = payoff(g, mu, d1, res.strategy2)
                if exact:
                    assert lo <= v <= hi
                else:
                    assert lo <= v + 1e-9 and v <= hi + 1e-9


@given(seed=st.integers(0, 2**32 - 1), exact=st.booleans())
def test_minimax_equality_property(seed, exact):
    rng = np.random.default_rng(seed)
    nx, n1, n2, k1, k2 = (int(v) for v in rng.integers(1, 4, size=5))
    mu = random_structure(rng, nx, n1, n2, exact)
    g = random_game(rng, nx, k1, k2, exact)
    res = value(g, mu)
    other = maximizer_value(g, mu)
    if exact:
        assert res.value == other and res.duality_gap == 0
    else:
        assert abs(res.value - other) <= 1e-9 and abs(res.duality_gap) <= 1e-9


# ------------------------------------------------------------ single agent


def test_single_agent_perfect_and_blind():
    zeta = ProbVector.uniform((0, 1))
    c = guessing_cost()
    assert single_agent_value(c, PairMeasure.from_channel(zeta, Channel.identity((0, 1)))).value == 0
    blind = Channel.constant((0, 1), ProbVector.uniform((0, 1)))
    assert single_agent_value(c, PairMeasure.from_channel(zeta, blind)).value == Fraction(1, 2)


def test_single_agent_bsc_matches_policy_enumeration():
    c, pair = guessing_cost(), bsc_pair("1/10")
    res = single_agent_value(c, pair)
    assert res.value == Fraction(1, 10)
    assert (res.policy.matrix == Channel.identity((0, 1)).matrix).all()
    best = min(
        sum(pair.table[x, y] * c.cost[x, pol[y], 0] for x in range(2) for y in range(2))
        for pol in itertools.product(range(2), repeat=2)
    )
    assert best == res.value


def test_single_agent_tie_breaks_low():
    c = Game.single_agent((0, 1), (0, 1), arith.asarray([[0, 0], [1, 1]]))
    res = single_agent_value(c, bsc_pair("1/3"))
    assert (res.policy.matrix[:, 0] == 1).all()


def test_single_agent_needs_single_agent_shape():
    with pytest.raises(DimensionError):
        single_agent_value(matching_pennies(), bsc_pair("1/3"))


def test_posteriors_identity_and_blind():
    zeta = ProbVector.uniform((0, 1))
    post = posteriors(PairMeasure.from_channel(zeta, Channel.identity((0, 1))))
    assert [w for w, _ in post] == [Fraction(1, 2)] * 2
    assert [list(p.mass) for _, p in post] == [[1, 0], [0, 1]]
    blind = PairMeasure.from_channel(zeta, Channel.constant((0, 1), ProbVector((0, 1, 2), arith.asarray(["1/5", "0", "4/5"]))))
    post = posteriors(blind)
    assert len(post) == 2
    assert all((p.mass == zeta.mass).all() for _, p in post)


def test_posteriors_guessing_channel():
    post = posteriors(PairMeasure.from_channel(ProbVector.uniform(GUESS_STATES), guessing_channel("9/10")))
    for j, (w, p) in enumerate(post):
        assert w == Fraction(1, 4)
        assert p.mass[j] == Fraction(9, 10)
        assert all(p.mass[i] == Fraction(1, 30) for i in range(4) if i != j)


@given(seed=st.integers(0, 2**32 - 1))
def test_barycenter_property(seed):
    rng = np.random.default_rng(seed)
    mu = random_structure(rng, 4, 3, 1, exact=True)
    pair = PairMeasure(mu.x_labels, mu.y1_labels, mu.joint.sum(axis=2))
    post = posteriors(pair)
    assert sum(w for w, _ in post) == 1
    assert (sum(w * p.mass for w, p in post) == pair.prior.mass).all()


@given(seed=st.integers(0, 2**32 - 1), theta=st.fractions(0, 1))
def test_concavity_in_prior_property(seed, theta):
    rng = np.random.default_rng(seed)
    nx = int(rng.integers(2, 5))
    xs = tuple(range(nx))
    q = random_channel(rng, xs, int(rng.integers(1, 4)), exact=True)
    g = random_game(rng, nx, int(rng.integers(1, 4)), 1, exact=True)
    z1, z2 = (ProbVector(xs, random_prob(rng, nx, True)) for _ in range(2))
    mix = ProbVector(xs, theta * z1.mass + (1 - theta) * z2.mass)

    def j(z):
        return single_agent_value(g, PairMeasure.from_channel(z, q)).value

    assert j(mix) >= theta * j(z1) + (1 - theta) * j(z2)


def test_posterior_check_examples(rng):
    c = guessing_cost()
    zeta = ProbVector.uniform((0, 1))
    ident = PairMeasure.from_channel(zeta, Channel.identity((0, 1)))
    assert posterior_functional_check(c, ident, PairMeasure.from_channel(zeta, random_channel(rng, (0, 1), 3, True)))
    assert not posterior_functional_check(c, bsc_pair("3/10"), bsc_pair("1/10"))


def test_posterior_check_forward_direction():
    rng = np.random.default_rng(77)
    for _ in range(100):
        nx = int(rng.integers(1, 4))
        zeta = ProbVector(tuple(range(nx)), np.asarray(random_structure(rng, nx, 1, 1, True).joint[:, 0, 0]))
        mu = PairMeasure.from_channel(zeta, random_channel(rng, zeta.labels, int(rng.integers(1, 4)), True))
        nu = garble_pair(mu, random_channel(rng, mu.y_labels, int(rng.integers(1, 4)), True))
        c = random_game(rng, nx, int(rng.integers(1, 4)), 1, True)
        assert posterior_functional_check(c, mu, nu)


def test_posterior_check_prior_mismatch():
    a = bsc_pair("1/10")
    b = PairMeasure.from_channel(ProbVector((0, 1), arith.asarray(["1/3", "2/3"])), bsc(Fraction(1, 10)))
    with pytest.raises(PriorMismatchError):
        posterior_functional_check(guessing_cost(), a, b)


def test_value_under_uninformative_maximizer_equals_prior_only():
    rng = np.random.default_rng(3)
    xs = (0, 1, 2)
    q1 = random_channel(rng, xs, 2, True)
    mu = make_cond_independent(ProbVector.uniform(xs), q1, random_channel(rng, xs, 3, True))
    g = random_game(rng, 3, 2, 2, True)
    blind = apply_garbling(mu, 2, Channel.constant(mu.y2_labels, ProbVector.point((0,), 0)))
    prior_only = make_cond_independent(mu.prior, q1, Channel.constant(xs, ProbVector.point((0,), 0)))
    assert (blind.joint == prior_only.joint).all()
    assert value(g, blind).value == value(g, prior_only).value


def test_guessing_exact_kappa_tilde():
    mu = apply_garbling(guessing_mu1(), 1, kappa_tilde(rounded=False))
    # player 2 copies the shared signal; player 1 is right w.p. 0.9 * 49/52 on it, 0.1 * 1/52 off it
    hand = -5 * Fraction(9, 10) * Fraction(49, 52) - 12 * Fraction(1, 10) * Fraction(1, 52)
    assert value(guessing_game(), mu).value == hand == Fraction(-2217, 520)
