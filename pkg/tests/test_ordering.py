import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from infoorder import arith
from infoorder.core import Channel, ProbVector, apply_garbling, bsc, compose, make_cond_independent
from infoorder.errors import NotApplicableError, PriorMismatchError
from infoorder.instances import (
    guessing_mu1,
    guessing_mu2,
    random_channel,
    random_game,
    random_structure,
)
from infoorder.ordering import (
    DECOMPOSED,
    JOINT,
    check_order,
    monotonicity_suite,
    refinement_suite,
    witness_game,
)
from infoorder.solver import value


def _assert_meets(res, nu, mu):
    left = apply_garbling(nu, 1, res.kappa1)
    right = apply_garbling(mu, 2, res.kappa2)
    assert (left.joint == right.joint).all()
    assert (res.common.joint == left.joint).all()


def test_maximizer_garbling_is_ordered(rng):
    mu = random_structure(rng, 3, 2, 3, exact=True)
    nu = apply_garbling(mu, 2, random_channel(rng, mu.y2_labels, 2, True))
    res = check_order(nu, mu)
    assert res.ordered and res.mode == JOINT
    _assert_meets(res, nu, mu)


def test_reflexive(rng):
    mu = random_structure(rng, 3, 3, 2, exact=True)
    res = check_order(mu, mu)
    assert res.ordered
    _assert_meets(res, mu, mu)


def test_guessing_dependence_cannot_be_decoupled():
    mu1, mu2 = guessing_mu1(), guessing_mu2()
    res = check_order(mu2, mu1)
    assert not res.ordered
    assert res.farkas is not None and res.witness is None
    assert not check_order(mu1, mu2).ordered


def test_two_sided_construction(rng):
    mu = random_structure(rng, 3, 2, 2, exact=True)
    ka = random_channel(rng, mu.y2_labels, 3, True)
    kb = random_channel(rng, mu.y1_labels, 2, True)
    # ν: maximizer's signal degraded; μ': minimizer's signal degraded
    nu = apply_garbling(mu, 2, ka)
    better = apply_garbling(mu, 1, kb)
    res = check_order(nu, better)
    assert res.ordered
    _assert_meets(res, nu, better)


def test_prior_mismatch():
    a = guessing_mu1()
    zeta = ProbVector((1, 2, 3, 4), arith.asarray(["1/2", "1/6", "1/6", "1/6"]))
    b = make_cond_independent(zeta, Channel.identity((1, 2, 3, 4)), Channel.identity((1, 2, 3, 4)))
    with pytest.raises(PriorMismatchError):
        check_order(a, b)


def _ci(zeta, q1, q2):
    return make_cond_independent(zeta, q1, q2)


def test_bsc_side_one_witness():
    zeta = ProbVector.uniform((0, 1))
    q2 = bsc(arith.parse_scalar("1/5", True))
    mu = _ci(zeta, bsc(arith.parse_scalar("1/10", True)), q2)
    nu = _ci(zeta, bsc(arith.parse_scalar("3/10", True)), q2)
    res = check_order(nu, mu)
    assert not res.ordered and res.mode == DECOMPOSED
    w = res.witness
    assert w.side == 1 and w.value_nu > w.value_mu
    assert w.margin >= res.sides[0].margin > 0
    g = witness_game(nu, mu, 1)
    assert value(g, nu).value > value(g, mu).value


def test_witness_on_ordered_inputs_errors():
    zeta = ProbVector.uniform((0, 1))
    q1 = bsc(arith.parse_scalar("1/4", True))
    mu = _ci(zeta, q1, Channel.identity((0, 1)))
    nu = _ci(zeta, q1, Channel.constant((0, 1), zeta))
    assert check_order(nu, mu).ordered
    with pytest.raises(NotApplicableError):
        witness_game(nu, mu, 2)


def test_witness_needs_cond_independence():
    with pytest.raises(NotApplicableError):
        witness_game(guessing_mu2(), guessing_mu1(), 1)


def test_two_sided_failure_uses_side_one():
    zeta = ProbVector.uniform((0, 1))
    f = lambda s: bsc(arith.parse_scalar(s, True))  # noqa: E731
    mu = _ci(zeta, f("1/10"), f("3/10"))
    nu = _ci(zeta, f("3/10"), f("1/10"))
    res = check_order(nu, mu)
    assert not res.sides[0].feasible and not res.sides[1].feasible
    assert res.witness.side == 1
    g2 = witness_game(nu, mu, 2)
    assert value(g2, nu).value > value(g2, mu).value


def _random_ci_pair(rng, exact):
    nx = int(rng.integers(1, 4))
    base = random_structure(rng, nx, int(rng.integers(1, 4)), int(rng.integers(1, 4)), exact, cond_independent=True)
    other = make_cond_independent(
        base.prior,
        random_channel(rng, base.x_labels, int(rng.integers(1, 4)), exact),
        random_channel(rng, base.x_labels, int(rng.integers(1, 4)), exact),
    )
    return base, other


@given(seed=st.integers(0, 2**32 - 1))
def test_joint_and_decomposed_agree_property(seed):
    rng = np.random.default_rng(seed)
    nu, mu = _random_ci_pair(rng, True)
    if rng.random() < 0.5:
        mu = apply_garbling(nu, 1, random_channel(rng, nu.y1_labels, 2, True))
    a = check_order(nu, mu, mode=JOINT)
    b = check_order(nu, mu, mode=DECOMPOSED)
    assert a.ordered == b.ordered
    if b.ordered:
        _assert_meets(b, nu, mu)
    else:
        w = b.witness
        assert value(w.game, nu).value - value(w.game, mu).value == w.margin > 0


@given(seed=st.integers(0, 2**32 - 1))
def test_transitive_property(seed):
    rng = np.random.default_rng(seed)
    a = random_structure(rng, 3, 2, 2, True, cond_independent=True)
    # a ≲ b ≲ c by garbling the maximizer in a and the minimizer upwards
    b = apply_garbling(a, 1, random_channel(rng, a.y1_labels, 2, True))
    c = apply_garbling(b, 1, random_channel(rng, b.y1_labels, 3, True))
    assert check_order(a, b).ordered and check_order(b, c).ordered
    res = check_order(a, c)
    assert res.ordered
    _assert_meets(res, a, c)


def test_composed_kernels_witness_transitivity(rng):
    a = random_structure(rng, 2, 3, 2, True, cond_independent=True)
    k1 = random_channel(rng, a.y1_labels, 2, True)
    k2 = random_channel(rng, k1.output_labels, 2, True)
    b = apply_garbling(a, 1, k1)
    c = apply_garbling(b, 1, k2)
    assert (c.joint == apply_garbling(a, 1, compose(k2, k1)).joint).all()
    assert check_order(a, c).ordered


def test_monotonicity_identity_kernels_equal(rng):
    mu = random_structure(rng, 3, 2, 2, True)
    g = random_game(rng, 3, 2, 3, True)
    for player in (1, 2):
        same = apply_garbling(mu, player, Channel.identity(mu.signal_labels(player)))
        assert value(g, same).value == value(g, mu).value


def test_monotonicity_suite_exact_small():
    rep = monotonicity_suite(trials=15, seed=3, exact=True)
    assert rep.ok and rep.checks == 45


def test_monotonicity_suite_fixed_structure():
    rep = monotonicity_suite(guessing_mu2(False), trials=10, seed=1, refinement=False)
    assert rep.ok and rep.checks == 20


def test_suite_parallel_matches_serial():
    a = refinement_suite(trials=12, seed=8, jobs=1)
    b = refinement_suite(trials=12, seed=8, jobs=2)
    assert a.checks == b.checks and a.violations == b.violations == []
