"""Equilibrium values of finite zero-sum Bayesian games and single-agent decision values."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import arith, lp
from .core import Channel, Game, InfoStructure, PairMeasure, ProbVector
from .errors import ArithmeticFailure, DimensionError, PriorMismatchError


@dataclass(frozen=True, eq=False)
class BehavioralStrategy:
    """Randomized policy of one player: a kernel from its signals to its actions."""

    player: int
    policy: Channel

    def __post_init__(self):
        if self.player not in (1, 2):
            raise ValueError("player must be 1 or 2")

    @property
    def table(self) -> tuple[ProbVector, ...]:
        return self.policy.rows

    def action_law(self, signal) -> ProbVector:
        return self.policy.row(signal)


@dataclass(frozen=True, eq=False)
class GameValue:
    value: object
    strategy1: BehavioralStrategy
    strategy2: BehavioralStrategy
    duality_gap: object


@dataclass(frozen=True, eq=False)
class DecisionValue:
    value: object
    policy: Channel


def _check_game_structure(game: Game, mu: InfoStructure) -> None:
    if game.x_labels != mu.x_labels:
        raise DimensionError("game and information structure disagree on the state labels")


def _payoff_tensor(game: Game, mu: InfoStructure, exact: bool) -> np.ndarray:
    """``M[y1, u1, y2, u2] = sum_x mu(x, y1, y2) c(x, u1, u2)``."""
    joint = arith.to_mode(mu.joint, exact)
    cost = arith.to_mode(game.cost, exact)
    # [y1, y2, u1, u2]
    m = np.tensordot(joint, cost, axes=([0], [0]))
    return m.transpose(0, 2, 1, 3)


def _mode(*objs, exact: bool | None) -> bool:
    return all(o.exact for o in objs) if exact is None else exact


def value(game: Game, mu: InfoStructure, *, exact: bool | None = None, cross_check: bool = False) -> GameValue:
    """Saddle-point value ``V*`` (the maximizer's expected cost) and equilibrium strategies.

    Player 1's behavioral strategy comes from the primal of the minimizer LP,
    player 2's from the duals of its best-response rows. With
    ``cross_check=True`` the maximizer-side LP is solved as well and must
    reach the same optimum.
    """
    _check_game_structure(game, mu)
    exact = _mode(game, mu, exact=exact)
    m = _payoff_tensor(game, mu, exact)
    n1, k1, n2, k2 = m.shape
    na = n1 * k1
    one = arith.asarray([1], exact)[0]
    c = arith.zeros(na + n2, exact)
    c[na:] = one
    a_ub = arith.zeros((n2 * k2, na + n2), exact)
    for j in range(n2):
        for v in range(k2):
            row = j * k2 + v
            a_ub[row, :na] = m[:, :, j, v].reshape(-1)
            a_ub[row, na + j] = -one
    a_eq = arith.zeros((n1, na + n2), exact)
    for i in range(n1):
        a_eq[i, i * k1 : (i + 1) * k1] = one
    free = np.zeros(na + n2, dtype=bool)
    free[na:] = True
    prog = lp.LinearProgram(c, a_eq, arith.asarray([1] * n1, exact), a_ub, arith.zeros(n2 * k2, exact), free)
    cert = lp.solve(prog)
    if not cert.optimal:
        raise ArithmeticFailure(f"minimax LP reported {cert.status}")
    a = _clean_rows(cert.primal[:na].reshape(n1, k1), exact)
    b = _clean_rows(-cert.dual[n1:].reshape(n2, k2), exact)
    s1 = BehavioralStrategy(1, Channel(mu.y1_labels, game.u1_labels, a))
    s2 = BehavioralStrategy(2, Channel(mu.y2_labels, game.u2_labels, b))
    v = cert.objective_value
    gap = best_response_value(game, mu, 2, s1, exact=exact) - best_response_value(game, mu, 1, s2, exact=exact)
    if cross_check:
        other = maximizer_value(game, mu, exact=exact)
        if not arith.is_zero(other - v, exact):
            raise ArithmeticFailure(f"minimizer LP {v} and maximizer LP {other} disagree")
    return GameValue(v, s1, s2, gap)


def _clean_rows(rows: np.ndarray, exact: bool) -> np.ndarray:
    if exact:
        return rows
    rows = np.clip(rows.astype(float), 0.0, None)
    return rows / rows.sum(axis=1, keepdims=True)


def maximizer_value(game: Game, mu: InfoStructure, *, exact: bool | None = None) -> object:
    """Optimum of the maximizer-side LP: ``max sum_y1 w(y1)`` over player-2 behavioral strategies."""
    _check_game_structure(game, mu)
    exact = _mode(game, mu, exact=exact)
    m = _payoff_tensor(game, mu, exact)
    n1, k1, n2, k2 = m.shape
    nb = n2 * k2
    one = arith.asarray([1], exact)[0]
    c = arith.zeros(nb + n1, exact)
    c[nb:] = one
    a_ub = arith.zeros((n1 * k1, nb + n1), exact)
    for i in range(n1):
        for u in range(k1):
            row = i * k1 + u
            a_ub[row, :nb] = -m[i, u, :, :].reshape(-1)
            a_ub[row, nb + i] = one
    a_eq = arith.zeros((n2, nb + n1), exact)
    for j in range(n2):
        a_eq[j, j * k2 : (j + 1) * k2] = one
    free = np.zeros(nb + n1, dtype=bool)
    free[nb:] = True
    prog = lp.LinearProgram(c, a_eq, arith.asarray([1] * n2, exact), a_ub, arith.zeros(n1 * k1, exact), free, "max")
    cert = lp.solve(prog)
    if not cert.optimal:
        raise ArithmeticFailure(f"maximizer LP reported {cert.status}")
    return cert.objective_value


def payoff(
    game: Game, mu: InfoStructure, s1: BehavioralStrategy, s2: BehavioralStrategy, *, exact: bool | None = None
) -> object:
    """Expected cost ``V(γ1, γ2)`` of a strategy pair."""
    exact = _mode(game, mu, s1.policy, s2.policy, exact=exact)
    m = _payoff_tensor(game, mu, exact)
    a = arith.to_mode(s1.policy.matrix, exact)
    b = arith.to_mode(s2.policy.matrix, exact)
    return (m * a[:, :, None, None] * b[None, None, :, :]).sum()


def best_response_value(
    game: Game, mu: InfoStructure, player: int, other: BehavioralStrategy, *, exact: bool | None = None
) -> object:
    """Optimal payoff of ``player`` when the opponent is fixed to ``other``."""
    exact = _mode(game, mu, other.policy, exact=exact)
    m = _payoff_tensor(game, mu, exact)
    p = arith.to_mode(other.policy.matrix, exact)
    if player == 2:
        # [y2, u2] after averaging out player 1
        per = (m * p[:, :, None, None]).sum(axis=(0, 1))
        return sum(max(row) for row in per)
    per = (m * p[None, None, :, :]).sum(axis=(2, 3))
    return sum(min(row) for row in per)


def normal_form(game: Game, mu: InfoStructure, *, exact: bool | None = None) -> tuple[np.ndarray, list, list]:
    """Pure-strategy payoff matrix over all deterministic maps Y^i -> U^i.

    Rows index player-1 maps, columns player-2 maps; each map is a tuple of
    action indices, one per signal.
    """
    _check_game_structure(game, mu)
    exact = _mode(game, mu, exact=exact)
    m = _payoff_tensor(game, mu, exact)
    n1, k1, n2, k2 = m.shape
    maps1 = list(itertools.product(range(k1), repeat=n1))
    maps2 = list(itertools.product(range(k2), repeat=n2))
    out = arith.zeros((len(maps1), len(maps2)), exact)
    for r, f in enumerate(maps1):
        for s, g in enumerate(maps2):
            out[r, s] = sum(m[i, f[i], j, g[j]] for i in range(n1) for j in range(n2))
    return out, maps1, maps2


def normal_form_value(game: Game, mu: InfoStructure, *, exact: bool | None = None) -> object:
    """Game value through the induced normal form (exponential; small instances only)."""
    matrix, _, _ = normal_form(game, mu, exact=exact)
    v, _, _ = lp.matrix_game(matrix, exact=arith.is_exact(matrix))
    return v


def _single_agent_cost(cost: Game) -> np.ndarray:
    if not cost.is_single_agent:
        raise DimensionError("single-agent problems need exactly one maximizer action")
    return cost.cost[:, :, 0]


def single_agent_value(cost: Game, pair: PairMeasure, *, exact: bool | None = None) -> DecisionValue:
    """Optimal expected cost of a decision maker observing ``pair``'s signal.

    For each signal the action with lowest conditional expected cost is taken
    (ties go to the lowest index); signals of zero probability get action 0.
    """
    if cost.x_labels != pair.x_labels:
        raise DimensionError("cost and pair disagree on the state labels")
    exact = _mode(cost, pair, exact=exact)
    c = arith.to_mode(_single_agent_cost(cost), exact)
    t = arith.to_mode(pair.table, exact)
    # [y, u]
    risk = t.T @ c
    policy = arith.zeros((len(pair.y_labels), len(cost.u1_labels)), exact)
    total = arith.zeros((), exact)[()]
    for j, row in enumerate(risk):
        best = min(row)
        k = next(u for u in range(len(row)) if arith.is_zero(row[u] - best, exact, 1e-12))
        policy[j, k] = 1
        total = total + row[k]
    return DecisionValue(total, Channel(pair.y_labels, cost.u1_labels, policy))


def posteriors(pair: PairMeasure) -> list[tuple[object, ProbVector]]:
    """Signal probabilities and Bayes posteriors ``(P(y), π_y)`` for signals with ``P(y) > 0``."""
    exact = pair.exact
    out = []
    for j in range(len(pair.y_labels)):
        col = pair.table[:, j]
        w = col.sum()
        if w > 0 and not arith.is_zero(w, exact, 0.0):
            out.append((w, ProbVector(pair.x_labels, col / w)))
    return out


def bayes_risk(cost: Game, belief: ProbVector) -> object:
    """``W*(π) = min_u sum_x π(x) c(x, u)``."""
    c = arith.to_mode(_single_agent_cost(cost), belief.exact and cost.exact)
    p = arith.to_mode(belief.mass, belief.exact and cost.exact)
    return min(p @ c)


def posterior_functional(cost: Game, pair: PairMeasure) -> object:
    return sum((w * bayes_risk(cost, pi) for w, pi in posteriors(pair)), arith.zeros((), pair.exact)[()])


def posterior_functional_check(cost: Game, mu_pair: PairMeasure, nu_pair: PairMeasure, tol: float = arith.TOL) -> bool:
    """Whether ``mu``'s posterior distribution achieves a weakly smaller expected Bayes risk than ``nu``'s."""
    exact = mu_pair.exact and nu_pair.exact
    if not arith.allclose(mu_pair.prior.mass, nu_pair.prior.mass):
        raise PriorMismatchError("pairs must share the state prior")
    lhs = posterior_functional(cost, mu_pair)
    rhs = posterior_functional(cost, nu_pair)
    return bool(lhs <= rhs) if exact and cost.exact else bool(float(lhs) <= float(rhs) + tol)
