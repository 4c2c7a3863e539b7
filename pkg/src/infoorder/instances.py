"""Named fixtures and seeded random instance generators."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import arith
from .core import (
    Channel,
    Game,
    InfoStructure,
    PairMeasure,
    ProbVector,
    bsc,
    make_cond_independent,
    shared_signal,
)

GUESS_STATES = (1, 2, 3, 4)

# four-digit rounding of the player-1 garbling kernel for the guessing fixtures (rows sum to 0.9999)
KAPPA_TILDE_ROUNDED = [[0.9423 if i == j else 0.0192 for j in range(4)] for i in range(4)]


def guessing_game(exact: bool = True) -> Game:
    """Player 1 is paid for naming the state; player 2 limits the loss by copying."""
    n = len(GUESS_STATES)
    cost = arith.zeros((n, n, n), exact)
    for x in range(n):
        for a in range(n):
            for b in range(n):
                if a == x:
                    cost[x, a, b] = -5 if a == b else -12
    return Game(GUESS_STATES, GUESS_STATES, GUESS_STATES, arith.asarray(cost, exact))


def guessing_channel(correct, exact: bool = True) -> Channel:
    return Channel.symmetric(GUESS_STATES, arith.parse_scalar(correct, exact))


def guessing_mu1(exact: bool = True) -> InfoStructure:
    """Both players see the same draw of the 0.9-accurate channel."""
    return shared_signal(ProbVector.uniform(GUESS_STATES, exact), guessing_channel("9/10", exact))


def guessing_mu2(exact: bool = True) -> InfoStructure:
    """Independent signals: 0.85-accurate for player 1, 0.9-accurate for player 2."""
    zeta = ProbVector.uniform(GUESS_STATES, exact)
    return make_cond_independent(zeta, guessing_channel("17/20", exact), guessing_channel("9/10", exact))


def kappa_tilde(rounded: bool = True) -> Channel:
    """Player-1 garbling taking the shared 0.9 signal to a 0.85-accurate one.

    ``rounded=True`` gives the four-digit rounded kernel with rows
    renormalized (float); otherwise the exact kernel 49/52 on the diagonal,
    1/52 elsewhere.
    """
    if rounded:
        return Channel.normalized(GUESS_STATES, GUESS_STATES, KAPPA_TILDE_ROUNDED, exact=False)
    return Channel.symmetric(GUESS_STATES, Fraction(49, 52))


def matching_pennies(x_labels=(0, 1), exact: bool = True) -> Game:
    """State-independent matching pennies; value zero under any information."""
    base = [[1, -1], [-1, 1]]
    cost = [[[v for v in row] for row in base] for _ in x_labels]
    return Game(tuple(x_labels), (0, 1), (0, 1), arith.asarray(cost, exact))


def guessing_cost(labels=(0, 1), exact: bool = True) -> Game:
    """Single-agent 0-1 loss ``c(x, u) = 1{u != x}``."""
    n = len(labels)
    return Game.single_agent(labels, labels, arith.asarray([[int(u != x) for u in range(n)] for x in range(n)], exact))


def bsc_pair(flip, exact: bool = True) -> PairMeasure:
    return PairMeasure.from_channel(ProbVector.uniform((0, 1), exact), bsc(arith.parse_scalar(flip, exact)))


def gaussian_bump_density(means: dict, sigma: float):
    """Unnormalized Gaussian bumps ``f(y, x) = exp(-(y - m_x)^2 / 2 sigma^2)``."""

    def density(y, x):
        return np.exp(-((np.asarray(y) - means[x]) ** 2) / (2 * sigma**2))

    return density


# ---------------------------------------------------------------- random draws

DENOM = 1000


def random_prob(rng: np.random.Generator, n: int, exact: bool = False) -> np.ndarray:
    if exact:
        w = rng.integers(1, 21, size=n)
        s = int(w.sum())
        return arith.asarray([Fraction(int(v), s) for v in w], True)
    return rng.dirichlet(np.ones(n))


def random_channel(rng, input_labels, n_out: int, exact: bool = False, output_labels=None) -> Channel:
    rows = [random_prob(rng, n_out, exact) for _ in input_labels]
    out = tuple(range(n_out)) if output_labels is None else tuple(output_labels)
    return Channel(tuple(input_labels), out, np.array(rows, dtype=object if exact else float))


def random_structure(
    rng, nx: int, ny1: int, ny2: int, exact: bool = False, cond_independent: bool = False
) -> InfoStructure:
    xs = tuple(range(nx))
    if cond_independent:
        zeta = ProbVector(xs, random_prob(rng, nx, exact))
        return make_cond_independent(zeta, random_channel(rng, xs, ny1, exact), random_channel(rng, xs, ny2, exact))
    joint = random_prob(rng, nx * ny1 * ny2, exact).reshape(nx, ny1, ny2)
    return InfoStructure(xs, tuple(range(ny1)), tuple(range(ny2)), joint)


def random_game(rng, nx: int, nu1: int, nu2: int, exact: bool = False) -> Game:
    """Costs i.i.d. uniform on [-1, 1]; exact mode draws from the grid ``k / DENOM``."""
    shape = (nx, nu1, nu2)
    if exact:
        ks = rng.integers(-DENOM, DENOM + 1, size=shape)
        cost = arith.asarray(np.vectorize(lambda k: Fraction(int(k), DENOM), otypes=[object])(ks), True)
    else:
        cost = rng.uniform(-1.0, 1.0, size=shape)
    return Game(tuple(range(nx)), tuple(range(nu1)), tuple(range(nu2)), cost)
