"""Deciding whether one information structure is better for the maximizer than another.

``check_order(nu, mu)`` asks for kernels with ``κ1 ν = κ2 μ``: κ1 garbles
ν's minimizer signal, κ2 garbles μ's maximizer signal. For conditionally
independent inputs the question splits into two single-agent garbling checks
and a failure comes with a game on which ``V*(G, ν) > V*(G, μ)``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import arith, lp
from .blackwell import GarblingResult, check_garbling
from .core import (
    Channel,
    Game,
    InfoStructure,
    apply_garbling,
    marginal,
    projection_kernel,
    refine_signal,
)
from .errors import ArithmeticFailure, InfoOrderError, NotApplicableError, PriorMismatchError
from .instances import random_channel, random_game, random_structure
from .solver import value

log = logging.getLogger(__name__)

JOINT = "joint"
DECOMPOSED = "decomposed"


@dataclass(frozen=True, eq=False)
class Witness:
    game: Game
    value_nu: object
    value_mu: object
    side: int

    @property
    def margin(self):
        return self.value_nu - self.value_mu


@dataclass(frozen=True, eq=False)
class OrderResult:
    ordered: bool
    mode: str
    kappa1: Channel | None = None
    kappa2: Channel | None = None
    common: InfoStructure | None = None
    witness: Witness | None = None
    farkas: np.ndarray | None = None
    sides: tuple[GarblingResult, GarblingResult] | None = None


def _check_inputs(nu: InfoStructure, mu: InfoStructure) -> None:
    if nu.x_labels != mu.x_labels or not arith.allclose(nu.prior.mass, mu.prior.mass):
        raise PriorMismatchError("structures must share the state labels and the prior")


def check_order(nu: InfoStructure, mu: InfoStructure, *, mode: str | None = None, exact: bool | None = None) -> OrderResult:
    """Decide ``ν ≲ μ`` (μ weakly better for the maximizer on every game).

    ``mode`` defaults to decomposed when both inputs carry the
    conditional-independence flag and to the joint two-kernel LP otherwise.
    """
    _check_inputs(nu, mu)
    if exact is None:
        exact = nu.exact and mu.exact
    if mode is None:
        mode = DECOMPOSED if nu.cond_independent and mu.cond_independent else JOINT
    if mode == DECOMPOSED:
        if not (nu.cond_independent and mu.cond_independent):
            raise NotApplicableError("decomposed mode needs conditionally independent inputs")
        return _decomposed(nu, mu, exact)
    if mode != JOINT:
        raise ValueError(f"unknown mode {mode!r}")
    return _joint(nu, mu, exact)


def _joint(nu: InfoStructure, mu: InfoStructure, exact: bool) -> OrderResult:
    n = arith.to_mode(nu.joint, exact)
    m = arith.to_mode(mu.joint, exact)
    nx = n.shape[0]
    p1, a1 = n.shape[1], m.shape[1]  # κ1: ν's Y1 -> μ's Y1
    p2, b2 = m.shape[2], n.shape[2]  # κ2: μ's Y2 -> ν's Y2
    nk1 = p1 * a1
    nvar = nk1 + p2 * b2
    one = arith.asarray([1], exact)[0]
    zeta = n.sum(axis=(1, 2))
    support = [x for x in range(nx) if not arith.is_zero(zeta[x], exact)]
    rows, rhs = [], []
    for y in range(p1):
        r = arith.zeros(nvar, exact)
        r[y * a1 : (y + 1) * a1] = one
        rows.append(r)
        rhs.append(one)
    for y in range(p2):
        r = arith.zeros(nvar, exact)
        r[nk1 + y * b2 : nk1 + (y + 1) * b2] = one
        rows.append(r)
        rhs.append(one)
    for x in support:
        for a in range(a1):
            for b in range(b2):
                r = arith.zeros(nvar, exact)
                # + sum_y1 ν(x, y1, b) κ1(a|y1)
                r[a:nk1:a1] = n[x, :, b]
                # - sum_y2 μ(x, a, y2) κ2(b|y2)
                r[nk1 + b :: b2] = -m[x, a, :]
                rows.append(r)
                rhs.append(arith.zeros((), exact)[()])
    prog = lp.LinearProgram(arith.zeros(nvar, exact), np.array(rows, dtype=n.dtype), np.array(rhs, dtype=n.dtype))
    cert = lp.solve(prog)
    if not cert.optimal:
        return OrderResult(False, JOINT, farkas=cert.farkas)
    k1 = _stochastic(cert.primal[:nk1].reshape(p1, a1), exact)
    k2 = _stochastic(cert.primal[nk1:].reshape(p2, b2), exact)
    kappa1 = Channel(nu.y1_labels, mu.y1_labels, k1)
    kappa2 = Channel(mu.y2_labels, nu.y2_labels, k2)
    return _ordered(nu, mu, kappa1, kappa2, JOINT, exact)


def _stochastic(k: np.ndarray, exact: bool) -> np.ndarray:
    if exact:
        return k
    k = np.clip(k.astype(float), 0.0, None)
    return k / k.sum(axis=1, keepdims=True)


def _ordered(nu, mu, kappa1, kappa2, mode, exact, sides=None) -> OrderResult:
    left = apply_garbling(nu.to_mode(exact), 1, kappa1)
    right = apply_garbling(mu.to_mode(exact), 2, kappa2)
    if not arith.allclose(left.joint, right.joint, tol=1e-8):
        raise ArithmeticFailure("recovered kernels do not meet at a common structure")
    return OrderResult(True, mode, kappa1=kappa1, kappa2=kappa2, common=left, sides=sides)


def _decomposed(nu: InfoStructure, mu: InfoStructure, exact: bool) -> OrderResult:
    side1 = check_garbling(marginal(nu, 1), marginal(mu, 1), exact=exact)
    side2 = check_garbling(marginal(mu, 2), marginal(nu, 2), exact=exact)
    sides = (side1, side2)
    if side1.feasible and side2.feasible:
        return _ordered(nu, mu, side1.kernel, side2.kernel, DECOMPOSED, exact, sides)
    failed = 1 if not side1.feasible else 2
    witness = _build_witness(nu, mu, failed, sides[failed - 1], exact)
    return OrderResult(False, DECOMPOSED, witness=witness, sides=sides)


def _witness_cost(nu: InfoStructure, mu: InfoStructure, side: int, sep: GarblingResult) -> Game:
    f = sep.separating_cost
    if side == 1:
        # minimizer picks a point of μ's Y1; maximizer idle
        return Game(mu.x_labels, mu.y1_labels, (0,), f[:, :, None])
    return Game(mu.x_labels, (0,), nu.y2_labels, -f[:, None, :])


def _build_witness(nu, mu, side, sep, exact) -> Witness:
    game = _witness_cost(nu, mu, side, sep)
    v_nu = value(game, nu, exact=exact).value
    v_mu = value(game, mu, exact=exact).value
    if not v_nu - v_mu > (0 if exact else arith.TOL):
        raise InfoOrderError(f"witness game failed to separate: V(nu)={v_nu}, V(mu)={v_mu}")
    return Witness(game, v_nu, v_mu, side)


def witness_game(
    nu: InfoStructure,
    mu: InfoStructure,
    failed_side: int,
    separating_cost: GarblingResult | None = None,
    *,
    exact: bool | None = None,
) -> Game:
    """Game on which ``V*(G, ν) > V*(G, μ)``, built from the failed side's separating cost.

    Only offered for conditionally independent inputs; the values are solved
    and checked before the game is returned.
    """
    _check_inputs(nu, mu)
    if not (nu.cond_independent and mu.cond_independent):
        raise NotApplicableError("witness extraction needs conditionally independent structures")
    if failed_side not in (1, 2):
        raise ValueError("failed_side must be 1 or 2")
    if exact is None:
        exact = nu.exact and mu.exact
    if separating_cost is None:
        if failed_side == 1:
            separating_cost = check_garbling(marginal(nu, 1), marginal(mu, 1), exact=exact)
        else:
            separating_cost = check_garbling(marginal(mu, 2), marginal(nu, 2), exact=exact)
    if separating_cost.feasible:
        raise NotApplicableError(f"side {failed_side} is a garbling; no witness exists there")
    return _build_witness(nu, mu, failed_side, separating_cost, exact).game


# ------------------------------------------------------------ monotonicity runs


@dataclass
class SuiteReport:
    seed: int
    trials: int
    checks: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _leq(a, b, exact: bool, tol: float) -> bool:
    return bool(a <= b) if exact else float(a) <= float(b) + tol


def _dump(**objs) -> dict:
    out = {}
    for k, v in objs.items():
        if isinstance(v, InfoStructure):
            out[k] = {"joint": arith.dump_array(v.joint)}
        elif isinstance(v, Game):
            out[k] = {"cost": arith.dump_array(v.cost)}
        elif isinstance(v, Channel):
            out[k] = {"matrix": arith.dump_array(v.matrix)}
        else:
            out[k] = arith.fmt(v)
    return out


def _draw_structure(rng, exact, max_size):
    nx, n1, n2 = (int(v) for v in rng.integers(1, max_size + 1, size=3))
    return random_structure(rng, nx, n1, n2, exact)


def _garbling_trial(args) -> tuple[int, list]:
    seq, mu, exact, tol, max_size = args
    rng = np.random.default_rng(seq)
    if mu is None:
        mu = _draw_structure(rng, exact, max_size)
    nu1, nu2 = (int(v) for v in rng.integers(1, max_size + 1, size=2))
    game = random_game(rng, len(mu.x_labels), nu1, nu2, exact)
    game = Game(mu.x_labels, game.u1_labels, game.u2_labels, game.cost)
    k1 = random_channel(rng, mu.y1_labels, int(rng.integers(1, max_size + 1)), exact)
    k2 = random_channel(rng, mu.y2_labels, int(rng.integers(1, max_size + 1)), exact)
    v = value(game, mu, exact=exact).value
    v2 = value(game, apply_garbling(mu, 2, k2), exact=exact).value
    v1 = value(game, apply_garbling(mu, 1, k1), exact=exact).value
    bad = []
    if not _leq(v2, v, exact, tol):
        bad.append({"check": "maximizer garbling raised the value", "V(k2 mu)": arith.fmt(v2), "V(mu)": arith.fmt(v),
                    **_dump(mu=mu, game=game, kappa2=k2)})
    if not _leq(v, v1, exact, tol):
        bad.append({"check": "minimizer garbling lowered the value", "V(mu)": arith.fmt(v), "V(k1 mu)": arith.fmt(v1),
                    **_dump(mu=mu, game=game, kappa1=k1)})
    return 2, bad


def _refinement_trial(args) -> tuple[int, list]:
    seq, mu, exact, tol, max_size = args
    rng = np.random.default_rng(seq)
    if mu is None:
        mu = _draw_structure(rng, exact, max_size)
    nu1, nu2 = (int(v) for v in rng.integers(1, max_size + 1, size=2))
    game = random_game(rng, len(mu.x_labels), nu1, nu2, exact)
    game = Game(mu.x_labels, game.u1_labels, game.u2_labels, game.cost)
    player = int(rng.integers(1, 3))
    extra = random_channel(rng, mu.x_labels, int(rng.integers(1, max_size)) + 1, exact)
    richer = refine_signal(mu, player, extra)
    # forgetting the extra component recovers mu
    assert arith.allclose(
        apply_garbling(richer, player, projection_kernel(richer.signal_labels(player), mu.signal_labels(player), exact)).joint,
        mu.joint,
    )
    v = value(game, mu, exact=exact).value
    vr = value(game, richer, exact=exact).value
    ok = _leq(vr, v, exact, tol) if player == 1 else _leq(v, vr, exact, tol)
    bad = []
    if not ok:
        bad.append({"check": f"extra signal hurt player {player}", "V(mu)": arith.fmt(v), "V(refined)": arith.fmt(vr),
                    **_dump(mu=mu, game=game, extra=extra)})
    return 1, bad


def _run(kind, mu, trials, seed, exact, tol, max_size, jobs) -> SuiteReport:
    seqs = np.random.SeedSequence(seed).spawn(trials)
    tasks = [(s, mu, exact, tol, max_size) for s in seqs]
    report = SuiteReport(seed, trials)
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(kind, tasks, chunksize=max(1, trials // (4 * jobs))))
    else:
        results = [kind(t) for t in tasks]
    for n, bad in results:
        report.checks += n
        report.violations.extend(bad)
    for v in report.violations:
        log.error("monotonicity violation: %s", v)
    return report


def monotonicity_suite(
    mu: InfoStructure | None = None,
    trials: int = 100,
    seed: int = 0,
    *,
    exact: bool = False,
    tol: float = arith.TOL,
    max_size: int = 4,
    refinement: bool = True,
    jobs: int = 1,
) -> SuiteReport:
    """Random checks that garbling a player's signal never helps that player.

    Each trial draws a game (costs uniform on [-1, 1], sizes up to
    ``max_size``) and kernels, and verifies ``V(κ2 μ) <= V(μ) <= V(κ1 μ)``.
    With ``refinement`` a second pass appends a conditionally independent
    component to one player's signal and checks the value moves in that
    player's favor. ``mu=None`` draws a fresh structure per trial.
    """
    report = _run(_garbling_trial, mu, trials, seed, exact, tol, max_size, jobs)
    if refinement:
        extra = refinement_suite(mu, trials, seed + 1, exact=exact, tol=tol, max_size=max_size, jobs=jobs)
        report.checks += extra.checks
        report.violations.extend(extra.violations)
    return report


def refinement_suite(
    mu: InfoStructure | None = None,
    trials: int = 100,
    seed: int = 0,
    *,
    exact: bool = False,
    tol: float = arith.TOL,
    max_size: int = 4,
    jobs: int = 1,
) -> SuiteReport:
    """Extra conditionally independent signal components never hurt their recipient."""
    return _run(_refinement_trial, mu, trials, seed, exact, tol, max_size, jobs)
