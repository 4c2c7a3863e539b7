"""Single-agent comparison of experiments.

``check_garbling`` decides whether one state-signal pair is a stochastic
degradation of another. A feasible answer carries the kernel; an infeasible
one carries a bounded cost table, read off the Farkas certificate, on which
the degraded pair does strictly better than anything reachable by garbling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import arith, lp
from .core import Channel, Game, PairMeasure, garble_pair
from .errors import ArithmeticFailure, PriorMismatchError
from .solver import single_agent_value


@dataclass(frozen=True, eq=False)
class GarblingResult:
    feasible: bool
    kernel: Channel | None = None
    separating_cost: np.ndarray | None = None
    margin: object = None
    x_labels: tuple = ()
    y_labels: tuple = ()
    farkas: np.ndarray | None = None

    def separating_problem(self) -> Game:
        """The separating cost as a decision problem whose actions are the target signals."""
        if self.feasible:
            raise ValueError("feasible garbling has no separating cost")
        return Game.single_agent(self.x_labels, self.y_labels, self.separating_cost)


def pairing(f: np.ndarray, pair: PairMeasure):
    """``<pair, f> = sum_{x,y} f(x, y) pair(x, y)``."""
    t, g = arith.harmonize(pair.table, f)
    return (t * g).sum()


def _check_prior(a: PairMeasure, b: PairMeasure) -> None:
    if a.x_labels != b.x_labels or not arith.allclose(a.prior.mass, b.prior.mass):
        raise PriorMismatchError("pairs must share the state labels and the prior")


def check_garbling(mu_pair: PairMeasure, nu_pair: PairMeasure, *, exact: bool | None = None) -> GarblingResult:
    """Is ``nu_pair`` a garbling ``κ mu_pair`` of ``mu_pair``?

    Equalities are imposed only on states of positive prior mass.
    """
    _check_prior(mu_pair, nu_pair)
    if exact is None:
        exact = mu_pair.exact and nu_pair.exact
    mu = arith.to_mode(mu_pair.table, exact)
    nu = arith.to_mode(nu_pair.table, exact)
    zeta = mu.sum(axis=1)
    support = [x for x in range(len(zeta)) if not arith.is_zero(zeta[x], exact)]
    na, nb = mu.shape[1], nu.shape[1]
    nvar = na * nb
    one = arith.asarray([1], exact)[0]
    rows, rhs = [], []
    for y in range(na):
        r = arith.zeros(nvar, exact)
        r[y * nb : (y + 1) * nb] = one
        rows.append(r)
        rhs.append(one)
    for x in support:
        for t in range(nb):
            r = arith.zeros(nvar, exact)
            r[t::nb] = mu[x, :]
            rows.append(r)
            rhs.append(nu[x, t])
    prog = lp.LinearProgram(arith.zeros(nvar, exact), np.array(rows, dtype=mu.dtype), np.array(rhs, dtype=mu.dtype))
    cert = lp.solve(prog)
    xl, yl = mu_pair.x_labels, nu_pair.y_labels
    if cert.optimal:
        k = cert.primal.reshape(na, nb)
        if not exact:
            k = np.clip(k.astype(float), 0.0, None)
            k = k / k.sum(axis=1, keepdims=True)
        kernel = Channel(mu_pair.y_labels, nu_pair.y_labels, k)
        got = garble_pair(PairMeasure(xl, mu_pair.y_labels, mu), kernel).table
        if not arith.allclose(got[support], nu[support], tol=1e-8):
            raise ArithmeticFailure("recovered kernel does not reproduce the target pair")
        return GarblingResult(True, kernel=kernel, x_labels=xl, y_labels=yl)
    w = cert.farkas
    f = arith.zeros((len(zeta), nb), exact)
    for i, x in enumerate(support):
        f[x, :] = w[na + i * nb : na + (i + 1) * nb]
    f = _normalize_cost(f, exact)
    best = min_garbled_pairing(mu_pair, f, exact=exact)
    margin = best - pairing(f, PairMeasure(xl, yl, nu))
    if not margin > 0:
        raise ArithmeticFailure(f"separating cost has non-positive margin {margin}")
    return GarblingResult(False, separating_cost=arith.frozen(f), margin=margin, x_labels=xl, y_labels=yl, farkas=w)


def _normalize_cost(f: np.ndarray, exact: bool) -> np.ndarray:
    """Center each state's row and scale to sup-norm one.

    Per-state constants add the same amount to both sides of the separation
    because the compared pairs share the prior.
    """
    f = f.copy()
    for x in range(f.shape[0]):
        row = f[x]
        if len(row):
            mid = (max(row) + min(row)) / 2
            f[x] = row - mid
    scale = max(abs(v) for v in f.ravel())
    if scale > 0:
        f = f / scale
    if not exact:
        f = f.astype(float)
    return f


def min_garbled_pairing(mu_pair: PairMeasure, f: np.ndarray, *, exact: bool | None = None):
    """``min_κ <κ mu_pair, f>``, solved as an LP over stochastic kernels."""
    if exact is None:
        exact = mu_pair.exact and arith.is_exact(f)
    mu = arith.to_mode(mu_pair.table, exact)
    f = arith.to_mode(np.asarray(f), exact)
    na, nb = mu.shape[1], f.shape[1]
    # coefficient of κ(t|y) is sum_x mu(x, y) f(x, t)
    coef = (mu.T @ f).reshape(-1)
    a_eq = arith.zeros((na, na * nb), exact)
    for y in range(na):
        a_eq[y, y * nb : (y + 1) * nb] = 1
    a_eq = arith.asarray(a_eq, exact)
    cert = lp.solve(lp.LinearProgram(coef, a_eq, arith.asarray([1] * na, exact)))
    if not cert.optimal:
        raise ArithmeticFailure(f"kernel minimization reported {cert.status}")
    return cert.objective_value


@dataclass(frozen=True, eq=False)
class BatteryReport:
    values: list
    mu_dominates: bool


def blackwell_battery(mu_pair: PairMeasure, nu_pair: PairMeasure, costs: list[Game]) -> BatteryReport:
    """Optimal single-agent values ``(J*(mu), J*(nu))`` for each cost in ``costs``."""
    _check_prior(mu_pair, nu_pair)
    values = []
    dominates = True
    for cost in costs:
        a = single_agent_value(cost, mu_pair).value
        b = single_agent_value(cost, nu_pair).value
        values.append((a, b))
        exact = mu_pair.exact and nu_pair.exact and cost.exact
        if not (a <= b if exact else float(a) <= float(b) + arith.TOL):
            dominates = False
    return BatteryReport(values, dominates)
