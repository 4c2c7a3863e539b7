"""Dense two-phase primal simplex with Bland's rule.

Works on numpy ``object`` arrays of Fractions (exact) or ``float64`` arrays.
Every solve returns an :class:`LpCertificate` that is checked before it is
handed back: optimal results carry a dual solution with zero duality gap,
infeasible results carry a Farkas vector.

Conventions for a program ``opt c.x  s.t.  A_eq x = b_eq,  A_ub x <= b_ub``
with ``x_j >= 0`` unless ``free[j]``:

* ``dual`` is ordered ``[eq rows..., ub rows...]`` and satisfies
  ``b.y == objective``; for ``min`` the reduced costs ``c - A^T y`` are
  ``>= 0`` on bounded variables, ``== 0`` on free ones, and ``y_ub <= 0``
  (all signs flip for ``max``).
* ``farkas`` ``w`` (same ordering) has ``w_ub >= 0``, ``(A^T w)_j >= 0`` on
  bounded variables, ``== 0`` on free ones, and ``b.w < 0``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import arith
from .errors import ArithmeticFailure, DimensionError

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

# float thresholds: pivot entries and reduced costs below these count as zero
PIVOT_TOL = 1e-10
COST_TOL = 1e-9
# float tableaus are rebuilt from the original data this often (and before stopping)
REFACTOR_EVERY = 10
CERT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class LinearProgram:
    c: np.ndarray
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    a_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    free: np.ndarray | None = None
    sense: str = "min"

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")
        c = _as(self.c)
        n = c.shape[0]
        a_eq, b_eq = _block(self.a_eq, self.b_eq, n, "equality")
        a_ub, b_ub = _block(self.a_ub, self.b_ub, n, "inequality")
        arrays = arith.harmonize(c, a_eq, b_eq, a_ub, b_ub)
        for a in arrays:
            if not arith.is_exact(a) and not np.all(np.isfinite(a)):
                raise ValueError("non-finite LP coefficients")
        free = np.zeros(n, dtype=bool) if self.free is None else np.asarray(self.free, dtype=bool)
        if free.shape != (n,):
            raise DimensionError("free mask has wrong length")
        for name, a in zip(("c", "a_eq", "b_eq", "a_ub", "b_ub"), arrays):
            object.__setattr__(self, name, arith.frozen(a))
        object.__setattr__(self, "free", arith.frozen(free))

    @property
    def exact(self) -> bool:
        return arith.is_exact(self.c)

    @property
    def n_vars(self) -> int:
        return self.c.shape[0]

    @property
    def n_eq(self) -> int:
        return self.a_eq.shape[0]

    @property
    def n_ub(self) -> int:
        return self.a_ub.shape[0]

    def stacked(self) -> tuple[np.ndarray, np.ndarray]:
        return np.vstack([self.a_eq, self.a_ub]), np.concatenate([self.b_eq, self.b_ub])


def _as(values) -> np.ndarray:
    if isinstance(values, np.ndarray):
        return arith.asarray(values, arith.is_exact(values))
    return arith.asarray(values)


def _block(a, b, n, what):
    if a is None:
        if b is not None and len(b):
            raise DimensionError(f"{what} rhs given without a matrix")
        return arith.zeros((0, n), True), arith.zeros(0, True)
    a = _as(a)
    b = _as(b)
    if a.size == 0 and b.size == 0:
        return arith.zeros((0, n), arith.is_exact(a)), arith.zeros(0, arith.is_exact(b))
    if a.ndim != 2 or a.shape[1] != n or b.shape != (a.shape[0],):
        raise DimensionError(f"{what} block has shape {a.shape} / rhs {b.shape}, expected (m, {n})")
    return a, b


@dataclass(frozen=True, eq=False)
class LpCertificate:
    status: str
    primal: np.ndarray | None = None
    dual: np.ndarray | None = None
    farkas: np.ndarray | None = None
    objective_value: object = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def solve(lp: LinearProgram, *, max_iter: int | None = None, verbose: bool = False) -> LpCertificate:
    """Solve ``lp`` and return a verified certificate.

    Raises :class:`ArithmeticFailure` if the float path hits the iteration cap
    or produces a certificate that does not check out.
    """
    cert = _Simplex(lp, max_iter=max_iter, verbose=verbose).run()
    problems = certificate_errors(lp, cert)
    if problems:
        raise ArithmeticFailure("LP certificate failed verification (" + "; ".join(problems) + "); use rational mode")
    return cert


class _Simplex:
    def __init__(self, lp: LinearProgram, max_iter: int | None, verbose: bool):
        self.lp = lp
        self.exact = lp.exact
        self.eps = 0 if self.exact else PIVOT_TOL
        self.cost_eps = 0 if self.exact else COST_TOL
        self.verbose = verbose
        a, b = lp.stacked()
        n = lp.n_vars
        m_eq = lp.n_eq
        m = a.shape[0]
        # standard-form columns: x+ for every var, x- for free vars, one slack per ub row
        cols = [a[:, j] for j in range(n)]
        self.neg_col = {}
        for j in range(n):
            if lp.free[j]:
                self.neg_col[j] = len(cols)
                cols.append(-a[:, j])
        for i in range(lp.n_ub):
            e = arith.zeros(m, self.exact)
            e[m_eq + i] = 1
            cols.append(e)
        n_std = len(cols)
        a_std = np.column_stack(cols) if cols else arith.zeros((m, 0), self.exact)
        if not self.exact:
            a_std = a_std.astype(float)
        cost = arith.zeros(n_std, self.exact)
        sign = 1 if lp.sense == "min" else -1
        for j in range(n):
            cost[j] = sign * lp.c[j]
            if j in self.neg_col:
                cost[self.neg_col[j]] = -sign * lp.c[j]
        self.n_std = n_std
        self.cost = cost
        self.m = m
        # drop identically-zero rows; they are either vacuous or an immediate certificate
        orig = a[:, :n] if n else a
        self.keep = []
        self.trivial_farkas = None
        for i in range(m):
            if n and any(not arith.is_zero(v, self.exact, self.eps) for v in orig[i]):
                self.keep.append(i)
                continue
            bi = b[i]
            is_ub = i >= m_eq
            bad = (bi < 0 and not arith.is_zero(bi, self.exact, self.eps)) if is_ub else not arith.is_zero(bi, self.exact, self.eps)
            if bad and self.trivial_farkas is None:
                w = arith.zeros(m, self.exact)
                w[i] = 1 if is_ub or bi < 0 else -1
                self.trivial_farkas = w
        self.a_std = a_std[self.keep] if self.keep else arith.zeros((0, n_std), self.exact)
        self.b_std = b[self.keep] if self.keep else arith.zeros(0, self.exact)
        self.max_iter = max_iter or 50 * (len(self.keep) + n_std + 10)
        self.iterations = 0

    # tableau layout: rows 0..r-1 constraints, row r objective; columns: std vars, artificials, rhs
    def _build(self):
        r = len(self.keep)
        n = self.n_std
        self.flip = arith.zeros(r, self.exact)
        t = arith.zeros((r + 1, n + r + 1), self.exact)
        for i in range(r):
            s = -1 if self.b_std[i] < 0 else 1
            self.flip[i] = s
            t[i, :n] = self.a_std[i] * s
            t[i, n + i] = 1
            t[i, -1] = self.b_std[i] * s
        # phase-1 reduced costs: 1 on artificials minus column sums
        t[r, :n] = -t[:r, :n].sum(axis=0) if r else 0
        t[r, -1] = -t[:r, -1].sum() if r else 0
        if self.exact:
            t = arith.asarray(t, True)
            self.flip = arith.asarray(self.flip, True)
        self.t = t
        self.basis = [n + i for i in range(r)]
        self.r = r
        if not self.exact:
            self.a_full = t[:r, :-1].copy()
            self.b_full = t[:r, -1].copy()
            self.phase_cost = np.concatenate([np.zeros(n), np.ones(r)])
            self.stale = 0

    def _refactor(self):
        """Recompute the float tableau from the current basis."""
        t, r = self.t, self.r
        self.stale = 0
        if not r:
            return
        basis_matrix = self.a_full[:, self.basis]
        try:
            t[:r, :-1] = np.linalg.solve(basis_matrix, self.a_full)
            t[:r, -1] = np.linalg.solve(basis_matrix, self.b_full)
            y = np.linalg.solve(basis_matrix.T, self.phase_cost[self.basis])
        except np.linalg.LinAlgError as exc:
            raise ArithmeticFailure("singular basis in float simplex; use rational mode") from exc
        t[np.abs(t) < 1e-14] = 0.0
        for i, j in enumerate(self.basis):
            t[:r, j] = 0.0
            t[i, j] = 1.0
        t[r, :-1] = self.phase_cost - self.a_full.T @ y
        t[r, self.basis] = 0.0
        t[r, -1] = -(self.phase_cost[self.basis] @ t[:r, -1])

    def _pivot(self, row: int, col: int):
        t = self.t
        t[row] = t[row] / t[row, col]
        if self.exact:
            colv = t[:, col]
            rows = [i for i in range(t.shape[0]) if i != row and colv[i] != 0]
            if rows:
                pr = t[row]
                nz = [j for j in range(t.shape[1]) if pr[j] != 0]
                sub = np.ix_(rows, nz)
                t[sub] = t[sub] - np.outer(t[rows, col], pr[nz])
        else:
            f = t[:, col].copy()
            f[row] = 0
            t -= np.outer(f, t[row])
            t[np.abs(t) < 1e-14] = 0.0
            t[row, col] = 1.0
            self.stale += 1
        self.basis[row] = col
        self.iterations += 1
        if self.verbose and log.isEnabledFor(logging.DEBUG):
            log.debug("pivot row=%d col=%d\n%s", row, col, t)

    def _iterate(self, allowed: int) -> str:
        t, r = self.t, self.r
        while True:
            if self.iterations > self.max_iter:
                raise ArithmeticFailure(f"simplex exceeded {self.max_iter} pivots; use rational mode")
            if not self.exact and self.stale >= REFACTOR_EVERY:
                self._refactor()
            d = t[r, :allowed]
            q = next((j for j in range(allowed) if d[j] < 0 and not arith.is_zero(d[j], self.exact, self.cost_eps)), None)
            if q is None:
                if not self.exact and self.stale:
                    self._refactor()
                    continue
                return OPTIMAL
            best = None
            for i in range(r):
                a = t[i, q]
                if a > 0 and not arith.is_zero(a, self.exact, self.eps):
                    ratio = t[i, -1] / a
                    key = (ratio, self.basis[i])
                    if best is None or self._less(key, best[0]):
                        best = (key, i)
            if best is None:
                if not self.exact and self.stale:
                    self._refactor()
                    continue
                return UNBOUNDED
            self._pivot(best[1], q)

    def _less(self, key, other) -> bool:
        (ra, ba), (rb, bb) = key, other
        if self.exact:
            return (ra, ba) < (rb, bb)
        if abs(ra - rb) <= 1e-12 * max(1.0, abs(rb)):
            return ba < bb
        return ra < rb

    def run(self) -> LpCertificate:
        lp = self.lp
        if self.trivial_farkas is not None:
            return LpCertificate(INFEASIBLE, farkas=self.trivial_farkas)
        self._build()
        n, r = self.n_std, self.r
        status = self._iterate(n)
        if status != OPTIMAL:
            # phase 1 is bounded below by zero; only float noise gets here
            raise ArithmeticFailure("phase 1 reported unbounded; use rational mode")
        t = self.t
        infeas = -t[r, -1]
        if not arith.is_zero(infeas, self.exact, CERT_TOL):
            # phase-1 duals: reduced cost of artificial i is 1 - y_i
            y1 = np.array([1 - t[r, n + i] for i in range(r)], dtype=t.dtype)
            w = -y1 * self.flip
            return LpCertificate(INFEASIBLE, farkas=self._expand(w), iterations=self.iterations)
        self._evict_artificials()
        # phase-2 objective row
        cb = np.array([self.cost[j] if j < n else 0 for j in self.basis], dtype=t.dtype)
        full_cost = np.concatenate([self.cost, arith.zeros(r, self.exact)])
        if r:
            t[r, :-1] = full_cost - cb @ t[:r, :-1]
            t[r, -1] = -(cb @ t[:r, -1])
        else:
            t[r, :-1] = full_cost
            t[r, -1] = 0
        if not self.exact:
            self.phase_cost = full_cost.astype(float)
            self._refactor()
        status = self._iterate(n)
        if status == UNBOUNDED:
            return LpCertificate(UNBOUNDED, iterations=self.iterations)
        x_std = arith.zeros(n, self.exact)
        for i, j in enumerate(self.basis):
            if j < n:
                x_std[j] = t[i, -1]
        x = x_std[: lp.n_vars].copy()
        for j, k in self.neg_col.items():
            x[j] = x[j] - x_std[k]
        # reduced cost of artificial i in phase 2 is -y_i
        y = np.array([-t[r, n + i] for i in range(r)], dtype=t.dtype) * self.flip if r else arith.zeros(0, self.exact)
        y = self._expand(y)
        obj = -t[r, -1]
        if lp.sense == "max":
            obj = -obj
            y = -y
        if not self.exact:
            x = x.astype(float)
            y = y.astype(float)
            obj = float(obj)
        return LpCertificate(OPTIMAL, primal=x, dual=y, objective_value=obj, iterations=self.iterations)

    def _evict_artificials(self):
        t, n = self.t, self.n_std
        for i in range(self.r):
            if self.basis[i] < n:
                continue
            q = next((j for j in range(n) if not arith.is_zero(t[i, j], self.exact, self.eps)), None)
            if q is not None:
                self._pivot(i, q)
            # otherwise the row is redundant and its artificial stays basic at zero

    def _expand(self, v: np.ndarray) -> np.ndarray:
        out = arith.zeros(self.m, self.exact)
        for k, i in enumerate(self.keep):
            out[i] = v[k]
        return out if self.exact else out.astype(float)


def _tol(exact: bool, scale=1.0):
    return 0 if exact else CERT_TOL * max(1.0, float(scale))


def certificate_errors(lp: LinearProgram, cert: LpCertificate) -> list[str]:
    """Mechanically re-check a certificate; an empty list means it verifies."""
    a, b = lp.stacked()
    exact = lp.exact and (cert.primal is None or arith.is_exact(cert.primal))
    m_eq = lp.n_eq
    errs = []
    scale = max([1.0] + [abs(float(v)) for v in np.concatenate([lp.c, b]).ravel()])
    if cert.status == INFEASIBLE:
        w = cert.farkas
        if w is None or w.shape != (a.shape[0],):
            return ["missing Farkas vector"]
        tol = _tol(exact, scale)
        if np.any(w[m_eq:] < -tol if not exact else w[m_eq:] < 0):
            errs.append("Farkas multipliers of inequality rows must be nonnegative")
        aw = w @ a if a.shape[0] else arith.zeros(lp.n_vars, exact)
        for j in range(lp.n_vars):
            if lp.free[j]:
                if not arith.is_zero(aw[j], exact, tol):
                    errs.append(f"Farkas combination nonzero on free variable {j}")
            elif aw[j] < 0 and not arith.is_zero(aw[j], exact, tol):
                errs.append(f"Farkas combination negative on variable {j}")
        bw = w @ b if b.shape[0] else 0
        if not bw < 0:
            errs.append(f"Farkas value b.w = {bw} is not negative")
        return errs
    if cert.status == UNBOUNDED:
        return errs
    x, y = cert.primal, cert.dual
    tol = _tol(exact, scale)
    if np.any(~lp.free & (x < -tol if not exact else x < 0)):
        errs.append("primal bound violated")
    if m_eq:
        res = lp.a_eq @ x - lp.b_eq
        if not all(arith.is_zero(v, exact, tol) for v in res):
            errs.append("equality rows violated")
    if lp.n_ub:
        res = lp.a_ub @ x - lp.b_ub
        if np.any(res > tol if not exact else res > 0):
            errs.append("inequality rows violated")
    sgn = 1 if lp.sense == "min" else -1
    yub = y[m_eq:] * sgn
    if np.any(yub > tol if not exact else yub > 0):
        errs.append("inequality duals have the wrong sign")
    red = (lp.c - (y @ a if a.shape[0] else 0)) * sgn
    for j in range(lp.n_vars):
        if lp.free[j]:
            if not arith.is_zero(red[j], exact, tol):
                errs.append(f"dual equality violated at free variable {j}")
        elif red[j] < 0 and not arith.is_zero(red[j], exact, tol):
            errs.append(f"dual inequality violated at variable {j}")
    primal_obj = lp.c @ x
    dual_obj = b @ y if b.shape[0] else 0
    if not arith.is_zero(primal_obj - dual_obj, exact, tol):
        errs.append(f"duality gap {primal_obj - dual_obj}")
    if not arith.is_zero(primal_obj - cert.objective_value, exact, tol):
        errs.append("reported objective differs from c.x")
    return errs


def matrix_game(payoff, *, exact: bool | None = None) -> tuple[object, np.ndarray, np.ndarray]:
    """Value and optimal mixed strategies of a matrix game.

    ``payoff[i, j]`` is paid by the row player (minimizer) to the column player.
    Returns ``(value, row_strategy, column_strategy)``; the column strategy is
    read from the duals of the same solve.
    """
    p = arith.asarray(payoff, exact)
    ex = arith.is_exact(p)
    m, n = p.shape
    # variables: row mix (m), value v (free); min v s.t. p^T s - v <= 0, sum s = 1
    one = Fraction(1) if ex else 1.0
    c = arith.zeros(m + 1, ex)
    c[m] = one
    a_ub = arith.zeros((n, m + 1), ex)
    a_ub[:, :m] = p.T
    a_ub[:, m] = -one
    a_eq = arith.zeros((1, m + 1), ex)
    a_eq[0, :m] = one
    free = np.zeros(m + 1, dtype=bool)
    free[m] = True
    lp = LinearProgram(c, a_eq, arith.asarray([1], ex), a_ub, arith.zeros(n, ex), free)
    cert = solve(lp)
    return cert.objective_value, cert.primal[:m], -cert.dual[1:]
