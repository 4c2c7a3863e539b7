"""Priors, channels, information structures and games on finite label sets.

All containers are immutable: arrays are copied and locked on construction.
Exact (Fraction) and float payloads are both accepted; operations stay exact
when every operand is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Sequence

import numpy as np

from . import arith
from .arith import TOL
from .errors import (
    AbsoluteContinuityError,
    DegenerateDensityError,
    DimensionError,
    ValidationError,
)

Label = Hashable


def _labels(labels: Sequence[Label], what: str) -> tuple:
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        raise ValidationError(f"duplicate {what} labels: {labels}")
    return labels


def _check_nonnegative(arr: np.ndarray, what: str) -> None:
    bad = arr < 0 if arith.is_exact(arr) else arr < -TOL
    if np.any(bad):
        raise ValidationError(f"{what} has negative entries")


def _check_unit_sums(sums: np.ndarray, exact: bool, what: str) -> None:
    ok = np.all(sums == 1) if exact else np.allclose(np.asarray(sums, dtype=float), 1.0, rtol=0.0, atol=TOL)
    if not ok:
        raise ValidationError(f"{what} does not sum to one: {sums}")


@dataclass(frozen=True, eq=False)
class ProbVector:
    labels: tuple
    mass: np.ndarray

    def __post_init__(self):
        labels = _labels(self.labels, "outcome")
        mass = arith.asarray(self.mass, None if not isinstance(self.mass, np.ndarray) else arith.is_exact(self.mass))
        if mass.shape != (len(labels),):
            raise DimensionError(f"{len(labels)} labels but mass shape {mass.shape}")
        _check_nonnegative(mass, "probability vector")
        _check_unit_sums(np.array([mass.sum()], dtype=mass.dtype), arith.is_exact(mass), "probability vector")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "mass", arith.frozen(mass))

    @property
    def exact(self) -> bool:
        return arith.is_exact(self.mass)

    def __getitem__(self, label):
        return self.mass[self.labels.index(label)]

    def __len__(self):
        return len(self.labels)

    @classmethod
    def uniform(cls, labels: Sequence[Label], exact: bool = True) -> "ProbVector":
        n = len(labels)
        mass = [Fraction(1, n)] * n if exact else [1.0 / n] * n
        return cls(tuple(labels), arith.asarray(mass, exact))

    @classmethod
    def point(cls, labels: Sequence[Label], at: Label, exact: bool = True) -> "ProbVector":
        labels = tuple(labels)
        mass = arith.zeros(len(labels), exact)
        mass[labels.index(at)] = 1
        return cls(labels, arith.asarray(mass, exact))


@dataclass(frozen=True, eq=False)
class Channel:
    """Row-stochastic matrix ``matrix[i, j] = Q(output_j | input_i)``."""

    input_labels: tuple
    output_labels: tuple
    matrix: np.ndarray

    def __post_init__(self):
        ins = _labels(self.input_labels, "input")
        outs = _labels(self.output_labels, "output")
        matrix = self.matrix
        matrix = arith.asarray(matrix, arith.is_exact(matrix) if isinstance(matrix, np.ndarray) else None)
        if matrix.shape != (len(ins), len(outs)):
            raise DimensionError(f"channel matrix shape {matrix.shape} != ({len(ins)}, {len(outs)})")
        _check_nonnegative(matrix, "channel")
        _check_unit_sums(matrix.sum(axis=1), arith.is_exact(matrix), "channel row")
        object.__setattr__(self, "input_labels", ins)
        object.__setattr__(self, "output_labels", outs)
        object.__setattr__(self, "matrix", arith.frozen(matrix))

    @property
    def exact(self) -> bool:
        return arith.is_exact(self.matrix)

    def row(self, label) -> ProbVector:
        return ProbVector(self.output_labels, self.matrix[self.input_labels.index(label)])

    @property
    def rows(self) -> tuple[ProbVector, ...]:
        return tuple(ProbVector(self.output_labels, r) for r in self.matrix)

    def to_mode(self, exact: bool) -> "Channel":
        if exact == self.exact:
            return self
        return Channel(self.input_labels, self.output_labels, arith.to_mode(self.matrix, exact))

    @classmethod
    def normalized(cls, input_labels, output_labels, matrix, exact: bool | None = None) -> "Channel":
        """Build a channel after dividing every row by its sum (for kernels given with rounded entries)."""
        m = arith.asarray(matrix, exact)
        sums = m.sum(axis=1)
        if np.any(sums <= 0):
            raise ValidationError("cannot normalize a row with non-positive sum")
        return cls(input_labels, output_labels, m / sums[:, None])

    @classmethod
    def identity(cls, labels: Sequence[Label], exact: bool = True) -> "Channel":
        n = len(labels)
        m = arith.zeros((n, n), exact)
        for i in range(n):
            m[i, i] = 1
        return cls(tuple(labels), tuple(labels), arith.asarray(m, exact))

    @classmethod
    def constant(cls, input_labels: Sequence[Label], p: ProbVector) -> "Channel":
        """Uninformative kernel: every row equals ``p``."""
        m = np.array([list(p.mass) for _ in input_labels], dtype=p.mass.dtype).reshape(len(input_labels), len(p))
        return cls(tuple(input_labels), p.labels, m)

    @classmethod
    def symmetric(cls, labels: Sequence[Label], correct) -> "Channel":
        """Keep the input with probability ``correct``, else spread evenly over the rest."""
        labels = tuple(labels)
        n = len(labels)
        exact = not isinstance(correct, float)
        c = arith.parse_scalar(correct, exact)
        off = (1 - c) / (n - 1) if n > 1 else 0
        m = [[c if i == j else off for j in range(n)] for i in range(n)]
        return cls(labels, labels, arith.asarray(m, exact))


def bsc(flip, labels: Sequence[Label] = (0, 1)) -> Channel:
    """Binary symmetric channel with crossover probability ``flip``."""
    exact = not isinstance(flip, float)
    e = arith.parse_scalar(flip, exact)
    return Channel(tuple(labels), tuple(labels), arith.asarray([[1 - e, e], [e, 1 - e]], exact))


def compose(outer: Channel, inner: Channel) -> Channel:
    """Kernel ``outer ∘ inner``: apply ``inner`` first, then ``outer``."""
    if inner.output_labels != outer.input_labels:
        raise DimensionError("composed kernels do not share the middle alphabet")
    a, b = arith.harmonize(inner.matrix, outer.matrix)
    return Channel(inner.input_labels, outer.output_labels, a @ b)


@dataclass(frozen=True, eq=False)
class PairMeasure:
    """Joint law of the state and a single signal, ``table[x, y]``."""

    x_labels: tuple
    y_labels: tuple
    table: np.ndarray

    def __post_init__(self):
        xs = _labels(self.x_labels, "state")
        ys = _labels(self.y_labels, "signal")
        t = self.table
        t = arith.asarray(t, arith.is_exact(t) if isinstance(t, np.ndarray) else None)
        if t.shape != (len(xs), len(ys)):
            raise DimensionError(f"pair table shape {t.shape} != ({len(xs)}, {len(ys)})")
        _check_nonnegative(t, "pair measure")
        _check_unit_sums(np.array([t.sum()], dtype=t.dtype), arith.is_exact(t), "pair measure")
        object.__setattr__(self, "x_labels", xs)
        object.__setattr__(self, "y_labels", ys)
        object.__setattr__(self, "table", arith.frozen(t))

    @property
    def exact(self) -> bool:
        return arith.is_exact(self.table)

    @property
    def prior(self) -> ProbVector:
        return ProbVector(self.x_labels, self.table.sum(axis=1))

    @property
    def signal_law(self) -> ProbVector:
        return ProbVector(self.y_labels, self.table.sum(axis=0))

    def channel(self) -> Channel:
        """Conditional law Q(y|x); states of zero prior mass get the uniform row."""
        exact = self.exact
        rows = []
        for x_row in self.table:
            s = x_row.sum()
            if arith.is_zero(s, exact):
                rows.append(arith.asarray([Fraction(1, len(self.y_labels))] * len(self.y_labels), exact))
            else:
                rows.append(x_row / s)
        return Channel(self.x_labels, self.y_labels, np.array(rows, dtype=self.table.dtype))

    @classmethod
    def from_channel(cls, zeta: ProbVector, q: Channel) -> "PairMeasure":
        if q.input_labels != zeta.labels:
            raise DimensionError("channel inputs must match prior labels")
        z, m = arith.harmonize(zeta.mass, q.matrix)
        return cls(zeta.labels, q.output_labels, z[:, None] * m)


@dataclass(frozen=True, eq=False)
class InfoStructure:
    """Joint law ``joint[x, y1, y2]`` of the state and both players' signals."""

    x_labels: tuple
    y1_labels: tuple
    y2_labels: tuple
    joint: np.ndarray
    cond_independent: bool = False

    def __post_init__(self):
        xs = _labels(self.x_labels, "state")
        y1 = _labels(self.y1_labels, "player-1 signal")
        y2 = _labels(self.y2_labels, "player-2 signal")
        j = self.joint
        j = arith.asarray(j, arith.is_exact(j) if isinstance(j, np.ndarray) else None)
        if j.shape != (len(xs), len(y1), len(y2)):
            raise DimensionError(f"joint shape {j.shape} != ({len(xs)}, {len(y1)}, {len(y2)})")
        _check_nonnegative(j, "information structure")
        exact = arith.is_exact(j)
        _check_unit_sums(np.array([j.sum()], dtype=j.dtype), exact, "information structure")
        if self.cond_independent:
            m = j.sum(axis=(1, 2))
            m1 = j.sum(axis=2)
            m2 = j.sum(axis=1)
            lhs = j * m[:, None, None]
            rhs = m1[:, :, None] * m2[:, None, :]
            if not arith.allclose(lhs, rhs):
                raise ValidationError("signals are not conditionally independent given the state")
        object.__setattr__(self, "x_labels", xs)
        object.__setattr__(self, "y1_labels", y1)
        object.__setattr__(self, "y2_labels", y2)
        object.__setattr__(self, "joint", arith.frozen(j))

    @property
    def exact(self) -> bool:
        return arith.is_exact(self.joint)

    @property
    def prior(self) -> ProbVector:
        return ProbVector(self.x_labels, self.joint.sum(axis=(1, 2)))

    def signal_labels(self, player: int) -> tuple:
        _check_player(player)
        return self.y1_labels if player == 1 else self.y2_labels

    def to_mode(self, exact: bool) -> "InfoStructure":
        if exact == self.exact:
            return self
        return InfoStructure(
            self.x_labels, self.y1_labels, self.y2_labels, arith.to_mode(self.joint, exact), self.cond_independent
        )


@dataclass(frozen=True, eq=False)
class Game:
    """Zero-sum cost ``cost[x, u1, u2]``; player 1 minimizes, player 2 maximizes."""

    x_labels: tuple
    u1_labels: tuple
    u2_labels: tuple
    cost: np.ndarray

    def __post_init__(self):
        xs = _labels(self.x_labels, "state")
        u1 = _labels(self.u1_labels, "player-1 action")
        u2 = _labels(self.u2_labels, "player-2 action")
        c = self.cost
        c = arith.asarray(c, arith.is_exact(c) if isinstance(c, np.ndarray) else None)
        if c.shape != (len(xs), len(u1), len(u2)):
            raise DimensionError(f"cost shape {c.shape} != ({len(xs)}, {len(u1)}, {len(u2)})")
        if not u1 or not u2:
            raise DimensionError("action sets must be non-empty")
        object.__setattr__(self, "x_labels", xs)
        object.__setattr__(self, "u1_labels", u1)
        object.__setattr__(self, "u2_labels", u2)
        object.__setattr__(self, "cost", arith.frozen(c))

    @property
    def exact(self) -> bool:
        return arith.is_exact(self.cost)

    @property
    def is_single_agent(self) -> bool:
        return len(self.u2_labels) == 1

    @classmethod
    def single_agent(cls, x_labels, u_labels, cost) -> "Game":
        """Decision problem c(x, u) embedded as a game with a trivial maximizer."""
        c = arith.asarray(cost, arith.is_exact(cost) if isinstance(cost, np.ndarray) else None)
        return cls(tuple(x_labels), tuple(u_labels), (0,), c[:, :, None])

    def to_mode(self, exact: bool) -> "Game":
        if exact == self.exact:
            return self
        return Game(self.x_labels, self.u1_labels, self.u2_labels, arith.to_mode(self.cost, exact))


@dataclass(frozen=True, eq=False)
class ReducedStructure:
    """Product reference measure ``ζ ⊗ q1_bar ⊗ q2_bar`` together with the density of ``base``."""

    base: InfoStructure
    q1_bar: ProbVector
    q2_bar: ProbVector
    density: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not arith.allclose(self.reconstruct(), self.base.joint):
            raise ValidationError("density does not reproduce the joint measure")
        object.__setattr__(self, "density", arith.frozen(self.density))

    def reference(self) -> np.ndarray:
        z, a, b = arith.harmonize(self.base.prior.mass, self.q1_bar.mass, self.q2_bar.mass)
        return z[:, None, None] * a[None, :, None] * b[None, None, :]

    def reconstruct(self) -> np.ndarray:
        ref = self.reference()
        ref, dens = arith.harmonize(ref, self.density)
        return ref * dens


def _check_player(player: int) -> None:
    if player not in (1, 2):
        raise ValueError(f"player must be 1 or 2, got {player!r}")


def make_cond_independent(zeta: ProbVector, q1: Channel, q2: Channel) -> InfoStructure:
    """Joint law ``ζ(x) q1(y1|x) q2(y2|x)``."""
    if q1.input_labels != zeta.labels or q2.input_labels != zeta.labels:
        raise DimensionError("channel inputs must match the prior labels")
    z, a, b = arith.harmonize(zeta.mass, q1.matrix, q2.matrix)
    joint = z[:, None, None] * a[:, :, None] * b[:, None, :]
    return InfoStructure(zeta.labels, q1.output_labels, q2.output_labels, joint, cond_independent=True)


def shared_signal(zeta: ProbVector, q: Channel) -> InfoStructure:
    """Both players observe the same draw ``y ~ q(.|x)``."""
    if q.input_labels != zeta.labels:
        raise DimensionError("channel inputs must match the prior labels")
    z, m = arith.harmonize(zeta.mass, q.matrix)
    n = len(q.output_labels)
    joint = arith.zeros((len(z), n, n), arith.is_exact(m))
    for k in range(n):
        joint[:, k, k] = z * m[:, k]
    return InfoStructure(zeta.labels, q.output_labels, q.output_labels, joint)


def marginal(mu: InfoStructure, player: int) -> PairMeasure:
    """Joint law of the state and player ``player``'s signal."""
    _check_player(player)
    if player == 1:
        return PairMeasure(mu.x_labels, mu.y1_labels, mu.joint.sum(axis=2))
    return PairMeasure(mu.x_labels, mu.y2_labels, mu.joint.sum(axis=1))


def reduce_independent(
    mu: InfoStructure, q1_bar: ProbVector | None = None, q2_bar: ProbVector | None = None
) -> ReducedStructure:
    """Write ``mu`` as a density against ``ζ ⊗ q1_bar ⊗ q2_bar``.

    Reference measures default to the signal marginals of ``mu``, for which
    absolute continuity always holds.
    """
    if q1_bar is None:
        q1_bar = marginal(mu, 1).signal_law
    if q2_bar is None:
        q2_bar = marginal(mu, 2).signal_law
    if q1_bar.labels != mu.y1_labels or q2_bar.labels != mu.y2_labels:
        raise DimensionError("reference measures must live on the signal alphabets")
    joint, z, a, b = arith.harmonize(mu.joint, mu.prior.mass, q1_bar.mass, q2_bar.mass)
    exact = arith.is_exact(joint)
    ref = z[:, None, None] * a[None, :, None] * b[None, None, :]
    dens = arith.zeros(joint.shape, exact)
    for idx in np.ndindex(joint.shape):
        r = ref[idx]
        if r <= 0:
            if not arith.is_zero(joint[idx], exact):
                raise AbsoluteContinuityError(f"joint mass {joint[idx]} at {idx} where the reference vanishes")
        else:
            dens[idx] = joint[idx] / r
    return ReducedStructure(mu, q1_bar, q2_bar, dens)


def apply_garbling(mu: InfoStructure, player: int, kappa: Channel) -> InfoStructure:
    """Pass player ``player``'s signal through ``kappa``; the other coordinate is untouched."""
    _check_player(player)
    if kappa.input_labels != mu.signal_labels(player):
        raise DimensionError(f"kernel inputs {kappa.input_labels} != player-{player} signals")
    joint, k = arith.harmonize(mu.joint, kappa.matrix)
    if player == 1:
        # [x, y2, y1'] -> [x, y1', y2]
        new = np.tensordot(joint, k, axes=([1], [0])).transpose(0, 2, 1)
        return InfoStructure(mu.x_labels, kappa.output_labels, mu.y2_labels, new, mu.cond_independent)
    new = np.tensordot(joint, k, axes=([2], [0]))
    return InfoStructure(mu.x_labels, mu.y1_labels, kappa.output_labels, new, mu.cond_independent)


def garble_pair(pair: PairMeasure, kappa: Channel) -> PairMeasure:
    if kappa.input_labels != pair.y_labels:
        raise DimensionError("kernel inputs must match the pair's signal labels")
    t, k = arith.harmonize(pair.table, kappa.matrix)
    return PairMeasure(pair.x_labels, kappa.output_labels, t @ k)


def refine_signal(mu: InfoStructure, player: int, extra: Channel) -> InfoStructure:
    """Append a component ``z ~ extra(.|x)``, drawn independently given the state, to a player's signal.

    New signal labels are pairs ``(y, z)``.
    """
    _check_player(player)
    if extra.input_labels != mu.x_labels:
        raise DimensionError("extra channel must read the state")
    joint, r = arith.harmonize(mu.joint, extra.matrix)
    ys = mu.signal_labels(player)
    new_labels = tuple((y, z) for y in ys for z in extra.output_labels)
    nz = len(extra.output_labels)
    if player == 1:
        new = joint[:, :, None, :] * r[:, None, :, None]
        new = new.reshape(len(mu.x_labels), len(ys) * nz, len(mu.y2_labels))
        return InfoStructure(mu.x_labels, new_labels, mu.y2_labels, new, mu.cond_independent)
    new = joint[:, :, :, None] * r[:, None, None, :]
    new = new.reshape(len(mu.x_labels), len(mu.y1_labels), len(ys) * nz)
    return InfoStructure(mu.x_labels, mu.y1_labels, new_labels, new, mu.cond_independent)


def projection_kernel(pair_labels: Sequence[tuple], labels: Sequence[Label], exact: bool = True) -> Channel:
    """Deterministic kernel ``(y, z) -> y`` that forgets an appended component."""
    labels = tuple(labels)
    m = arith.zeros((len(pair_labels), len(labels)), exact)
    for i, (y, _) in enumerate(pair_labels):
        m[i, labels.index(y)] = 1
    return Channel(tuple(pair_labels), labels, m)


def quantize_channel(
    density: Callable,
    x_labels: Sequence[Label],
    y_interval: tuple[float, float],
    n_cells: int,
    subdivisions: int = 32,
    exact: bool = False,
) -> Channel:
    """Discretize ``density(y, x)`` on ``[a, b]`` into ``n_cells`` equal-width cells.

    Each cell mass is a composite midpoint sum over ``subdivisions`` points;
    rows are then renormalized. ``density`` must accept a numpy array of ``y``
    values and a state label. With ``exact=True`` the row masses are converted
    to Fractions before renormalizing, so rows sum to one exactly.
    """
    if n_cells < 1 or subdivisions < 1:
        raise ValueError("n_cells and subdivisions must be positive")
    a, b = map(float, y_interval)
    if not b > a:
        raise ValueError("empty interval")
    h = (b - a) / (n_cells * subdivisions)
    mids = a + h * (np.arange(n_cells * subdivisions) + 0.5)
    rows = []
    for x in x_labels:
        vals = np.broadcast_to(np.asarray(density(mids, x), dtype=float), mids.shape)
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise DegenerateDensityError(f"density is negative or non-finite for state {x!r}")
        cells = vals.reshape(n_cells, subdivisions).sum(axis=1) * h
        total = cells.sum()
        if not total > 0:
            raise DegenerateDensityError(f"density row for state {x!r} integrates to {total}")
        if exact:
            fr = [Fraction(float(v)) for v in cells]
            s = sum(fr)
            rows.append([v / s for v in fr])
        else:
            row = cells / total
            # absorb rounding into the largest cell
            k = int(np.argmax(row))
            row[k] = 1.0 - (row.sum() - row[k])
            rows.append(row)
    return Channel(tuple(x_labels), tuple(range(n_cells)), arith.asarray(rows, exact))
