"""Dual-mode scalar helpers.

Exact arrays are numpy ``object`` arrays holding :class:`fractions.Fraction`;
float arrays are ``float64``. Every routine in the package keeps exact inputs
exact and only compares floats against :data:`TOL`.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational, Real

import numpy as np

TOL = 1e-9


def parse_scalar(value, exact: bool):
    """Convert a JSON-ish scalar (number or ``"p/q"`` string) to the target mode."""
    if isinstance(value, bool):
        raise TypeError(f"not a scalar: {value!r}")
    if exact:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, Rational)):
            return Fraction(value)
        if isinstance(value, (float, np.floating)):
            if not np.isfinite(value):
                raise ValueError(f"non-finite scalar {value!r}")
            # decimal reading keeps 0.9 == 9/10
            return Fraction(repr(float(value)))
        if isinstance(value, str):
            return Fraction(value.strip())
        raise TypeError(f"not a scalar: {value!r}")
    if isinstance(value, str):
        value = Fraction(value.strip())
    if not isinstance(value, Real):
        raise TypeError(f"not a scalar: {value!r}")
    out = float(value)
    if not np.isfinite(out):
        raise ValueError(f"non-finite scalar {value!r}")
    return out


def asarray(values, exact: bool | None = None) -> np.ndarray:
    """Build an array in exact (object/Fraction) or float mode.

    With ``exact=None`` the mode is inferred: exact when the input is already
    an object array or contains only ints/Fractions/strings.
    """
    if exact is None:
        exact = _looks_exact(values)
    if exact:
        arr = np.asarray(values, dtype=object)
        flat = [parse_scalar(v, True) for v in arr.ravel()]
        out = np.empty(arr.shape, dtype=object)
        out.ravel()[:] = flat if flat else []
        return out
    if isinstance(values, np.ndarray) and values.dtype != object:
        out = values.astype(float)
    else:
        arr = np.asarray(values, dtype=object)
        out = np.array([parse_scalar(v, False) for v in arr.ravel()], dtype=float).reshape(arr.shape)
    if not np.all(np.isfinite(out)):
        raise ValueError("non-finite entries")
    return out


def _looks_exact(values) -> bool:
    if isinstance(values, np.ndarray):
        if values.dtype == object:
            return all(isinstance(v, (int, Fraction, str)) and not isinstance(v, bool) for v in values.ravel())
        return False
    arr = np.asarray(values, dtype=object)
    return all(isinstance(v, (int, Fraction, str)) and not isinstance(v, bool) for v in arr.ravel())


def is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def to_mode(arr: np.ndarray, exact: bool) -> np.ndarray:
    if is_exact(arr) == exact:
        return arr
    return asarray(arr, exact)


def common_mode(*arrays: np.ndarray) -> bool:
    """Exact iff every operand is exact."""
    return all(is_exact(a) for a in arrays)


def harmonize(*arrays: np.ndarray) -> list[np.ndarray]:
    exact = common_mode(*arrays)
    return [to_mode(a, exact) for a in arrays]


def frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=arr.dtype, copy=True)
    arr.flags.writeable = False
    return arr


def is_zero(value, exact: bool, tol: float = TOL) -> bool:
    return value == 0 if exact else abs(value) <= tol


def allclose(a: np.ndarray, b: np.ndarray, tol: float = TOL) -> bool:
    """Entrywise equality; exact when both sides are exact."""
    if a.shape != b.shape:
        return False
    if is_exact(a) and is_exact(b):
        return bool(np.all(a == b))
    return bool(np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float), rtol=0.0, atol=tol))


def zeros(shape, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape)


def fmt(value) -> str | float:
    """JSON-friendly scalar: ``"p/q"`` string for Fractions, float otherwise."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(Fraction(int(value)))
    return float(value)


def dump_array(arr: np.ndarray):
    if np.ndim(arr) == 0:
        return fmt(arr.item() if isinstance(arr, (np.ndarray, np.generic)) else arr)
    return [dump_array(sub) for sub in arr]
