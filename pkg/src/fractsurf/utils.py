"""Small numeric helpers shared by the geometry modules.

Nothing here knows about grids or surfaces: restricted ``(x, y)``
expression compilation, piecewise polynomials in one variable,
bivariate monomial tables, and a scalar golden-section search.
"""
from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npp

_ALLOWED_FUNCS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "tanh": np.tanh,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "arctan": np.arctan,
    "minimum": np.minimum,
    "maximum": np.maximum,
    "sign": np.sign,
}
_ALLOWED_CONSTS = {"pi": math.pi, "e": math.e}


def compile_xy_expression(expr: str) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """Compile an arithmetic expression in ``x`` and ``y`` to a vectorized callable.

    Only arithmetic operators, a small whitelist of numpy functions
    (sin, cos, tan, tanh, exp, log, sqrt, abs, arctan, minimum, maximum,
    sign) and the constants ``pi``/``e`` are accepted.  Anything else is
    rejected with ValueError so config files cannot smuggle arbitrary code.
    """
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression {expr!r}: {exc}") from None
    for node in ast.walk(tree):
        if isinstance(node, ast.Name):
            if node.id not in ("x", "y") and node.id not in _ALLOWED_FUNCS and node.id not in _ALLOWED_CONSTS:
                raise ValueError(f"name {node.id!r} not allowed in expression {expr!r}")
        elif isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _ALLOWED_FUNCS:
                raise ValueError(f"only whitelisted calls allowed in expression {expr!r}")
        elif isinstance(node, (ast.Attribute, ast.Subscript, ast.Lambda)):
            raise ValueError(f"construct not allowed in expression {expr!r}")
    code = compile(tree, "<xy-expression>", "eval")
    env: dict = {"__builtins__": {}}
    env.update(_ALLOWED_FUNCS)
    env.update(_ALLOWED_CONSTS)

    def fn(x, y):
        xa = np.asarray(x, dtype=float)
        ya = np.asarray(y, dtype=float)
        val = np.asarray(eval(code, env, {"x": xa, "y": ya}), dtype=float)
        shape = np.broadcast_shapes(xa.shape, ya.shape)
        if val.shape != shape:
            val = np.broadcast_to(val, shape).copy()
        return val

    return fn


@dataclass(frozen=True)
class PiecewisePoly:
    """Piecewise polynomial over a strictly increasing knot vector.

    ``coeffs[k]`` holds ascending-order coefficients for the piece on
    ``[knots[k], knots[k+1]]``.  At an interior knot the lower piece wins,
    matching the cell tie-breaking convention used elsewhere.
    """

    knots: tuple[float, ...]
    coeffs: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if len(self.coeffs) != len(self.knots) - 1:
            raise ValueError("need exactly one coefficient list per knot interval")
        ks = np.asarray(self.knots, dtype=float)
        if not np.all(np.diff(ks) > 0):
            raise ValueError("piecewise knots must be strictly increasing")

    def piece_index(self, t) -> np.ndarray:
        ks = np.asarray(self.knots, dtype=float)
        return np.clip(np.searchsorted(ks, np.asarray(t, dtype=float), side="left") - 1,
                       0, len(self.coeffs) - 1)

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        scalar = arr.ndim == 0
        flat = np.atleast_1d(arr).ravel()
        idx = self.piece_index(flat)
        out = np.empty_like(flat)
        for k, c in enumerate(self.coeffs):
            mask = idx == k
            if mask.any():
                out[mask] = npp.polyval(flat[mask], np.asarray(c, dtype=float))
        if scalar:
            return float(out[0])
        return out.reshape(arr.shape)

    def junction_gaps(self) -> list[float]:
        """Absolute jumps at interior knots (lower piece end vs upper piece start)."""
        gaps = []
        for k in range(len(self.coeffs) - 1):
            t = self.knots[k + 1]
            lo = npp.polyval(t, np.asarray(self.coeffs[k], dtype=float))
            hi = npp.polyval(t, np.asarray(self.coeffs[k + 1], dtype=float))
            gaps.append(abs(float(lo) - float(hi)))
        return gaps

    def derivative_bound(self) -> float:
        """Sound bound on |d/dt| over the whole support (coefficient sums)."""
        best = 0.0
        for k, c in enumerate(self.coeffs):
            tmax = max(abs(self.knots[k]), abs(self.knots[k + 1]))
            bound = sum(abs(ci) * i * tmax ** (i - 1) for i, ci in enumerate(c) if i > 0)
            best = max(best, float(bound))
        return best


def poly_outer(cx: Sequence[float], cy: Sequence[float]) -> np.ndarray:
    """Monomial table of the product p(x) * q(y) from 1-D ascending coeffs."""
    return np.outer(np.asarray(cx, dtype=float), np.asarray(cy, dtype=float))


def table_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Sum of two monomial tables, padded to the larger shape."""
    rows = max(a.shape[0], b.shape[0])
    cols = max(a.shape[1], b.shape[1])
    out = np.zeros((rows, cols))
    out[: a.shape[0], : a.shape[1]] += a
    out[: b.shape[0], : b.shape[1]] += b
    return out


def polyval2d(x, y, table: np.ndarray):
    """Evaluate a monomial table c[k, l] * x**k * y**l (ascending orders)."""
    xa, ya = np.broadcast_arrays(np.asarray(x, dtype=float),
                                 np.asarray(y, dtype=float))
    return npp.polyval2d(xa, ya, table)


def poly2d_gradient_bound(table: np.ndarray, x_range: tuple[float, float],
                          y_range: tuple[float, float]) -> float:
    """Crude but sound bound on max(|d/dx|, |d/dy|) over a rectangle.

    Uses coefficient sums against the largest monomial magnitudes on the
    rectangle; adequate for the Lipschitz bookkeeping this package needs.
    """
    xm = max(abs(x_range[0]), abs(x_range[1]))
    ym = max(abs(y_range[0]), abs(y_range[1]))
    dx = 0.0
    dy = 0.0
    for k in range(table.shape[0]):
        for l in range(table.shape[1]):
            c = abs(table[k, l])
            if c == 0:
                continue
            if k > 0:
                dx += c * k * xm ** (k - 1) * ym ** l
            if l > 0:
                dy += c * l * xm ** k * ym ** (l - 1)
    return max(dx, dy)


_INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section_min(fn: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-12, max_iter: int = 200) -> tuple[float, float]:
    """Golden-section minimization of a scalar function on [lo, hi].

    Returns (argmin, min).  Also checks the interval endpoints so minima
    on the boundary are not missed.
    """
    a, b = float(lo), float(hi)
    c = b - (b - a) * _INV_PHI
    d = a + (b - a) * _INV_PHI
    fc, fd = fn(c), fn(d)
    for _ in range(max_iter):
        if abs(b - a) < tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * _INV_PHI
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * _INV_PHI
            fd = fn(d)
    candidates = [(fn(lo), lo), (fn(hi), hi), (fc, c), (fd, d)]
    fbest, tbest = min(candidates)
    return tbest, fbest


def format_float(v: float) -> str:
    """Shortest round-trip decimal representation (deterministic exports)."""
    return repr(float(v))
