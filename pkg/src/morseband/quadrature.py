"""Integration engines and grid primitives.

Three integral families appear in the model, each with its own engine:

* semi-infinite Gamma-weighted integrals ``int_0^inf u^a e^-u f(u) du``,
  where ``f`` may carry logarithm powers. Gauss-Laguerre rules stall on
  the logarithmic factors (measured: 2.5e-3 relative error at order 256
  on ``f = ln u``), so the engine substitutes ``u = e^t`` and applies the
  trapezoid rule to the resulting analytic, double-exponentially decaying
  integrand, which converges spectrally.
* radial integrals over ``[0, r_max]`` with exponentially decaying tails,
  by composite Gauss-Legendre panels plus an explicit tail bound.
* inner products of states sampled on the model's strip grid: composite
  Simpson along the unbounded direction, plain summation along the
  periodic one (the trapezoid rule is spectrally accurate for periodic
  smooth integrands, and every integrand here dies out in x well inside
  the window).

Grid derivatives live here too: spectral differentiation along the
periodic axis, fourth-order centred stencils with one-sided closures
along the open axis.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_genlaguerre, roots_legendre

from .errors import (
    ConvergenceError,
    DomainError,
    GridMismatchError,
    TailDominanceError,
)

__all__ = [
    "IntegrationResult",
    "GridSpec",
    "FD_MARGIN",
    "gauss_laguerre_nodes",
    "integrate_semi_infinite_u",
    "integrate_radial",
    "grid_inner_product",
    "weighted_norm",
    "fd_derivative",
]

# Rows next to the open-axis boundaries where the one-sided derivative
# closures are the least accurate; norm comparisons that involve grid
# derivatives should exclude this many rows on each side.
FD_MARGIN = 4

_TINY = 1e-300


@dataclass(frozen=True)
class IntegrationResult:
    """Value of a quadrature together with its error estimate and cost."""

    value: complex
    error_estimate: float
    evaluations: int

    def __post_init__(self) -> None:
        if not self.error_estimate >= 0.0:
            raise DomainError(f"error_estimate must be >= 0, got {self.error_estimate!r}")
        if not self.evaluations > 0:
            raise DomainError(f"evaluations must be positive, got {self.evaluations!r}")


@dataclass(frozen=True)
class GridSpec:
    """Rectangular sampling window: open direction x, periodic direction y."""

    x_min: float
    x_max: float
    nx: int
    ny: int

    def __post_init__(self) -> None:
        if not self.x_min < self.x_max:
            raise DomainError(f"need x_min < x_max, got [{self.x_min!r}, {self.x_max!r}]")
        if self.nx < 8 or self.ny < 8:
            raise DomainError(f"grid needs nx >= 8 and ny >= 8, got {self.nx}x{self.ny}")


@lru_cache(maxsize=128)
def gauss_laguerre_nodes(order: int, alpha: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the generalized Gauss-Laguerre rule.

    Exact for ``u^k`` against the weight ``u^alpha e^-u`` up to degree
    ``2*order - 1``. Orders above 256 are refused: the underlying solver
    degrades there (measured NaN weights at order 400 with alpha = 14.5).
    Returned arrays are frozen; copy before mutating.
    """
    if not 1 <= order <= 256:
        raise DomainError(f"gauss_laguerre_nodes supports orders 1..256, got {order!r}")
    if not alpha > -1.0:
        raise DomainError(f"gauss_laguerre_nodes requires alpha > -1, got {alpha!r}")
    nodes, weights = roots_genlaguerre(order, alpha)
    nodes = np.asarray(nodes, dtype=float)
    weights = np.asarray(weights, dtype=float)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _eval_vector(f: Callable, u: np.ndarray) -> np.ndarray:
    """Evaluate f on an array, tolerating scalar-only callables."""
    try:
        vals = np.asarray(f(u))
    except (TypeError, ValueError):
        vals = np.asarray([f(float(v)) for v in u])
    if vals.shape != u.shape:
        vals = np.broadcast_to(vals, u.shape)
    return vals


def integrate_semi_infinite_u(f: Callable, weight_exponent: float) -> IntegrationResult:
    """Compute ``int_0^inf u^weight_exponent e^-u f(u) du``.

    Substituting ``u = e^t`` turns the integral into one of an analytic
    integrand ``e^((a+1) t - e^t) f(e^t)`` over the line, which decays
    double-exponentially on the right and exponentially on the left, so
    the trapezoid rule converges spectrally even when ``f`` carries
    ``(ln u)^j`` factors. Three nested refinements are evaluated; the
    error estimate is the difference of the last two.

    ``f`` may return complex values and may be scalar-only or vectorized
    over numpy arrays. ``weight_exponent`` must exceed -1.
    """
    a = float(weight_exponent)
    if not a > -1.0:
        raise DomainError(f"weight exponent must exceed -1, got {weight_exponent!r}")
    # left endpoint where e^((a+1) t) alone is below 1e-16 of the bulk;
    # right endpoint where e^(-e^t) has annihilated any polynomial factor
    t_lo = -38.0 / (a + 1.0)
    t_hi = 8.5
    evaluations = 0
    values = []
    n = 481
    for _ in range(3):
        t = np.linspace(t_lo, t_hi, n)
        u = np.exp(t)
        with np.errstate(over="ignore", invalid="ignore"):
            g = _eval_vector(f, u) * np.exp((a + 1.0) * t - u)
        h = (t_hi - t_lo) / (n - 1)
        total = complex(h * (np.sum(g) - 0.5 * (g[0] + g[-1])))
        if not (math.isfinite(total.real) and math.isfinite(total.imag)):
            raise ConvergenceError(
                "integrand is not finite somewhere on (0, {:.3g}]; the engine "
                "cannot integrate it".format(math.exp(t_hi))
            )
        values.append(total)
        evaluations += n
        n = 2 * n - 1
    scale = max(abs(values[2]), _TINY)
    error = abs(values[2] - values[1])
    if error > 1e-8 * scale:
        raise ConvergenceError(
            f"substitution trapezoid stalled: refinement moved the value by "
            f"{error:.2e} against magnitude {scale:.2e}"
        )
    value = values[2]
    if value.imag == 0.0:
        value = complex(value.real, 0.0)
    return IntegrationResult(value=value, error_estimate=error, evaluations=evaluations)


def _panel_sum(f: Callable, r_max: float, panels: int, nodes: np.ndarray, weights: np.ndarray) -> tuple[complex, int]:
    width = r_max / panels
    total = 0.0 + 0.0j
    count = 0
    for p in range(panels):
        left = p * width
        r = left + (nodes + 1.0) * (width / 2.0)
        vals = _eval_vector(f, r)
        total += (width / 2.0) * complex(np.sum(weights * vals))
        count += r.size
    return total, count


def integrate_radial(f: Callable, r_max: float) -> IntegrationResult:
    """Integrate f over [0, r_max], checking that the discarded tail is dead.

    Composite 32-point Gauss-Legendre panels, doubled until the value
    moves by less than 1e-12 relative (at most three doublings). The tail
    beyond r_max is bounded by fitting a local exponential decay rate to
    f near r_max; if that bound is not negligible against the integral,
    TailDominanceError reports that r_max was chosen too small.
    """
    if not r_max > 0.0:
        raise DomainError(f"integrate_radial requires r_max > 0, got {r_max!r}")
    nodes, weights = roots_legendre(32)
    panels = max(8, int(math.ceil(r_max / 5.0)))
    value, evaluations = _panel_sum(f, r_max, panels, nodes, weights)
    delta = math.inf
    for _ in range(3):
        panels *= 2
        refined, count = _panel_sum(f, r_max, panels, nodes, weights)
        evaluations += count
        delta = abs(refined - value)
        value = refined
        if delta <= 1e-12 * max(abs(value), _TINY):
            break
    # local decay rate near the cut: f ~ C e^(-kappa r) gives a tail bound
    # |f(r_max)| / kappa
    edge = complex(np.asarray(f(np.asarray([r_max])), dtype=complex).ravel()[-1])
    inner = complex(np.asarray(f(np.asarray([0.98 * r_max])), dtype=complex).ravel()[-1])
    evaluations += 2
    if edge == 0.0:
        tail = 0.0
    elif abs(inner) > abs(edge):
        kappa = math.log(abs(inner) / abs(edge)) / (0.02 * r_max)
        tail = abs(edge) / kappa
    else:
        tail = abs(edge) * r_max
    scale = max(abs(value), _TINY)
    if tail > 1e-10 * scale:
        raise TailDominanceError(
            f"tail bound {tail:.2e} beyond r_max = {r_max} is not negligible "
            f"against the integral magnitude {scale:.2e}; enlarge r_max"
        )
    return IntegrationResult(value=value, error_estimate=delta + tail, evaluations=evaluations)


def _simpson_weights(nx: int, h: float) -> np.ndarray:
    """Composite Simpson weights on a uniform grid, 3/8 patch for odd interval counts."""
    w = np.zeros(nx)
    intervals = nx - 1
    if intervals % 2 == 1:
        cut = intervals - 3
    else:
        cut = intervals
    if cut > 0:
        w[0] += 1.0
        w[cut] += 1.0
        w[1:cut:2] += 4.0
        w[2:cut:2] += 2.0
        w[: cut + 1] *= h / 3.0
    if cut < intervals:
        patch = np.array([3.0, 9.0, 9.0, 3.0]) * (h / 8.0)
        w[cut : cut + 4] += patch
    return w


def _check_same_grid(a, b) -> None:
    if a.grid != b.grid:
        raise GridMismatchError(f"states sampled on different grids: {a.grid} vs {b.grid}")
    if a.y_period != b.y_period:
        raise GridMismatchError("states carry different periodic lengths")
    if not np.array_equal(a.weight, b.weight):
        raise GridMismatchError("states carry different measure weights")


def grid_inner_product(a, b) -> complex:
    """Weighted inner product <a|b> of two states on the same grid.

    The measure weight stored on the states multiplies the integrand.
    Each factor is scaled by sqrt(weight) before the product is formed:
    states may grow large exactly where the weight underflows to zero,
    and this ordering keeps the integrand finite instead of forming
    0 * inf. Summation order is fixed, so repeated calls are
    bit-identical.
    """
    _check_same_grid(a, b)
    grid = a.grid
    h = (grid.x_max - grid.x_min) / (grid.nx - 1)
    wx = _simpson_weights(grid.nx, h)
    dy = a.y_period / grid.ny
    root_w = np.sqrt(a.weight)[:, None]
    inner_y = np.sum(np.conj(a.values * root_w) * (b.values * root_w), axis=1) * dy
    return complex(np.sum(wx * inner_y))


def weighted_norm(a, exclude_margin: int = 0) -> float:
    """Weighted L2 norm of a state, optionally ignoring boundary rows.

    With ``exclude_margin = m`` the first and last m rows along the open
    axis are dropped before integrating, which removes the rows where
    one-sided derivative closures are least accurate.
    """
    grid = a.grid
    if exclude_margin < 0 or 2 * exclude_margin >= grid.nx:
        raise DomainError(f"exclude_margin {exclude_margin!r} incompatible with nx = {grid.nx}")
    h = (grid.x_max - grid.x_min) / (grid.nx - 1)
    wx = _simpson_weights(grid.nx, h)
    dy = a.y_period / grid.ny
    amp = a.values * np.sqrt(a.weight)[:, None]
    density = np.sum(amp.real**2 + amp.imag**2, axis=1) * dy
    if exclude_margin:
        density[:exclude_margin] = 0.0
        density[-exclude_margin:] = 0.0
    total = float(np.sum(wx * density))
    return math.sqrt(max(total, 0.0))


# one-sided O(h^3)/O(h^4) closures for the first and second derivative
_EDGE1_ROW0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
_EDGE1_ROW1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0
_EDGE2_ROW0 = np.array([35.0, -104.0, 114.0, -56.0, 11.0]) / 12.0
_EDGE2_ROW1 = np.array([11.0, -20.0, 6.0, 4.0, -1.0]) / 12.0


def _x_derivative(values: np.ndarray, h: float, order: int) -> np.ndarray:
    out = np.empty_like(values)
    v = values
    if order == 1:
        out[2:-2] = (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / (12.0 * h)
        head = _EDGE1_ROW0, _EDGE1_ROW1
        flip = -1.0
        scale = h
    else:
        out[2:-2] = (-v[:-4] + 16.0 * v[1:-3] - 30.0 * v[2:-2] + 16.0 * v[3:-1] - v[4:]) / (
            12.0 * h * h
        )
        head = _EDGE2_ROW0, _EDGE2_ROW1
        flip = 1.0
        scale = h * h
    for i, row in enumerate(head):
        out[i] = np.tensordot(row, v[:5], axes=(0, 0)) / scale
        out[-1 - i] = flip * np.tensordot(row[::-1], v[-5:], axes=(0, 0)) / scale
    return out


def _y_derivative(values: np.ndarray, y_period: float, order: int) -> np.ndarray:
    ny = values.shape[1]
    k = 2.0 * np.pi * np.fft.fftfreq(ny, d=y_period / ny)
    spectrum = np.fft.fft(values, axis=1)
    if order == 1:
        mult = 1j * k
        if ny % 2 == 0:
            # the Nyquist mode has no well-defined first derivative sign
            mult[ny // 2] = 0.0
    else:
        mult = -(k**2)
    return np.fft.ifft(spectrum * mult, axis=1)


def fd_derivative(state, axis: str, order: int = 1):
    """Differentiate a sampled state along one grid axis.

    axis "y" (periodic) uses spectral differentiation, exact for every
    mode the grid resolves. axis "x" (open) uses fourth-order centred
    stencils with one-sided five-point closures at the boundary rows;
    compare derived states with ``exclude_margin = FD_MARGIN`` since the
    closure rows carry larger error. ``order`` is 1 or 2.

    Returns a new state of the same type; the input is not modified.
    """
    if order not in (1, 2):
        raise DomainError(f"derivative order must be 1 or 2, got {order!r}")
    if axis == "x":
        grid = state.grid
        h = (grid.x_max - grid.x_min) / (grid.nx - 1)
        new_values = _x_derivative(np.asarray(state.values, dtype=complex), h, order)
    elif axis == "y":
        new_values = _y_derivative(np.asarray(state.values, dtype=complex), state.y_period, order)
    else:
        raise DomainError(f'axis must be "x" or "y", got {axis!r}')
    updates = {"values": new_values}
    if hasattr(state, "labels"):
        # a derivative is no longer the labeled eigenstate
        updates["labels"] = None
    return dataclasses.replace(state, **updates)
