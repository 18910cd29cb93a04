"""Position-space eigenstates, the integration measure, and Landau states.

Every bound state factorizes into a plane wave along the periodic
direction and a radial-like profile in the variable xi = e^(kappa x),
built from a Laguerre polynomial in u = beta/xi. The profile grows
toward x -> -inf while the measure weight dies double-exponentially
there, so only weighted combinations are physical; the quadrature layer
is written to form those combinations without overflowing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, RangeError
from .model import PhysParams, QuantumNumbers, energy
from .quadrature import GridSpec
from .specfun import hermite, laguerre, laguerre_deriv

__all__ = [
    "SampledState",
    "LandauParams",
    "default_grid",
    "assoc_bessel",
    "assoc_bessel_rodrigues",
    "wavefunction",
    "measure_weight",
    "ode_residual",
    "landau_state_asym",
    "landau_state_sym",
]


@dataclass(frozen=True, eq=False)
class SampledState:
    """A complex field sampled on a strip grid, with its measure weight.

    ``values[i, j]`` is the amplitude at ``(x[i], y[j])``; ``weight[i]``
    samples the measure along x (mathematically positive everywhere, but
    allowed to underflow to zero in the dead tail). ``labels`` is set
    only by :func:`wavefunction`. Arrays are frozen after construction;
    derive modified states through ``dataclasses.replace``.
    """

    grid: GridSpec
    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    weight: np.ndarray
    y_period: float
    labels: QuantumNumbers | None = None

    def __post_init__(self) -> None:
        if self.x.shape != (self.grid.nx,) or self.y.shape != (self.grid.ny,):
            raise DomainError("axis arrays do not match the grid")
        if self.values.shape != (self.grid.nx, self.grid.ny):
            raise DomainError(
                f"values shape {self.values.shape} does not match grid "
                f"{(self.grid.nx, self.grid.ny)}"
            )
        if self.weight.shape != (self.grid.nx,):
            raise DomainError("weight must be sampled along x only")
        if not self.y_period > 0.0:
            raise DomainError(f"y_period must be positive, got {self.y_period!r}")
        if np.any(self.weight < 0.0) or not np.all(np.isfinite(self.weight)):
            raise DomainError("weight samples must be finite and non-negative")
        if not np.all(np.isfinite(self.values)):
            raise RangeError(
                "state amplitudes overflow on this grid; shrink the window "
                "on the growing side"
            )
        for arr in (self.x, self.y, self.values, self.weight):
            arr.setflags(write=False)


def default_grid(p: PhysParams) -> GridSpec:
    """Window centred on the weight mode, wide enough that both tails of
    every weighted integrand handled here are below 1e-14."""
    x_c = p.x_weight_mode
    return GridSpec(x_c - 8.0 * p.a0, x_c + 8.0 * p.a0, 1024, 64)


def _grid_axes(grid: GridSpec, p: PhysParams) -> tuple[np.ndarray, np.ndarray]:
    x = np.linspace(grid.x_min, grid.x_max, grid.nx)
    y = -0.5 * p.a0 + np.arange(grid.ny) * (p.a0 / grid.ny)
    return x, y


def measure_weight(x, p: PhysParams):
    """Measure density w(x) = e^(kappa x) e^(-beta e^(-kappa x)).

    This is the unique weight of its exponential family under which the
    states produced by :func:`wavefunction` come out orthonormal; the
    normalization and first-moment oracles in the test suite pin it.
    Accepts a scalar or an array.
    """
    kx = p.kappa * np.asarray(x, dtype=float)
    out = np.exp(kx - p.beta * np.exp(-kx))
    return float(out) if np.isscalar(x) else out


def assoc_bessel(l: int, n: int, beta: float, xi, return_underflow_flag: bool = False):
    """Radial-like profile in xi = e^(kappa x) for level (l, n).

    beta^l sqrt(Gamma(n-l)/Gamma(n+l+1)) xi^(-l-1) L_{n-l-1}^{(2l+1)}(beta/xi),
    evaluated with the prefactor assembled in log space so that large l
    does not underflow intermediate powers. ``xi`` may be a scalar or an
    array of positive reals.

    With ``return_underflow_flag=True`` the result is ``(value, flag)``
    where the flag marks samples whose prefactor underflowed to exact 0
    while the polynomial factor stayed finite.
    """
    QuantumNumbers(l, n)
    if not beta > 0.0:
        raise DomainError(f"assoc_bessel requires beta > 0, got {beta!r}")
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(xi_arr <= 0.0):
        raise DomainError("assoc_bessel requires xi > 0")
    ln_pref = (
        l * math.log(beta)
        + 0.5 * (math.lgamma(n - l) - math.lgamma(n + l + 1))
        - (l + 1.0) * np.log(xi_arr)
    )
    pref = np.exp(ln_pref)
    poly = laguerre(n - l - 1, 2.0 * l + 1.0, beta / xi_arr)
    value = pref * poly
    if np.isscalar(xi):
        value = float(value)
        if not return_underflow_flag:
            return value
        flag = bool(pref == 0.0 and poly != 0.0)
        return value, flag
    if not return_underflow_flag:
        return value
    return value, (pref == 0.0) & (poly != 0.0)


def assoc_bessel_rodrigues(l: int, n: int, beta: float, xi: float) -> float:
    """Same profile through the derivative form: beta^(-l-1) (-1)^(n-l-1)
    / sqrt(Gamma(n+l+1) Gamma(n-l)) xi^n e^(beta/xi) (d/dxi)^(n+l)
    [xi^(2l) e^(-beta/xi)].

    The repeated derivative is carried out in exact rational arithmetic
    on terms c xi^p beta^q e^(-beta/xi), so this is an independent route
    against which the Laguerre form can be checked, slow and intended
    for small (l, n) only.
    """
    QuantumNumbers(l, n)
    if not (beta > 0.0 and xi > 0.0):
        raise DomainError("assoc_bessel_rodrigues requires beta > 0 and xi > 0")
    # terms[(p, q)] = coefficient of xi^p beta^q e^(-beta/xi)
    terms: dict[tuple[int, int], Fraction] = {(2 * l, 0): Fraction(1)}
    for _ in range(n + l):
        updated: dict[tuple[int, int], Fraction] = {}
        for (p, q), coeff in terms.items():
            if p != 0:
                key = (p - 1, q)
                updated[key] = updated.get(key, Fraction(0)) + coeff * p
            key = (p - 2, q + 1)
            updated[key] = updated.get(key, Fraction(0)) + coeff
        terms = updated
    xi_f = Fraction(xi)
    beta_f = Fraction(beta)
    poly = Fraction(0)
    for (p, q), coeff in terms.items():
        poly += coeff * xi_f ** (p + n) * beta_f**q
    sign = -1.0 if (n - l - 1) % 2 else 1.0
    pref = sign * math.exp(
        -(l + 1.0) * math.log(beta) - 0.5 * (math.lgamma(n + l + 1) + math.lgamma(n - l))
    )
    return pref * float(poly)


def wavefunction(q: QuantumNumbers, p: PhysParams, grid: GridSpec) -> SampledState:
    """Sample the normalized bound state (l, n) on the grid.

    The amplitude is sqrt((-e B0 / pi hbar c)(2l+1)) e^(-i n kappa y)
    times the xi profile; the state's weight array carries the measure,
    and inner products under it are orthonormal.
    """
    x, y = _grid_axes(grid, p)
    xi = np.exp(p.kappa * x)
    profile = assoc_bessel(q.l, q.n, p.beta, xi)
    amp = math.sqrt(-p.e * p.B0 / (math.pi * p.hbar * p.c) * (2 * q.l + 1))
    phase = np.exp(-1j * q.n * p.kappa * y)
    values = amp * profile[:, None] * phase[None, :]
    return SampledState(
        grid=grid,
        x=x,
        y=y,
        values=values,
        weight=measure_weight(x, p),
        y_period=p.a0,
        labels=q,
    )


def ode_residual(q: QuantumNumbers, p: PhysParams, xi_samples, energy_value: float | None = None) -> float:
    """Max relative residual of the radial equation at the given xi points.

    The profile solves xi^2 f'' + (2 xi + beta) f' - (n^2 - 1/4 - eps) f
    + (beta n / xi) f = 0 with eps = mu a0^2 E / (2 pi^2 hbar^2) at the
    level energy. Derivatives are analytic (Laguerre ladder), so the
    residual isolates formula errors rather than discretization error.
    ``energy_value`` overrides the level energy, for non-solution
    controls.
    """
    xi_arr = np.asarray(xi_samples, dtype=float)
    if np.any(xi_arr <= 0.0):
        raise DomainError("ode_residual requires xi > 0 samples")
    beta = p.beta
    u = beta / xi_arr
    l, n = q.l, q.n
    m = n - l - 1
    alpha = 2.0 * l + 1.0
    E = energy(q, p) if energy_value is None else float(energy_value)
    eps = p.mu * p.a0**2 * E / (2.0 * math.pi**2 * p.hbar**2)

    L0 = laguerre(m, alpha, u)
    L1 = laguerre_deriv(m, alpha, u, order=1)
    L2 = laguerre_deriv(m, alpha, u, order=2)
    pow_m1 = xi_arr ** (-l - 1.0)
    f = pow_m1 * L0
    fp = pow_m1 / xi_arr * (-(l + 1.0) * L0 - u * L1)
    fpp = (
        pow_m1
        / xi_arr**2
        * ((l + 1.0) * (l + 2.0) * L0 + 2.0 * (l + 2.0) * u * L1 + u * u * L2)
    )
    terms = (
        xi_arr**2 * fpp,
        (2.0 * xi_arr + beta) * fp,
        -(n * n - 0.25 - eps) * f,
        (beta * n / xi_arr) * f,
    )
    residual = terms[0] + terms[1] + terms[2] + terms[3]
    scale = max(float(np.max(np.abs(t))) for t in terms)
    return float(np.max(np.abs(residual))) / scale


@dataclass(frozen=True)
class LandauParams:
    """Labels for a flat-field comparison state in one of two gauges.

    gauge "asymmetric": level N with wavenumber k_y along the strip; the
    guiding centre sits at x0 = r_c^2 k_y (no transverse drift field).
    gauge "symmetric": radial and angular labels (n, l) around the
    origin.
    """

    gauge: str
    N: int | None = None
    n: int | None = None
    l: int | None = None
    k_y: float = 0.0

    def __post_init__(self) -> None:
        if self.gauge == "asymmetric":
            if self.N is None or self.N < 0:
                raise DomainError(f"asymmetric gauge needs N >= 0, got {self.N!r}")
            if self.n is not None or self.l is not None:
                raise DomainError("asymmetric gauge takes N only")
        elif self.gauge == "symmetric":
            if self.n is None or self.l is None or self.n < 0 or self.l < 0:
                raise DomainError(
                    f"symmetric gauge needs n >= 0 and l >= 0, got n={self.n!r}, l={self.l!r}"
                )
            if self.N is not None:
                raise DomainError("symmetric gauge takes (n, l), not N")
        else:
            raise DomainError(f'gauge must be "asymmetric" or "symmetric", got {self.gauge!r}')

    @staticmethod
    def cyclotron_radius(p: PhysParams) -> float:
        """r_c = sqrt(hbar c / |e| B0)."""
        return math.sqrt(p.hbar * p.c / (abs(p.e) * p.B0))

    def guiding_centre(self, p: PhysParams) -> float:
        """x0 = r_c^2 k_y, asymmetric gauge only."""
        if self.gauge != "asymmetric":
            raise DomainError("guiding centre is defined in the asymmetric gauge")
        return self.cyclotron_radius(p) ** 2 * self.k_y


def landau_state_asym(lp: LandauParams, p: PhysParams, grid: GridSpec) -> SampledState:
    """Flat-field level in the asymmetric gauge: plane wave along y,
    Hermite-Gaussian along x centred on the guiding centre. The weight
    array is identically 1 (flat measure); the x integral of the density
    is 1/(4 pi^2) by the stated prefactor."""
    if lp.gauge != "asymmetric":
        raise DomainError("landau_state_asym needs asymmetric-gauge labels")
    x, y = _grid_axes(grid, p)
    r_c = lp.cyclotron_radius(p)
    x0 = lp.guiding_centre(p)
    t = (x - x0) / r_c
    norm = 1.0 / (
        2.0 * math.pi * math.sqrt(math.sqrt(math.pi) * r_c * 2.0**lp.N * math.factorial(lp.N))
    )
    profile = norm * np.exp(-0.5 * t * t) * hermite(lp.N, t)
    phase = np.exp(-1j * lp.k_y * y)
    values = profile[:, None] * phase[None, :]
    return SampledState(
        grid=grid, x=x, y=y, values=values, weight=np.ones(grid.nx), y_period=p.a0
    )


def landau_state_sym(n: int, l: int, p: PhysParams, grid: GridSpec) -> SampledState:
    """Flat-field level in the symmetric gauge: (x + i y)^l vortex factor,
    Gaussian envelope, Laguerre radial polynomial; unit norm under the
    flat plane measure. The weight array is identically 1."""
    lp = LandauParams(gauge="symmetric", n=n, l=l)
    x, y = _grid_axes(grid, p)
    r_c = lp.cyclotron_radius(p)
    s = math.sqrt(2.0) * r_c
    xx = x[:, None]
    yy = y[None, :]
    rho2 = xx * xx + yy * yy
    norm = math.exp(0.5 * (math.lgamma(n + 1.0) - math.lgamma(n + l + 1.0)) - 0.5 * math.log(math.pi))
    vortex = ((xx + 1j * yy) / s) ** l
    values = (
        norm / s * vortex * np.exp(-rho2 / (4.0 * r_c * r_c)) * laguerre(n, float(l), rho2 / (2.0 * r_c * r_c))
    )
    return SampledState(
        grid=grid, x=x, y=y, values=values, weight=np.ones(grid.nx), y_period=p.a0
    )
