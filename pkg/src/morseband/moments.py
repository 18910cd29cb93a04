"""Expectation values and the Schrodinger-Robertson uncertainty.

Closed forms exist for the first three levels of every vertical family
(N = n - l - 1 in {0, 1, 2}); they are reproduced verbatim here, with
the logarithmic Gamma integrals they rest on exposed as an oracle. The
same moments are also computed by grid quadrature with finite-difference
momenta, which is the route that validates the closed forms entrywise.

A deliberate structural point: expectation values of the momentum under
the model's weighted measure come out purely imaginary, meaning the
momentum is not self-adjoint in that inner product. The moment fields
are therefore complex throughout, and only the final uncertainty
combination is asserted to be real.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyLossError, DomainError
from .model import PhysParams, QuantumNumbers
from .quadrature import (
    GridSpec,
    fd_derivative,
    grid_inner_product,
    integrate_semi_infinite_u,
)
from .specfun import digamma, ln_gamma, trigamma
from .states import (
    LandauParams,
    SampledState,
    landau_state_asym,
    landau_state_sym,
    wavefunction,
)

__all__ = [
    "MomentSet",
    "default_moments_grid",
    "moments_closed",
    "moments_quadrature",
    "robertson_delta",
    "log_weighted_gamma_integral",
    "landau_delta",
    "uncertainty_limit_curve",
]

_TINY = 1e-300


@dataclass(frozen=True)
class MomentSet:
    """First and second moments of (x, p_x) on one state, with the
    symmetrized covariances sigma_ab = <ab + ba>/2 - <a><b> and the
    uncertainty combination delta = Re(sigma_xx sigma_pp - sigma_xp^2)."""

    mean_x: float
    mean_x2: float
    mean_p: complex
    mean_p2: complex
    mean_xp: complex
    sigma_xx: float
    sigma_pp: complex
    sigma_xp: complex
    delta: float

    @classmethod
    def from_means(
        cls,
        mean_x: float,
        mean_x2: float,
        mean_p: complex,
        mean_p2: complex,
        mean_xp: complex,
        hbar: float,
    ) -> "MomentSet":
        """Assemble covariances from raw moments.

        mean_xp is the unsymmetrized <x p_x>; the reversed ordering is
        recovered through the commutator, which puts the symmetrized
        covariance at mean_xp - i hbar/2 - mean_x mean_p. The uncertainty
        combination must come out real to 1e-10 relative, otherwise the
        inputs are inconsistent.
        """
        sigma_xx = mean_x2 - mean_x * mean_x
        sigma_pp = mean_p2 - mean_p * mean_p
        sigma_xp = mean_xp - 0.5j * hbar - mean_x * mean_p
        combo = sigma_xx * sigma_pp - sigma_xp * sigma_xp
        if abs(combo.imag) > 1e-10 * max(abs(combo.real), _TINY):
            raise AccuracyLossError(
                f"uncertainty combination is not real: {combo!r}; moment inputs inconsistent"
            )
        return cls(
            mean_x=float(mean_x),
            mean_x2=float(mean_x2),
            mean_p=complex(mean_p),
            mean_p2=complex(mean_p2),
            mean_xp=complex(mean_xp),
            sigma_xx=float(sigma_xx),
            sigma_pp=complex(sigma_pp),
            sigma_xp=complex(sigma_xp),
            delta=float(combo.real),
        )


def robertson_delta(m: MomentSet) -> float:
    """The uncertainty combination Re(sigma_xx sigma_pp - sigma_xp^2)."""
    return float((m.sigma_xx * m.sigma_pp - m.sigma_xp * m.sigma_xp).real)


def default_moments_grid(p: PhysParams) -> GridSpec:
    """Moment integrands carry extra powers of x, so the right tail is
    taken wider than the plain state window; the periodic direction
    integrates exactly with few samples since densities are y-flat."""
    x_c = p.x_weight_mode
    return GridSpec(x_c - p.a0, x_c + 6.0 * p.a0, 16384, 16)


def moments_closed(q: QuantumNumbers, p: PhysParams) -> MomentSet:
    """Closed-form moments for the first three levels of a vertical family.

    Available for N in {0, 1, 2}; each entry is a combination of
    digamma/trigamma values at 2l+1..2l+5, ln(beta), and the geometry
    scale a0/2pi. The momentum moments are purely imaginary and shared
    by all three levels.
    """
    l, N = q.l, q.N
    if N not in (0, 1, 2):
        raise DomainError(f"closed-form moments exist for N in {{0,1,2}}, got N={N}")
    A = p.a0 / (2.0 * math.pi)
    lnb = math.log(p.beta)
    psi1 = digamma(2.0 * l + 1.0)
    z = {k: trigamma(2.0 * l + k) for k in (1, 2, 3, 4, 5)}
    mean_p = 1j * p.hbar * (2.0 * math.pi / p.a0) * (l + 1.0)
    if N == 0:
        mean_x = -A * (psi1 - lnb)
        variance_x = A * A * z[1]
        mean_xp = -1j * p.hbar * (l + 1.0) * (psi1 - lnb)
    elif N == 1:
        mean_x = -A * (psi1 - 1.0 / (2.0 * (l + 1.0)) - lnb)
        variance_x = A * A * (
            l * (4.0 * l + 3.0) / (2.0 * (2.0 * l + 1.0) * (l + 1.0) ** 2)
            + 2.0 * (l + 1.0) * z[1]
            - 2.0 * (2.0 * l + 1.0) * z[2]
            + (2.0 * l + 1.0) * z[3]
        )
        mean_xp = -1j * p.hbar * (l + 1.0) * (psi1 + l / (2.0 * (l + 1.0) ** 2) - lnb)
    else:
        mean_x = -A * (
            psi1 - (4.0 * l + 5.0) / (2.0 * (l + 1.0) * (2.0 * l + 3.0)) - lnb
        )
        poly = (
            64.0 * l**5 + 344.0 * l**4 + 656.0 * l**3 + 516.0 * l**2 + 125.0 * l - 13.0
        ) / (4.0 * (2.0 * l + 1.0) * (l + 2.0) * (l + 1.0) ** 2 * (2.0 * l + 3.0) ** 2)
        variance_x = A * A * (
            poly
            + (l + 1.0) * (2.0 * l + 3.0) * z[1]
            - 2.0 * (2.0 * l + 1.0) * (2.0 * l + 3.0) * z[2]
            + 2.0 * (2.0 * l + 1.0) * (3.0 * l + 4.0) * z[3]
            - 2.0 * (2.0 * l + 1.0) * (2.0 * l + 3.0) * z[4]
            + (2.0 * l + 1.0) * (l + 2.0) * z[5]
        )
        mean_xp = -1j * p.hbar * (l + 1.0) * (
            psi1 + l * (4.0 * l + 5.0) / (2.0 * (l + 1.0) ** 2 * (2.0 * l + 3.0)) - lnb
        )
    return MomentSet.from_means(
        mean_x=mean_x,
        mean_x2=mean_x * mean_x + variance_x,
        mean_p=mean_p,
        mean_p2=mean_p * mean_p,
        mean_xp=mean_xp,
        hbar=p.hbar,
    )


def _grid_moments(s: SampledState, hbar: float) -> MomentSet:
    """Raw moments of a sampled state by quadrature; the state is
    normalized by its own computed norm, so small grid-norm drift does
    not leak into the moments."""
    norm = grid_inner_product(s, s).real

    def braket(values: np.ndarray) -> complex:
        other = dataclasses.replace(s, values=values, labels=None)
        return grid_inner_product(s, other) / norm

    x_col = s.x[:, None]
    p_values = -1j * hbar * fd_derivative(s, "x", 1).values
    p2_values = -(hbar**2) * fd_derivative(s, "x", 2).values
    return MomentSet.from_means(
        mean_x=braket(x_col * s.values).real,
        mean_x2=braket(x_col**2 * s.values).real,
        mean_p=braket(p_values),
        mean_p2=braket(p2_values),
        mean_xp=braket(x_col * p_values),
        hbar=hbar,
    )


def moments_quadrature(
    q: QuantumNumbers, p: PhysParams, grid: GridSpec | None = None
) -> MomentSet:
    """Moments of an eigenstate by weighted grid quadrature.

    Momentum acts as -i hbar d/dx through the grid stencils, and the
    mixed moment applies x after the momentum. For N <= 2 the result
    must match :func:`moments_closed` entrywise; for larger N this is
    the only evaluation.
    """
    if grid is None:
        grid = default_moments_grid(p)
    return _grid_moments(wavefunction(q, p, grid), p.hbar)


def log_weighted_gamma_integral(nu: float, mu: float, j: int) -> tuple[float, float]:
    """Both routes to int_0^inf s^(nu-1) e^(-mu s) (ln s)^j ds, j in {1, 2}.

    Returns (quadrature, closed). The closed form is
    Gamma(nu)/mu^nu [(psi(nu) - ln mu)^(1+[j=2]) + trigamma(nu) [j=2]];
    the quadrature route rescales s = u/mu and integrates the Gamma
    weight directly. These are the integrals behind every first and
    second x-moment above.
    """
    if not (nu > 0.0 and mu > 0.0):
        raise DomainError(f"need nu > 0 and mu > 0, got nu={nu!r}, mu={mu!r}")
    if j not in (1, 2):
        raise DomainError(f"j must be 1 or 2, got {j!r}")
    lnmu = math.log(mu)

    def f(u: np.ndarray) -> np.ndarray:
        return (np.log(u) - lnmu) ** j

    quad = integrate_semi_infinite_u(f, nu - 1.0).value.real / mu**nu
    base = digamma(nu) - lnmu
    closed = math.exp(ln_gamma(nu)) / mu**nu * (base**2 + trigamma(nu) if j == 2 else base)
    return quad, closed


def landau_delta(lp: LandauParams, p: PhysParams) -> float:
    """Uncertainty of a flat-field comparison state by quadrature.

    The state is sampled on a synthetic box of 24 cyclotron radii around
    its centre (the Gaussian envelope is below 1e-15 at the edge), and
    the moments are taken under the flat measure the Landau states are
    normalized in.
    """
    r_c = LandauParams.cyclotron_radius(p)
    box = 24.0 * r_c
    p_box = dataclasses.replace(p, a0=box)
    if lp.gauge == "asymmetric":
        centre = lp.guiding_centre(p)
        grid = GridSpec(centre - 12.0 * r_c, centre + 12.0 * r_c, 4096, 8)
        state = landau_state_asym(lp, p_box, grid)
    else:
        grid = GridSpec(-12.0 * r_c, 12.0 * r_c, 4096, 512)
        state = landau_state_sym(lp.n, lp.l, p_box, grid)
    return robertson_delta(_grid_moments(state, p.hbar))


def uncertainty_limit_curve(N: int, l_list) -> list[tuple[int, float]]:
    """Closed-form uncertainty along one oblique family, in units of
    hbar^2.

    For N = 1 the curve is ((3l+2)/(l+1))^2 / 4, approaching 9/4; for
    N = 2 it is ((10l^2+19l+8)/((l+1)(2l+3)))^2 / 4, approaching 25/4.
    Both limits are flat-field values, reached at order 1/l.
    """
    if N not in (1, 2):
        raise DomainError(f"limit curves exist for N in {{1,2}}, got {N!r}")
    out: list[tuple[int, float]] = []
    for l in l_list:
        if l < 0:
            raise DomainError(f"l must be >= 0, got {l!r}")
        if N == 1:
            ratio = (3.0 * l + 2.0) / (l + 1.0)
        else:
            ratio = (10.0 * l * l + 19.0 * l + 8.0) / ((l + 1.0) * (2.0 * l + 3.0))
        out.append((int(l), 0.25 * ratio * ratio))
    return out
