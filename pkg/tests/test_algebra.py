"""Ladder operators as differential stencils against integer arithmetic.

The matrix elements sqrt((n+l)(n-l-1)) come out of grid derivatives
here, so agreement with the integer formula is a genuine cross-check of
the operator realization, not bookkeeping. Adjointness is checked as an
inner-product identity, and a deliberately mixed state confirms that
eigen-residuals actually detect non-eigenstates.
"""

import math

import numpy as np
import pytest

from morseband import (
    DomainError,
    OperatorResult,
    QuantumNumbers,
    algebra_grid,
    apply_casimir,
    apply_hamiltonian,
    apply_L3,
    apply_Lminus,
    apply_Lplus,
    commutator_residual,
    energy,
    grid_inner_product,
    wavefunction,
    weighted_norm,
)

BASIS = ((0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4))
MARGIN = 8


def _state(l: int, n: int, p):
    return wavefunction(QuantumNumbers(l, n), p, algebra_grid(p))


def _diff_norm(a, b) -> float:
    vals = a.values - b.values
    return weighted_norm(
        type(a)(
            grid=a.grid,
            x=a.x,
            y=a.y,
            values=vals,
            weight=a.weight,
            y_period=a.y_period,
        ),
        exclude_margin=MARGIN,
    )


class TestLadderAction:
    def test_raising_matrix_elements(self, p):
        for l, n in BASIS:
            lower = _state(l, n, p)
            upper = _state(l, n + 1, p)
            coeff = math.sqrt((n + 1 + l) * (n - l))
            raised = apply_Lplus(lower, p)
            scaled = type(upper)(
                grid=upper.grid,
                x=upper.x,
                y=upper.y,
                values=coeff * upper.values,
                weight=upper.weight,
                y_period=upper.y_period,
            )
            assert _diff_norm(raised, scaled) <= 1e-6 * max(coeff, 1.0)

    def test_lowering_matrix_elements(self, p):
        for l, n in BASIS:
            if n == l + 1:
                continue
            upper = _state(l, n, p)
            lower = _state(l, n - 1, p)
            coeff = math.sqrt((n + l) * (n - l - 1))
            dropped = apply_Lminus(upper, p)
            scaled = type(lower)(
                grid=lower.grid,
                x=lower.x,
                y=lower.y,
                values=coeff * lower.values,
                weight=lower.weight,
                y_period=lower.y_period,
            )
            assert _diff_norm(dropped, scaled) <= 1e-6 * max(coeff, 1.0)

    def test_bottom_states_are_annihilated(self, p):
        for l in range(5):
            s = _state(l, l + 1, p)
            killed = apply_Lminus(s, p)
            assert weighted_norm(killed, exclude_margin=MARGIN) <= 1e-6

    def test_l3_eigenvalue_is_n(self, p):
        # spectral derivative along y: the weighted residual is near
        # machine level, far tighter than the stencil-based checks
        for l, n in ((0, 1), (1, 3), (2, 4)):
            s = _state(l, n, p)
            rotated = apply_L3(s, p)
            scaled = type(s)(
                grid=s.grid,
                x=s.x,
                y=s.y,
                values=n * s.values,
                weight=s.weight,
                y_period=s.y_period,
            )
            assert _diff_norm(rotated, scaled) <= 1e-10 * n

    def test_adjoint_pairing(self, p):
        # <L+ a | b> = <a | L- b> ties the two stencils together through
        # the measure; this fails if either drops its weight factor
        a = _state(1, 2, p)
        b = _state(1, 3, p)
        lhs = grid_inner_product(apply_Lplus(a, p), b)
        rhs = grid_inner_product(a, apply_Lminus(b, p))
        assert abs(lhs - rhs) <= 1e-6


class TestQuadraticOperators:
    def test_casimir_eigenvalue(self, p):
        for l, n in BASIS:
            res = apply_casimir(_state(l, n, p), p)
            assert res.residual_norm <= 1e-6

    def test_casimir_explicit_eigenvalue_override(self, p):
        s = _state(1, 2, p)
        honest = apply_casimir(s, p, reference_eigenvalue=-2.0)
        assert honest.residual_norm <= 1e-6
        off = apply_casimir(s, p, reference_eigenvalue=-2.5)
        assert off.residual_norm > 0.1

    def test_hamiltonian_energies(self, p):
        for l, n in BASIS:
            res = apply_hamiltonian(_state(l, n, p), p)
            assert res.residual_norm <= 1e-6

    def test_superposition_is_not_an_eigenstate(self, p):
        a = _state(0, 1, p)
        b = _state(0, 2, p)
        mixed = type(a)(
            grid=a.grid,
            x=a.x,
            y=a.y,
            values=(a.values + b.values) / math.sqrt(2.0),
            weight=a.weight,
            y_period=a.y_period,
        )
        res = apply_hamiltonian(mixed, p, reference_energy=energy(QuantumNumbers(0, 1), p))
        assert res.residual_norm > 0.1

    def test_unlabeled_state_needs_reference(self, p):
        s = _state(0, 1, p)
        bare = type(s)(
            grid=s.grid,
            x=s.x,
            y=s.y,
            values=s.values,
            weight=s.weight,
            y_period=s.y_period,
        )
        with pytest.raises(DomainError):
            apply_hamiltonian(bare, p)
        with pytest.raises(DomainError):
            apply_casimir(bare, p)

    def test_result_container_guard(self, p):
        s = _state(0, 1, p)
        with pytest.raises(DomainError):
            OperatorResult(output=s, residual_norm=-1.0)


class TestCommutators:
    @pytest.mark.parametrize(
        "pair", ["ladder", "three_plus", "three_minus", "h_three", "h_casimir"]
    )
    def test_identities_hold_on_eigenstates(self, p, pair):
        worst = max(
            commutator_residual(_state(l, n, p), p, pair) for l, n in BASIS
        )
        assert worst <= 1e-5

    def test_hamiltonian_does_not_commute_with_raising(self, p):
        # the spectrum is not linear in n, so [H, L+] must stay far from
        # zero; this guards against a "commutator" that is trivially 0
        value = commutator_residual(_state(1, 2, p), p, "h_plus")
        assert value > 1e-2

    def test_unknown_pair(self, p):
        with pytest.raises(DomainError):
            commutator_residual(_state(0, 1, p), p, "h_minus")
