import math

import numpy as np
import pytest

from qkg.closedform import amplitudes_closed
from qkg.errors import (
    ComplexLimitDegeneracyError,
    DegenerateWavenumberError,
    SingularSystemError,
)
from qkg.matcher import (
    RAW,
    REGULARIZED,
    build_system,
    reflection,
    solve,
    solve_spec,
    transmission,
)
from qkg.model import BarrierSpec, dispersion_residual, wavenumbers


class TestBuildSystem:
    def test_raw_first_row_and_rhs(self, spec_point):
        system = build_system(spec_point, form=RAW)
        assert np.array_equal(system.matrix[0],
                              np.array([1, 0, -1, -1, -1, -1, 0, 0], complex))
        k0 = wavenumbers(spec_point).k0
        assert np.array_equal(system.rhs,
                              -np.array([1, 0, k0, 0, 0, 0, 0, 0], complex))

    def test_unknown_form_rejected(self, spec_point):
        with pytest.raises(ValueError):
            build_system(spec_point, form="cholesky")

    def test_raw_form_needs_angle(self):
        spec = BarrierSpec(1.0, 0.3, 1.0, 0.0, 0.0)
        with pytest.raises(ComplexLimitDegeneracyError):
            build_system(spec, form=RAW)

    def test_degenerate_spec_rejected(self):
        with pytest.raises(DegenerateWavenumberError):
            build_system(BarrierSpec(1.0, 1.0, 1.0, 0.5, 0.0))

    def test_regularized_rows_are_raw_rows_recombined(self, spec_factory):
        # row pairs of the two forms span the same constraints: the
        # regularized beta rows are the raw beta rows divided by w_cross
        # after the column regrouping, so both must accept the same c vector
        spec = spec_factory(theta_min=0.3, theta_max=math.pi - 0.3)
        amps = solve_spec(spec, form=REGULARIZED)
        raw = build_system(spec, form=RAW)
        residual = np.abs(raw.matrix @ amps.as_array() - raw.rhs).max()
        assert residual < 1e-12


class TestSolveKnownCases:
    def test_example_point_against_closed_form(self, spec_point):
        got = solve_spec(spec_point).as_array()
        want = amplitudes_closed(spec_point).as_array()
        assert np.abs(got - want).max() < 1e-10

    def test_free_potential_passthrough(self):
        # V0 = 0: nothing reflects, nothing converts, but the forward
        # interior coefficients still split the unit wave between the two
        # (now degenerate) branches
        spec = BarrierSpec(a=2.0, v0=0.0, omega0=1.0, theta=1.1, phi=0.4)
        amps = solve_spec(spec)
        for c in (amps.c1, amps.c2, amps.c4, amps.c6, amps.c8):
            assert abs(c) < 1e-13
        assert amps.c7 == pytest.approx(1.0, abs=1e-13)
        assert amps.c3 == pytest.approx(math.sin(spec.theta / 2) ** 2, abs=1e-13)
        assert amps.c5 == pytest.approx(math.cos(spec.theta / 2) ** 2, abs=1e-13)

    def test_complex_limit_exact_zeros(self):
        spec = BarrierSpec(a=2.3, v0=0.6, omega0=1.0, theta=0.0, phi=0.0)
        amps = solve_spec(spec)
        assert amps.c2 == 0.0
        assert amps.c8 == 0.0
        for pair in amps.interior:
            assert pair.beta == 0.0
        assert abs(amps.c1) ** 2 + abs(amps.c7) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_zero_width_barrier_is_transparent(self):
        amps = solve_spec(BarrierSpec(0.0, 0.7, 1.0, 1.0, 2.0))
        assert amps.c1 == pytest.approx(0.0, abs=1e-14)
        assert amps.c2 == pytest.approx(0.0, abs=1e-14)
        assert amps.c7 == pytest.approx(1.0, abs=1e-14)
        assert amps.c8 == pytest.approx(0.0, abs=1e-14)


class TestSolveProperties:
    def test_raw_equals_regularized_away_from_poles(self, spec_factory):
        for _ in range(50):
            spec = spec_factory(theta_min=0.2, theta_max=math.pi - 0.2)
            a = solve_spec(spec, form=REGULARIZED).as_array()
            b = solve_spec(spec, form=RAW).as_array()
            assert np.abs(a - b).max() < 1e-12 * max(1.0, np.abs(a).max())

    def test_continuous_through_the_pole(self):
        base = dict(a=1.7, v0=0.5, omega0=1.0, phi=0.9)
        at_pole = solve_spec(BarrierSpec(theta=0.0, **base)).as_array()
        near = solve_spec(BarrierSpec(theta=1e-4, **base)).as_array()
        assert np.abs(near - at_pole).max() < 1e-3

    def test_interior_pairs_satisfy_mode_equations(self, spec_factory):
        for _ in range(30):
            spec = spec_factory()
            amps = solve_spec(spec)
            d = amps.dispersion
            for pair, k in zip(amps.interior,
                               (d.k_plus, d.k_plus, d.k_minus, d.k_minus)):
                tol = 1e-9 * (1.0 + pair.norm()) * (spec.omega0 ** 2 + spec.v0 ** 2)
                assert dispersion_residual(k, spec, pair) < tol

    def test_unitarity_of_exterior_amplitudes(self, spec_factory):
        for _ in range(100):
            amps = solve_spec(spec_factory())
            total = sum(abs(c) ** 2 for c in
                        (amps.c1, amps.c2, amps.c7, amps.c8))
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_diagnostics_populated(self, spec_point):
        amps = solve_spec(spec_point)
        assert amps.form == REGULARIZED
        assert amps.residual < 1e-12
        assert amps.condition >= 1.0
        assert amps.solution.shape == (8,)

    def test_reflection_transmission_helpers(self, spec_point):
        amps = solve_spec(spec_point)
        assert reflection(amps).alpha == amps.c1
        assert reflection(amps).beta == amps.c2
        assert transmission(amps).alpha == amps.c7
        assert transmission(amps).beta == amps.c8


class TestSolveFailureModes:
    @pytest.mark.filterwarnings("ignore::scipy.linalg.LinAlgWarning")
    def test_singular_matrix_reported(self, spec_point):
        system = build_system(spec_point)
        system.matrix[:, 0] = system.matrix[:, 1]        # force rank loss
        with pytest.raises(SingularSystemError):
            solve(system)
