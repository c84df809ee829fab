"""Build and solve the 8x8 wave-matching system of a single barrier.

A unit wave exp(i(k0 x - omega0 t)) comes in from the left.  The ansatz is

    x < 0:        psi = e^{i k0 x} + (c1 + j c2) e^{-i k0 x}
    0 <= x <= a:  psi = (1 + j r_plus)(c3 e^{i k+ x} + c4 e^{-i k+ x})
                      + (1 + j r_minus)(c5 e^{i k- x} + c6 e^{-i k- x})
    x > a:        psi = (c7 + j c8) e^{i k0 x}

Continuity of psi and psi' at x = 0 and x = a, split into alpha and beta
components, gives eight complex equations for c1..c8.  Two assemblies of the
same system are provided:

raw-ratio form
    The equations verbatim, with the divergent raw ratios r_plus/minus as
    coefficients.  Only valid away from the complex limit; kept as a
    cross-check surface.

regularized form (production path)
    Interior unknowns are pre-scaled, c3 = w_minus d3, c4 = w_minus d4,
    c5 = w_plus d5, c6 = w_plus d6, which replaces the ratio products in the
    alpha rows by w_plus/minus.  The beta rows then carry a common factor
    w_cross, which is divided out by additionally rescaling the quaternionic
    exterior unknowns, c2 = w_cross e2 and c8 = w_cross e8.  Every matrix
    entry is then bounded by max(1, k) for all theta in [0, pi], the system
    stays nonsingular at both poles, and c2 = c8 = 0 is recovered exactly in
    the complex limit.

The solver is a dense LU factorization with partial pivoting plus one step
of iterative refinement when needed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import SingularSystemError
from .model import (
    BarrierSpec,
    DispersionData,
    ModeRatios,
    check_nondegenerate,
    mode_ratios,
    wavenumbers,
)
from .quaternion import SymplecticPair

log = logging.getLogger(__name__)

# Solver gates.
_PIVOT_FLOOR = 1e-14          # times the largest matrix entry
_REFINE_TRIGGER = 1e-12       # backward error that triggers refinement
_RESIDUAL_ACCEPT = 1e-10      # backward error beyond which the solve fails
_COND_WARN = 1e8

REGULARIZED = "regularized"
RAW = "raw"


@dataclass(frozen=True, eq=False)
class MatchingSystem:
    """One assembled linear system M u = rhs.

    column_scale maps the solved unknowns back to the physical amplitudes,
    c_i = column_scale[i] * u_i (all ones for the raw form).
    """

    matrix: np.ndarray
    rhs: np.ndarray
    form: str
    column_scale: np.ndarray
    spec: BarrierSpec
    dispersion: DispersionData
    ratios: ModeRatios


@dataclass(frozen=True, eq=False)
class ScatteringAmplitudes:
    """Solved amplitudes c1..c8 plus solve diagnostics.

    interior holds the symplectic (alpha, beta) coefficient pairs of the four
    interior modes in the order (+k_plus, -k_plus, +k_minus, -k_minus); the
    beta entries stay finite for every theta because they are assembled from
    the regular combinations, never from raw ratios.
    """

    c1: complex
    c2: complex
    c3: complex
    c4: complex
    c5: complex
    c6: complex
    c7: complex
    c8: complex
    dispersion: DispersionData
    ratios: ModeRatios
    interior: tuple[SymplecticPair, SymplecticPair, SymplecticPair, SymplecticPair]
    residual: float
    condition: float
    form: str
    solution: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3, self.c4,
                         self.c5, self.c6, self.c7, self.c8], dtype=complex)


def build_system(spec: BarrierSpec, form: str = REGULARIZED) -> MatchingSystem:
    """Assemble the matching system for spec in the requested form.

    The raw-ratio form needs sin(theta) above the complex-limit cutoff; the
    regularized form accepts any direction.
    """
    if form not in (REGULARIZED, RAW):
        raise ValueError(f"unknown system form {form!r}")
    check_nondegenerate(spec)
    disp = wavenumbers(spec)
    ratios = mode_ratios(spec.theta, spec.phi)
    k0, kp, km = disp.k0, disp.k_plus, disp.k_minus
    ep = np.exp(1j * spec.a * kp)
    em = np.exp(1j * spec.a * km)
    e0 = np.exp(1j * spec.a * k0)

    m = np.zeros((8, 8), dtype=complex)
    if form == RAW:
        rp, rm = ratios.r_plus, ratios.r_minus
        m[0] = [1, 0, -1, -1, -1, -1, 0, 0]
        m[1] = [0, 1, -rp, -rp, -rm, -rm, 0, 0]
        m[2] = [-k0, 0, -kp, kp, -km, km, 0, 0]
        m[3] = [0, -k0, -kp * rp, kp * rp, -km * rm, km * rm, 0, 0]
        m[4] = [0, 0, ep, 1 / ep, em, 1 / em, -e0, 0]
        m[5] = [0, 0, ep * rp, rp / ep, em * rm, rm / em, 0, -e0]
        m[6] = [0, 0, kp * ep, -kp / ep, km * em, -km / em, -k0 * e0, 0]
        m[7] = [0, 0, kp * ep * rp, -kp * rp / ep, km * em * rm, -km * rm / em, 0, -k0 * e0]
        column_scale = np.ones(8, dtype=complex)
    else:
        wp, wm, wx = ratios.w_plus, ratios.w_minus, ratios.w_cross
        m[0] = [1, 0, -wm, -wm, -wp, -wp, 0, 0]
        m[1] = [0, 1, -1, -1, -1, -1, 0, 0]
        m[2] = [-k0, 0, -kp * wm, kp * wm, -km * wp, km * wp, 0, 0]
        m[3] = [0, -k0, -kp, kp, -km, km, 0, 0]
        m[4] = [0, 0, ep * wm, wm / ep, em * wp, wp / em, -e0, 0]
        m[5] = [0, 0, ep, 1 / ep, em, 1 / em, 0, -e0]
        m[6] = [0, 0, kp * ep * wm, -kp * wm / ep, km * em * wp, -km * wp / em, -k0 * e0, 0]
        m[7] = [0, 0, kp * ep, -kp / ep, km * em, -km / em, 0, -k0 * e0]
        column_scale = np.array([1, wx, wm, wm, wp, wp, 1, wx], dtype=complex)

    rhs = -np.array([1, 0, k0, 0, 0, 0, 0, 0], dtype=complex)
    return MatchingSystem(matrix=m, rhs=rhs, form=form, column_scale=column_scale,
                          spec=spec, dispersion=disp, ratios=ratios)


def _backward_error(m: np.ndarray, u: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, float]:
    r = rhs - m @ u
    denom = (np.linalg.norm(m, np.inf) * np.linalg.norm(u, np.inf)
             + np.linalg.norm(rhs, np.inf))
    return r, float(np.linalg.norm(r, np.inf) / denom)


def solve(system: MatchingSystem) -> ScatteringAmplitudes:
    """LU-solve a matching system and map back to physical amplitudes."""
    m, rhs = system.matrix, system.rhs
    scale = float(np.max(np.abs(m)))
    lu, piv = scipy.linalg.lu_factor(m, check_finite=True)
    pivots = np.abs(np.diag(lu))
    if pivots.min() < _PIVOT_FLOOR * scale:
        raise SingularSystemError(
            f"matching matrix is numerically singular (pivot {pivots.min():.3e} "
            f"against scale {scale:.3e})")
    u = scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)
    r, err = _backward_error(m, u, rhs)
    if err > _REFINE_TRIGGER:
        u = u + scipy.linalg.lu_solve((lu, piv), r, check_finite=False)
        r, err = _backward_error(m, u, rhs)
    if err > _RESIDUAL_ACCEPT:
        raise SingularSystemError(
            f"matching solve did not converge: backward error {err:.3e}")
    condition = float(np.linalg.norm(m, 1) * np.linalg.norm(np.linalg.inv(m), 1))
    if condition > _COND_WARN:
        log.warning("matching matrix badly conditioned: cond_1 = %.3e "
                    "(form=%s, theta=%.6g)", condition, system.form,
                    system.spec.theta)

    c = system.column_scale * u
    ratios = system.ratios
    if system.form == REGULARIZED:
        wp, wm, wx = ratios.w_plus, ratios.w_minus, ratios.w_cross
        d3, d4, d5, d6 = u[2], u[3], u[4], u[5]
        interior = (SymplecticPair(complex(wm * d3), complex(wx * d3)),
                    SymplecticPair(complex(wm * d4), complex(wx * d4)),
                    SymplecticPair(complex(wp * d5), complex(wx * d5)),
                    SymplecticPair(complex(wp * d6), complex(wx * d6)))
    else:
        rp, rm = ratios.r_plus, ratios.r_minus
        interior = (SymplecticPair(complex(c[2]), complex(rp * c[2])),
                    SymplecticPair(complex(c[3]), complex(rp * c[3])),
                    SymplecticPair(complex(c[4]), complex(rm * c[4])),
                    SymplecticPair(complex(c[5]), complex(rm * c[5])))

    residual = float(np.linalg.norm(rhs - m @ u, np.inf))
    return ScatteringAmplitudes(
        c1=complex(c[0]), c2=complex(c[1]), c3=complex(c[2]), c4=complex(c[3]),
        c5=complex(c[4]), c6=complex(c[5]), c7=complex(c[6]), c8=complex(c[7]),
        dispersion=system.dispersion, ratios=ratios, interior=interior,
        residual=residual, condition=condition, form=system.form, solution=u)


def solve_spec(spec: BarrierSpec, form: str = REGULARIZED) -> ScatteringAmplitudes:
    """Convenience wrapper: build and solve in one call."""
    return solve(build_system(spec, form))


def reflection(amps: ScatteringAmplitudes) -> SymplecticPair:
    """Reflected amplitude (c1, c2)."""
    return SymplecticPair(amps.c1, amps.c2)


def transmission(amps: ScatteringAmplitudes) -> SymplecticPair:
    """Transmitted amplitude (c7, c8)."""
    return SymplecticPair(amps.c7, amps.c8)
