"""Root sensitivities and the linearized constraint system E, f.

Variables are ordered as in ``VARIABLES``: the real shift of beta, the real
and imaginary parts of the shifts of the two simple critical points, and
the real and imaginary parts of S, the summed shift of the n-3 critical
points collapsed at a.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import VariationalError
from .poly import (
    CandidateParams,
    ComplexPoly,
    Spectrum,
    antiderivative,
    derivative,
    evaluate,
    pprime,
)

VARIABLES = ("dbeta", "re_dz1", "im_dz1", "re_dz2", "im_dz2", "re_S", "im_S")
DIVISOR_RTOL = 1e-10
SIMPLE_ROOT_TOL = 1e-12


@dataclass(frozen=True)
class RootSensitivity:
    z: complex
    dz_dbeta: complex
    dz_dzeta1: complex
    dz_dzeta2: complex
    dz_dzeta3: complex
    f_coeff: float


@dataclass(frozen=True)
class SecondDerivatives:
    pure: complex
    mixed: complex

    @property
    def difference(self) -> complex:
        return self.pure - self.mixed


@dataclass
class VariationalSystem:
    E: np.ndarray
    f: np.ndarray
    c: Optional[np.ndarray] = None

    @property
    def shape(self):
        return self.E.shape

    def to_dict(self) -> dict:
        out = {
            "E": self.E.tolist(),
            "f": self.f.tolist(),
            "variables": list(VARIABLES),
        }
        if self.c is not None:
            out["c"] = self.c.tolist()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def divide_linear(p: ComplexPoly, zeta: complex):
    """Synthetic division by (w - zeta): returns (quotient coeffs, remainder)."""
    c = p.coeffs
    q = np.zeros(len(c) - 1, dtype=complex)
    acc = 0j
    for k in range(len(c) - 1, 0, -1):
        acc = acc * zeta + c[k]
        q[k - 1] = acc
    rem = acc * zeta + c[0]
    return q, rem


def divide_exact(dp: ComplexPoly, zeta: complex, power: int = 1) -> ComplexPoly:
    """dp / (w - zeta)^power, rejecting a non-exact divisor."""
    scale = float(np.max(np.abs(dp.coeffs)))
    cur = dp
    for _ in range(power):
        q, rem = divide_linear(cur, zeta)
        if abs(rem) > DIVISOR_RTOL * scale * max(1.0, abs(zeta)) ** dp.degree:
            raise VariationalError(
                f"(w - {zeta}) does not divide P' exactly (remainder {abs(rem):.3e})"
            )
        cur = ComplexPoly(q)
    return cur


def path_integral(dp: ComplexPoly, start: complex, end: complex,
                  zeta: complex, power: int = 1) -> complex:
    """int_start^end dp(w) / (w - zeta)^power dw by exact division."""
    Q = antiderivative(divide_exact(dp, zeta, power))
    return complex(evaluate(Q, end) - evaluate(Q, start))


def integral_pprime_over_factor(params: CandidateParams, z_end: complex,
                                zeta: complex, power: int = 1) -> complex:
    """int_beta^z_end P'(w) / (w - zeta)^power dw.

    ``power=1`` with ``zeta`` any critical point, or ``power=2`` with
    ``zeta = a`` (the squared factor of the collapsed critical point).
    """
    return path_integral(pprime(params), params.beta, z_end, zeta, power)


def _checked_pprime_at(dp: ComplexPoly, z: complex) -> complex:
    val = complex(evaluate(dp, z))
    if abs(val) < SIMPLE_ROOT_TOL:
        raise VariationalError(f"P'(z) vanishes at z={z}: root is not simple")
    return val


def sensitivity(params: CandidateParams, spec: Spectrum, z: complex) -> RootSensitivity:
    dp = pprime(params)
    dpz = _checked_pprime_at(dp, z)
    zeta1, zeta2 = spec.critical_points[0], spec.critical_points[1]
    beta = params.beta
    sq = path_integral(dp, beta, z, params.a, 2)
    return RootSensitivity(
        z=complex(z),
        dz_dbeta=complex(evaluate(dp, beta)) / dpz,
        dz_dzeta1=path_integral(dp, beta, z, zeta1) / dpz,
        dz_dzeta2=path_integral(dp, beta, z, zeta2) / dpz,
        dz_dzeta3=path_integral(dp, beta, z, params.a) / dpz,
        f_coeff=float(-(sq / (2 * z * dpz)).real),
    )


def root_sensitivities(params: CandidateParams, spec: Spectrum) -> list:
    """Lemma-style first derivatives of every unit-circle root."""
    return [sensitivity(params, spec, z) for z in spec.circle_roots]


def second_derivatives(params: CandidateParams, spec: Spectrum, z: complex) -> SecondDerivatives:
    """Second derivatives of root ``z`` with respect to collapsed critical points.

    ``pure`` differentiates twice in one copy of a, ``mixed`` once in each of
    two distinct copies.
    """
    dp = pprime(params)
    dpz = _checked_pprime_at(dp, z)
    ddpz = complex(evaluate(derivative(dp), z))
    a = params.a
    first = path_integral(dp, params.beta, z, a) / dpz
    sq = path_integral(dp, params.beta, z, a, 2)
    common = 2.0 / (z - a) * first - ddpz / dpz * first ** 2
    return SecondDerivatives(pure=common, mixed=common - sq / dpz)


def build_system(params: CandidateParams, spec: Spectrum,
                 sens: Sequence[RootSensitivity]) -> VariationalSystem:
    """Assemble the (m+3) x 7 matrix E and the multiplier vector f."""
    if len(sens) != spec.m:
        raise VariationalError(
            f"{len(sens)} sensitivities supplied for m={spec.m} circle roots"
        )
    n, beta, a = params.n, params.beta, params.a
    rows = spec.m + 3
    E = np.zeros((rows, 7))
    f = np.zeros(rows)
    for k in range(2):
        w = 1.0 / (spec.critical_points[k] - beta)
        E[k, 0] = w.real
        E[k, 1 + 2 * k] = -w.real
        E[k, 2 + 2 * k] = w.imag
    E[2, 0] = -(n - 3) / (beta - a)
    E[2, 5] = 1.0 / (beta - a)
    f[2] = -1.0 / (2.0 * (beta - a) ** 2)
    for i, s in enumerate(sens):
        row = 3 + i
        E[row, 0] = (s.dz_dbeta / s.z).real
        for col, g in ((1, s.dz_dzeta1), (3, s.dz_dzeta2), (5, s.dz_dzeta3)):
            w = g / s.z
            E[row, col] = w.real
            E[row, col + 1] = -w.imag
        f[row] = s.f_coeff
    return VariationalSystem(E=E, f=f)
