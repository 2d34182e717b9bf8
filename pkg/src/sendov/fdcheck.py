"""Finite-difference oracles for root sensitivities.

Every oracle re-expands P' from explicitly perturbed critical points,
re-solves for all roots and tracks the root of interest by nearest
neighbour; nothing here touches the analytic formulas.
"""

from __future__ import annotations

import numpy as np

from . import variational
from .poly import CandidateParams, Spectrum, find_roots, from_roots, integrate_from, spectrum

H_FIRST = 1e-6
H_SECOND = 1e-4
TOL_FIRST = 1e-6
TOL_SECOND = 1e-4


def tracked_root(crits, beta, z, init) -> complex:
    """Root nearest ``z`` of int_beta^w prod(t - crits) dt."""
    P = integrate_from(from_roots(crits), beta)
    roots = find_roots(P, init=init)
    return complex(roots[np.argmin(np.abs(roots - z))])


def _shifted(crits, shifts: dict):
    out = np.array(crits, dtype=complex)
    for k, dv in shifts.items():
        out[k] += dv
    return out


def fd_dbeta(params: CandidateParams, spec: Spectrum, z, h=H_FIRST) -> complex:
    crits = spec.critical_points
    zp = tracked_root(crits, params.beta + h, z, spec.roots)
    zm = tracked_root(crits, params.beta - h, z, spec.roots)
    return (zp - zm) / (2 * h)


def fd_dzeta(params: CandidateParams, spec: Spectrum, z, index: int, h=H_FIRST) -> complex:
    """d z / d zeta_index; indices 0, 1 are the quadratic's roots, >= 2 copies of a."""
    crits = spec.critical_points
    zp = tracked_root(_shifted(crits, {index: h}), params.beta, z, spec.roots)
    zm = tracked_root(_shifted(crits, {index: -h}), params.beta, z, spec.roots)
    return (zp - zm) / (2 * h)


def fd_pure(params: CandidateParams, spec: Spectrum, z, h=H_SECOND) -> complex:
    crits = spec.critical_points
    beta = params.beta
    zp = tracked_root(_shifted(crits, {2: h}), beta, z, spec.roots)
    z0 = tracked_root(crits, beta, z, spec.roots)
    zm = tracked_root(_shifted(crits, {2: -h}), beta, z, spec.roots)
    return (zp - 2 * z0 + zm) / h ** 2


def fd_mixed(params: CandidateParams, spec: Spectrum, z, h=H_SECOND) -> complex:
    crits = spec.critical_points
    beta = params.beta
    vals = {}
    for s3 in (1, -1):
        for s4 in (1, -1):
            shifted = _shifted(crits, {2: s3 * h, 3: s4 * h})
            vals[s3, s4] = tracked_root(shifted, beta, z, spec.roots)
    return (vals[1, 1] - vals[1, -1] - vals[-1, 1] + vals[-1, -1]) / (4 * h ** 2)


def _rel(analytic, numeric) -> float:
    return abs(analytic - numeric) / max(abs(numeric), 1e-300)


def run_derivative_checks(params: CandidateParams, spec: Spectrum = None) -> dict:
    """Worst relative error per derivative kind over all unit-circle roots.

    Also reports the largest discrepancy between the first derivatives with
    respect to two different collapsed copies of a (they should coincide).
    """
    spec = spectrum(params) if spec is None else spec
    sens = variational.root_sensitivities(params, spec)
    worst = {"dbeta": 0.0, "dzeta1": 0.0, "dzeta2": 0.0, "dzeta3": 0.0,
             "pure": 0.0, "mixed": 0.0, "collapsed_copies": 0.0}
    for s in sens:
        z = s.z
        worst["dbeta"] = max(worst["dbeta"], _rel(s.dz_dbeta, fd_dbeta(params, spec, z)))
        worst["dzeta1"] = max(worst["dzeta1"], _rel(s.dz_dzeta1, fd_dzeta(params, spec, z, 0)))
        worst["dzeta2"] = max(worst["dzeta2"], _rel(s.dz_dzeta2, fd_dzeta(params, spec, z, 1)))
        d3 = fd_dzeta(params, spec, z, 2)
        d4 = fd_dzeta(params, spec, z, params.n - 2)
        worst["dzeta3"] = max(worst["dzeta3"], _rel(s.dz_dzeta3, d3))
        worst["collapsed_copies"] = max(worst["collapsed_copies"], _rel(d3, d4))
        sd = variational.second_derivatives(params, spec, z)
        worst["pure"] = max(worst["pure"], _rel(sd.pure, fd_pure(params, spec, z)))
        worst["mixed"] = max(worst["mixed"], _rel(sd.mixed, fd_mixed(params, spec, z)))
    return worst


def derivative_tolerances() -> dict:
    return {"dbeta": TOL_FIRST, "dzeta1": TOL_FIRST, "dzeta2": TOL_FIRST,
            "dzeta3": TOL_FIRST, "collapsed_copies": TOL_FIRST,
            "pure": TOL_SECOND, "mixed": TOL_SECOND}
