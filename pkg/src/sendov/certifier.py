"""Numerical verification of the eight sufficient properties A-H."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import variational
from .errors import VariationalError
from .linalg import NULL_TOL, jacobi_svd, left_null_space
from .poly import TOL_CIRCLE, CandidateParams, Spectrum, spectrum

TOLERANCES = {
    "A_max_modulus": 1e-8,
    "B_min_gap": 0.1,
    "C_beta_low": 0.7,
    "C_beta_high": 0.9,
    "D_equidistance": 1e-9,
    "D_radius": 0.9,
    "E_beta_minus_a": 0.9,
    "F_r_max": 0.97,
    "F_gap": 0.02,
    "G_min_c": 0.3,
    "H_sigma7": 0.04,
    "null_space": NULL_TOL,
    "circle_membership": TOL_CIRCLE,
}

ANGLE_GRID = 2048
GOLDEN_ITERS = 80


@dataclass
class PropertyResult:
    id: str
    measured: dict
    threshold: dict
    passed: bool
    margin: float
    note: str = ""

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "measured": self.measured,
            "threshold": self.threshold,
            "pass": self.passed,
            "margin": self.margin,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class PropertyReport:
    candidate: CandidateParams
    properties: list
    tolerances: dict = field(default_factory=lambda: dict(TOLERANCES))
    system: Optional[variational.VariationalSystem] = None

    @property
    def overall(self) -> bool:
        return all(p.passed for p in self.properties)

    def __getitem__(self, pid: str) -> PropertyResult:
        for p in self.properties:
            if p.id == pid:
                return p
        raise KeyError(pid)

    def failed(self) -> list:
        return [p.id for p in self.properties if not p.passed]

    def to_dict(self) -> dict:
        return {
            "candidate": self.candidate.to_dict(),
            "properties": [p.to_dict() for p in self.properties],
            "overall": self.overall,
            "tolerances": self.tolerances,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


@dataclass
class Certificate:
    c: np.ndarray
    min_c: float
    passed: bool
    null_dim: int
    note: str = ""


def _result(pid, measured, threshold, margins, note=""):
    margin = float(min(margins))
    return PropertyResult(pid, measured, threshold, bool(margin > 0), margin, note)


def check_geometry(params: CandidateParams, spec: Spectrum) -> list:
    """Properties A-F, each with measured values and its margin."""
    T = TOLERANCES
    roots, crits = spec.roots, spec.critical_points
    out = []

    maxmod = float(np.max(np.abs(roots)))
    dev = abs(maxmod - 1.0)
    out.append(_result("A", {"max_modulus": maxmod, "deviation": dev},
                       {"max_deviation": T["A_max_modulus"]},
                       [T["A_max_modulus"] - dev]))

    gaps = np.abs(roots[:, None] - roots[None, :])
    gaps[np.diag_indices_from(gaps)] = np.inf
    gap = float(gaps.min())
    out.append(_result("B", {"min_root_gap": gap}, {"min_gap": T["B_min_gap"]},
                       [gap - T["B_min_gap"]]))

    beta = params.beta
    out.append(_result("C", {"beta": beta},
                       {"low": T["C_beta_low"], "high": T["C_beta_high"]},
                       [beta - T["C_beta_low"], T["C_beta_high"] - beta]))

    dist = np.abs(crits - beta)
    spread = float(dist.max() - dist.min())
    common = float(dist.min())
    out.append(_result("D", {"spread": spread, "radius": common},
                       {"max_spread": T["D_equidistance"], "min_radius": T["D_radius"]},
                       [T["D_equidistance"] - spread, common - T["D_radius"]]))

    bma = beta - params.a
    out.append(_result("E", {"beta_minus_a": bma}, {"min": T["E_beta_minus_a"]},
                       [bma - T["E_beta_minus_a"]]))

    out.append(_result("F", {"r": spec.r, "R": spec.R, "r_minus_R": spec.r - spec.R},
                       {"r_max": T["F_r_max"], "min_gap": T["F_gap"]},
                       [T["F_r_max"] - spec.r, (spec.r - spec.R) - T["F_gap"]]))
    return out


def _normalized(c, f):
    cf = c @ f
    if abs(cf) < 1e-14:
        return None
    return c / cf


def _min_c_at(theta, u1, u2, f):
    c = _normalized(math.cos(theta) * u1 + math.sin(theta) * u2, f)
    return (-np.inf, None) if c is None else (float(c.min()), c)


def _golden_max(fun, lo, hi, iters=GOLDEN_ITERS):
    g = (math.sqrt(5) - 1) / 2
    x1, x2 = hi - g * (hi - lo), lo + g * (hi - lo)
    f1, f2 = fun(x1), fun(x2)
    for _ in range(iters):
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + g * (hi - lo)
            f2 = fun(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - g * (hi - lo)
            f1 = fun(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def _lp_certificate(N, f):
    """max t s.t. N y >= t, (N y) . f = 1; used for null spaces of dim >= 3."""
    from scipy.optimize import linprog

    k = N.shape[1]
    cost = np.zeros(k + 1)
    cost[-1] = -1.0
    A_ub = np.hstack([-N, np.ones((N.shape[0], 1))])
    A_eq = np.concatenate([N.T @ f, [0.0]])[None, :]
    res = linprog(cost, A_ub=A_ub, b_ub=np.zeros(N.shape[0]), A_eq=A_eq, b_eq=[1.0],
                  bounds=[(None, None)] * k + [(None, 1e6)], method="highs")
    if not res.success:
        return None
    return N @ res.x[:k]


def certify_G(system: variational.VariationalSystem, min_c: float = None) -> Certificate:
    """Search the left null space of E for c > 0 with c . f = 1.

    One-dimensional null spaces are fixed by the normalization.  A
    two-dimensional space is scanned on a grid of angles and refined by
    golden-section search on min_k c_k.
    """
    threshold = TOLERANCES["G_min_c"] if min_c is None else min_c
    N = left_null_space(system.E)
    dim = N.shape[1]
    rows = system.E.shape[0]
    if dim == 0:
        return Certificate(np.zeros(rows), 0.0, False, 0, "left null space is trivial")
    f = system.f
    if np.all(np.abs(N.T @ f) < 1e-14):
        return Certificate(np.zeros(rows), 0.0, False, dim, "c . f vanishes on the null space")
    if dim == 1:
        c = _normalized(N[:, 0], f)
        note = "unique certificate"
    elif dim == 2:
        u1, u2 = N[:, 0], N[:, 1]
        grid = np.arange(ANGLE_GRID) * (math.pi / ANGLE_GRID)
        vals = [_min_c_at(t, u1, u2, f)[0] for t in grid]
        k = int(np.argmax(vals))
        step = math.pi / ANGLE_GRID
        theta, _ = _golden_max(lambda t: _min_c_at(t, u1, u2, f)[0],
                               grid[k] - step, grid[k] + step)
        best = max((theta, grid[k]), key=lambda t: _min_c_at(t, u1, u2, f)[0])
        c = _min_c_at(best, u1, u2, f)[1]
        note = "angle scan over a two-dimensional certificate family"
    else:
        c = _lp_certificate(N, f)
        note = f"linear program over a {dim}-dimensional certificate family"
        if c is None:
            return Certificate(np.zeros(rows), 0.0, False, dim, note + " (infeasible)")
    mc = float(c.min())
    return Certificate(c, mc, mc > threshold, dim, note)


def certify_H(system: variational.VariationalSystem):
    """Seventh largest singular value of E and whether it clears the threshold."""
    s = jacobi_svd(system.E)[1]
    sigma7 = float(s[6]) if len(s) >= 7 else 0.0
    return sigma7, sigma7 > TOLERANCES["H_sigma7"]


def certify_all(params: CandidateParams) -> PropertyReport:
    """Evaluate all eight properties; property failures never raise."""
    spec = spectrum(params)
    props = check_geometry(params, spec)
    try:
        sens = variational.root_sensitivities(params, spec)
    except VariationalError as exc:
        note = f"variational system unavailable: {exc}"
        props.append(PropertyResult("G", {"min_c": 0.0, "null_dim": 0},
                                    {"min_c": TOLERANCES["G_min_c"]}, False,
                                    -TOLERANCES["G_min_c"], note))
        props.append(PropertyResult("H", {"sigma7": 0.0}, {"min": TOLERANCES["H_sigma7"]},
                                    False, -TOLERANCES["H_sigma7"], note))
        return PropertyReport(params, props)
    system = variational.build_system(params, spec, sens)
    cert = certify_G(system)
    system.c = cert.c
    props.append(PropertyResult(
        "G",
        {"min_c": cert.min_c, "null_dim": cert.null_dim, "c": cert.c.tolist()},
        {"min_c": TOLERANCES["G_min_c"]},
        cert.passed, cert.min_c - TOLERANCES["G_min_c"], cert.note))
    sigma7, ok = certify_H(system)
    props.append(PropertyResult("H", {"sigma7": sigma7, "m": spec.m},
                                {"min": TOLERANCES["H_sigma7"]}, ok,
                                sigma7 - TOLERANCES["H_sigma7"]))
    return PropertyReport(params, props, system=system)
