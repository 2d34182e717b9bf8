"""Square nonlinear systems for candidate construction, solved by damped Newton.

Unknowns are ordered (beta, a, b, c, d_1, d_2[, d_3]).  The residual holds
the equidistance (circle) equation, the two remainder coefficients of P
modulo each z^2 + d_i z + 1, and, for even n, P(-1).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .certifier import PropertyReport, certify_all
from .errors import ParameterError, SendovError
from .poly import CandidateParams, build_candidate, divmod_quadratic, evaluate

RESIDUAL_TOL = 1e-12
MAX_ITER = 200
FD_STEP = 1e-7
COND_LIMIT = 1e14
DEDUP_TOL = 1e-6


def unknown_names(n: int) -> tuple:
    k = 3 if n % 2 else 2
    return ("beta", "a", "b", "c") + tuple(f"d{i + 1}" for i in range(k))


def residual(n: int, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if len(x) != len(unknown_names(n)):
        raise ParameterError(f"n={n} takes {len(unknown_names(n))} unknowns, got {len(x)}")
    beta, a, b, c = x[:4]
    P = build_candidate(CandidateParams(n, beta, a, b, c, ()))
    out = [beta * beta + b * beta + c - (beta - a) ** 2]
    for d in x[4:]:
        _, r1, r0 = divmod_quadratic(P, d)
        out += [r1, r0]
    if n % 2 == 0:
        out.append(float(np.real(evaluate(P, -1.0))))
    return np.array(out)


def jacobian(n: int, x, step: float = FD_STEP) -> np.ndarray:
    """Central finite-difference Jacobian, step scaled by max(1, |x_i|)."""
    x = np.asarray(x, dtype=float)
    J = np.empty((len(x), len(x)))
    for i in range(len(x)):
        h = step * max(1.0, abs(x[i]))
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        J[:, i] = (residual(n, xp) - residual(n, xm)) / (2 * h)
    return J


@dataclass
class NewtonResult:
    x: np.ndarray
    converged: bool
    iterations: int
    residual_norm: float
    message: str = ""


def newton_solve(n: int, x0, tol: float = RESIDUAL_TOL, maxiter: int = MAX_ITER) -> NewtonResult:
    """Damped Newton with Armijo backtracking on ||F||^2."""
    x = np.array(x0, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ParameterError("initial guess must be finite")
    F = residual(n, x)
    norm = float(np.max(np.abs(F)))
    for it in range(maxiter):
        if norm < tol:
            return NewtonResult(x, True, it, norm)
        J = jacobian(n, x)
        cond = np.linalg.cond(J)
        if not np.isfinite(cond) or cond > COND_LIMIT:
            return NewtonResult(x, False, it, norm, f"singular Jacobian (cond {cond:.3e})")
        dx = np.linalg.solve(J, -F)
        phi0 = F @ F
        lam = 1.0
        while True:
            xt = x + lam * dx
            Ft = residual(n, xt)
            phit = Ft @ Ft
            if np.isfinite(phit) and phit <= (1 - 1e-4 * lam) * phi0:
                break
            lam *= 0.5
            if lam < 1e-10:
                # near the noise floor a full step may not lower ||F||
                if phi0 < (1e3 * tol) ** 2:
                    xt, Ft = x + dx, residual(n, x + dx)
                    break
                return NewtonResult(x, False, it, norm, "line search failed")
        x, F = xt, Ft
        norm = float(np.max(np.abs(F)))
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > 1e6:
            return NewtonResult(x, False, it + 1, norm, "diverged")
    if norm < tol:
        return NewtonResult(x, True, maxiter, norm)
    return NewtonResult(x, False, maxiter, norm, "iteration limit reached")


def canonical(n: int, x) -> np.ndarray:
    """Sort the interchangeable d_i so equal solutions compare equal."""
    x = np.asarray(x, dtype=float).copy()
    x[4:] = np.sort(x[4:])
    return x


@dataclass
class ConstructionResult:
    n: int
    candidates: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    log: list = field(default_factory=list)
    rejected: list = field(default_factory=list)

    def log_lines(self) -> str:
        return "".join(json.dumps(rec) + "\n" for rec in self.log)


def construct(n: int, seeds: Iterable, certify=certify_all) -> ConstructionResult:
    """Solve from every seed, deduplicate, and keep only certified solutions.

    Surviving candidates are ordered by beta.  ``rejected`` holds
    ``(params, report)`` for converged solutions that failed certification.
    """
    if n < 5:
        raise ParameterError(f"degree n={n} must be at least 5")
    out = ConstructionResult(n)
    found = []
    for k, seed in enumerate(seeds):
        seed = np.asarray(seed, dtype=float)
        rec = {"n": n, "seed_index": k, "seed": seed.tolist()}
        try:
            res = newton_solve(n, seed)
        except SendovError as exc:
            rec.update(converged=False, message=str(exc))
            out.log.append(rec)
            continue
        rec.update(converged=res.converged, iterations=res.iterations,
                   residual_norm=res.residual_norm, message=res.message)
        out.log.append(rec)
        if not res.converged:
            continue
        x = canonical(n, res.x)
        if any(np.max(np.abs(x - y)) < DEDUP_TOL for y in found):
            continue
        found.append(x)
    found.sort(key=lambda v: v[0])
    for x in found:
        params = CandidateParams.from_vector(n, x)
        try:
            params.validate()
            report = certify(params)
        except SendovError as exc:
            out.rejected.append((params, str(exc)))
            continue
        if report.overall:
            out.candidates.append(params)
            out.reports.append(report)
        else:
            out.rejected.append((params, report))
    return out


def jittered_seeds(base, count: int, scale: float = 1e-2, decimals: int = 3, rng_seed: int = 0):
    """The rounded base vector followed by ``count`` jittered copies."""
    rng = np.random.default_rng(rng_seed)
    base = np.round(np.asarray(base, dtype=float), decimals)
    yield base
    for _ in range(count):
        yield base + scale * rng.standard_normal(len(base))


def grid_seeds(n: int, angles=(2.0, 2.2)) -> list:
    """Coarse discovery grid.

    beta in 0.70..0.90 and a in -0.25..-0.05 (steps of 0.05), sorted distinct
    d_i in -1.5..1.5 (step 0.5).  The quadratic's roots are put at distance
    beta - a from beta, at angle ``phi`` from the positive real axis.
    """
    betas = np.round(np.arange(0.70, 0.9001, 0.05), 10)
    avals = np.round(np.arange(-0.25, -0.0499, 0.05), 10)
    dvals = np.round(np.arange(-1.5, 1.5001, 0.5), 10)
    k = 3 if n % 2 else 2
    seeds = []
    for beta, a, phi in itertools.product(betas, avals, angles):
        rho = beta - a
        re = beta + rho * math.cos(phi)
        b = -2 * re
        c = re * re + (rho * math.sin(phi)) ** 2
        for ds in itertools.combinations(dvals, k):
            seeds.append(np.array([beta, a, b, c, *ds]))
    return seeds


def interpolated_seed(n: int, lower: CandidateParams, upper: CandidateParams) -> np.ndarray:
    """Linear interpolation in n between two candidates (d_i padded/truncated)."""
    k = 3 if n % 2 else 2
    t = (n - lower.n) / (upper.n - lower.n)
    head = (1 - t) * lower.vector[:4] + t * upper.vector[:4]

    def ds(p: CandidateParams) -> np.ndarray:
        d = sorted(p.d)
        if len(d) < k:
            d = d + [1.9]
        return np.array(d[:k]) if len(d) == k else np.array(d[:2] + d[-1:])[:k]

    return np.concatenate([head, (1 - t) * ds(lower) + t * ds(upper)])


def construct_reference(n: int, table=None, decimals: int = 3) -> tuple:
    """Rounded published row -> Newton -> certification."""
    from .reference import reference_params

    ref = reference_params(n, table)
    seed = np.round(ref.vector, decimals)
    res = newton_solve(n, seed)
    params: Optional[CandidateParams] = None
    report: Optional[PropertyReport] = None
    if res.converged:
        params = CandidateParams.from_vector(n, canonical(n, res.x))
        report = certify_all(params)
    return ref, res, params, report
