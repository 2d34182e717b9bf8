"""Monte Carlo stress test of local extremality.

A perturbation moves beta (along the real axis) and every critical point;
the perturbed polynomial is int_{beta+dbeta}^z prod (w - zeta_j - dzeta_j) dw.
It is *admissible* when all its roots stay in the closed unit disk and an
*improvement* when, in addition, every critical point lies strictly outside
the circle of radius r about the new beta.  Sampling can only falsify: zero
improvements found is statistical evidence, not a proof.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from .poly import (
    CandidateParams,
    ComplexPoly,
    Spectrum,
    d_of,
    find_roots,
    from_roots,
    integrate_from,
    roots_batch,
    spectrum,
)

DISK_SLACK = 1e-12
STRICT_SLACK = 1e-12
CHUNK = 10_000


@dataclass(frozen=True)
class Perturbation:
    dbeta: float
    dzeta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dbeta", float(self.dbeta))
        object.__setattr__(self, "dzeta", np.asarray(self.dzeta, dtype=complex))

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.dbeta ** 2 + np.sum(np.abs(self.dzeta) ** 2)))

    @classmethod
    def zero(cls, n: int) -> "Perturbation":
        return cls(0.0, np.zeros(n - 1, dtype=complex))

    @classmethod
    def witness(cls, params: CandidateParams, spec: Spectrum) -> "Perturbation":
        """Move beta to 1 and every critical point to the origin."""
        return cls(1.0 - params.beta, -spec.critical_points)


@dataclass
class PerturbedSpectrum:
    beta: float
    roots: np.ndarray
    critical_points: np.ndarray
    pairing: np.ndarray
    dQ: float


@dataclass
class ProbeSample:
    perturbation: Perturbation
    is_admissible: bool
    is_improvement: bool
    dQ: float
    root_displacements: np.ndarray


def pair_roots(new, old) -> np.ndarray:
    """perm such that new[perm[i]] is matched with old[i], minimizing total distance."""
    cost = np.abs(np.asarray(old)[:, None] - np.asarray(new)[None, :])
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(len(old), dtype=int)
    perm[rows] = cols
    return perm


def apply_perturbation(params: CandidateParams, pert: Perturbation, spec: Spectrum = None):
    """Build the perturbed polynomial Q and its spectrum, roots paired with P's."""
    spec = spectrum(params) if spec is None else spec
    crits = spec.critical_points + pert.dzeta
    beta = params.beta + pert.dbeta
    Q = integrate_from(from_roots(crits), beta)
    roots = find_roots(Q)
    perm = pair_roots(roots, spec.roots)
    roots = roots[perm]
    return Q, PerturbedSpectrum(beta, roots, crits, perm, d_of(roots, crits))


def classify(params: CandidateParams, spec: Spectrum, pert: Perturbation) -> ProbeSample:
    _, qs = apply_perturbation(params, pert, spec)
    admissible = bool(np.max(np.abs(qs.roots)) <= 1 + DISK_SLACK)
    outside = bool(np.min(np.abs(qs.critical_points - qs.beta)) > spec.r + STRICT_SLACK)
    return ProbeSample(pert, admissible, admissible and outside, qs.dQ,
                       qs.roots - spec.roots)


@dataclass
class ScanStats:
    count: int
    scale: float
    admissible: int
    improvements: int
    max_dQ: Optional[float]
    dP: float
    rng_seed: int
    distribution: str = "gaussian"
    evidence: str = "statistical"

    @property
    def margin(self) -> Optional[float]:
        return None if self.max_dQ is None else self.dP - self.max_dQ

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "scale": self.scale,
            "admissible": self.admissible,
            "improvements": self.improvements,
            "max_dQ": self.max_dQ,
            "dP": self.dP,
            "margin": self.margin,
            "rng_seed": self.rng_seed,
            "distribution": self.distribution,
            "evidence": self.evidence,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _expand_batch(crits: np.ndarray) -> np.ndarray:
    """Rows of prod (w - crits[k, j]) in ascending coefficients."""
    nb, k = crits.shape
    c = np.ones((nb, 1), dtype=complex)
    for j in range(k):
        nxt = np.zeros((nb, c.shape[1] + 1), dtype=complex)
        nxt[:, 1:] += c
        nxt[:, :-1] -= c * crits[:, j : j + 1]
        c = nxt
    return c


def _integrate_batch(dp: np.ndarray, start: np.ndarray) -> np.ndarray:
    k = np.arange(1, dp.shape[1] + 1)
    q = np.concatenate([np.zeros((dp.shape[0], 1), dtype=complex), dp / k], axis=1)
    val = np.zeros(dp.shape[0], dtype=complex)
    for j in range(q.shape[1] - 1, -1, -1):
        val = val * start + q[:, j]
    q[:, 0] -= val
    return q


def sample_perturbations(rng: np.random.Generator, n: int, count: int, scale: float):
    """Gaussian shifts: dbeta real, each critical point shifted in Re and Im."""
    dbeta = scale * rng.standard_normal(count)
    dz = scale * (rng.standard_normal((count, n - 1)) + 1j * rng.standard_normal((count, n - 1)))
    return dbeta, dz


def evaluate_batch(params: CandidateParams, spec: Spectrum, dbeta, dzeta):
    """Admissibility, improvement flags and d(Q) for a batch of perturbations."""
    crits = spec.critical_points[None, :] + dzeta
    beta = params.beta + dbeta
    coeffs = _integrate_batch(_expand_batch(crits), beta)
    init = np.broadcast_to(spec.roots, (len(beta), len(spec.roots)))
    roots = roots_batch(coeffs, init=init)
    admissible = np.max(np.abs(roots), axis=1) <= 1 + DISK_SLACK
    outside = np.min(np.abs(crits - beta[:, None]), axis=1) > spec.r + STRICT_SLACK
    dist = np.abs(roots[:, :, None] - crits[:, None, :]).min(axis=2)
    return admissible, admissible & outside, dist.max(axis=1)


def neighborhood_scan(params: CandidateParams, count: int, scale: float,
                      rng_seed: int = 0, spec: Spectrum = None) -> ScanStats:
    """Sample ``count`` Gaussian perturbations of size ``scale`` and tally them."""
    spec = spectrum(params) if spec is None else spec
    rng = np.random.default_rng(rng_seed)
    n_adm = n_imp = 0
    max_dq = None
    done = 0
    while done < count:
        size = min(CHUNK, count - done)
        dbeta, dz = sample_perturbations(rng, params.n, size, scale)
        adm, imp, dq = evaluate_batch(params, spec, dbeta, dz)
        n_adm += int(adm.sum())
        n_imp += int(imp.sum())
        if adm.any():
            top = float(dq[adm].max())
            max_dq = top if max_dq is None else max(max_dq, top)
        done += size
    return ScanStats(count, float(scale), n_adm, n_imp, max_dq, spec.dP, rng_seed)


def predicted_displacement(params: CandidateParams, spec: Spectrum, z: complex,
                           pert: Perturbation) -> complex:
    """First- plus second-order change of root ``z`` for a collapsed-only shift.

    Only the n-3 copies of a may move (dbeta = dzeta_1 = dzeta_2 = 0).
    """
    from .variational import second_derivatives, sensitivity

    shifts = pert.dzeta[2:]
    S = shifts.sum()
    first = sensitivity(params, spec, z).dz_dzeta3
    sd = second_derivatives(params, spec, z)
    return first * S + 0.5 * (sd.mixed * S * S + sd.difference * np.sum(shifts ** 2))
