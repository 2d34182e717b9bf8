"""Complex polynomial kernel: construction, evaluation, root finding and d(P).

Coefficients are stored in ascending degree order throughout, so
``coeffs[k]`` multiplies ``z**k``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ParameterError, RootFindingError

TRIM_RTOL = 1e-14
REAL_RTOL = 1e-12
TOL_CIRCLE = 1e-6
BETA_MATCH_TOL = 1e-8
QUADRATIC_SNAP_TOL = 1e-6


@dataclass(frozen=True)
class ComplexPoly:
    """Dense complex polynomial, ascending coefficients, trailing zeros trimmed."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        if not np.all(np.isfinite(c)):
            raise ParameterError("polynomial coefficients must be finite")
        c = _trim(c)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_real(self) -> bool:
        scale = np.max(np.abs(self.coeffs))
        if scale == 0:
            return True
        return bool(np.all(np.abs(self.coeffs.imag) <= REAL_RTOL * scale))

    def __call__(self, z):
        return evaluate(self, z)

    def __mul__(self, other: "ComplexPoly") -> "ComplexPoly":
        return ComplexPoly(np.convolve(self.coeffs, other.coeffs))

    def __sub__(self, other: "ComplexPoly") -> "ComplexPoly":
        k = max(len(self.coeffs), len(other.coeffs))
        out = np.zeros(k, dtype=complex)
        out[: len(self.coeffs)] += self.coeffs
        out[: len(other.coeffs)] -= other.coeffs
        return ComplexPoly(out)

    def scale(self, k: complex) -> "ComplexPoly":
        return ComplexPoly(self.coeffs * k)


def _trim(c: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(c)) if len(c) else 0.0
    if scale == 0:
        return np.zeros(1, dtype=complex)
    keep = len(c)
    while keep > 1 and abs(c[keep - 1]) < TRIM_RTOL * scale:
        keep -= 1
    return c[:keep]


@dataclass(frozen=True)
class CandidateParams:
    """Real unknowns defining P(z) = int_beta^z (w-a)^(n-3) (w^2+bw+c) dw.

    ``d`` holds the coefficients of the unit-circle quadratics z^2 + d_i z + 1
    (three for odd n, two for even n).
    """

    n: int
    beta: float
    a: float
    b: float
    c: float
    d: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        for name in ("beta", "a", "b", "c"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "d", tuple(float(x) for x in self.d))
        vals = (self.beta, self.a, self.b, self.c) + self.d
        if not all(math.isfinite(v) for v in vals):
            raise ParameterError("candidate parameters must be finite")

    def validate(self) -> None:
        """Raise ParameterError unless the structural invariants hold."""
        if self.n < 5:
            raise ParameterError(f"degree n={self.n} must be at least 5")
        want = 3 if self.n % 2 else 2
        if len(self.d) != want:
            raise ParameterError(
                f"n={self.n} needs {want} circle quadratics, got {len(self.d)}"
            )
        if any(abs(x) >= 2 for x in self.d):
            raise ParameterError("each |d_i| must be < 2")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.beta, self.a, self.b, self.c, *self.d])

    @classmethod
    def from_vector(cls, n: int, x: Sequence[float]) -> "CandidateParams":
        x = [float(v) for v in x]
        return cls(n, x[0], x[1], x[2], x[3], tuple(x[4:]))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "beta": self.beta,
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "d": list(self.d),
        }

    @classmethod
    def from_dict(cls, rec: dict) -> "CandidateParams":
        try:
            n = rec["n"]
            if not isinstance(n, int) or isinstance(n, bool):
                raise ParameterError("'n' must be an integer")
            return cls(n, rec["beta"], rec["a"], rec["b"], rec["c"], tuple(rec["d"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterError(f"malformed candidate record: {exc!r}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "CandidateParams":
        try:
            rec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"candidate is not valid JSON: {exc}") from exc
        if not isinstance(rec, dict):
            raise ParameterError("candidate JSON must be an object")
        return cls.from_dict(rec)


@dataclass(frozen=True)
class Spectrum:
    roots: np.ndarray
    critical_points: np.ndarray
    m: int
    r: float
    R: float
    dP: float
    beta_index: int
    circle_mask: np.ndarray

    @property
    def circle_roots(self) -> np.ndarray:
        return self.roots[self.circle_mask]


# -- elementary operations ---------------------------------------------------


def evaluate(p: ComplexPoly, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for coef in p.coeffs[::-1]:
        acc = acc * z + coef
    return acc[()] if acc.ndim == 0 else acc


def derivative(p: ComplexPoly) -> ComplexPoly:
    if p.degree == 0:
        return ComplexPoly([0.0])
    k = np.arange(1, len(p.coeffs))
    return ComplexPoly(p.coeffs[1:] * k)


def antiderivative(p: ComplexPoly) -> ComplexPoly:
    """Term-wise antiderivative Q with Q(0) = 0."""
    k = np.arange(1, len(p.coeffs) + 1)
    return ComplexPoly(np.concatenate([[0.0], p.coeffs / k]))


def from_roots(roots) -> ComplexPoly:
    """Monic polynomial prod (z - r_k)."""
    c = np.ones(1, dtype=complex)
    for rt in np.atleast_1d(roots):
        c = np.convolve(c, [-rt, 1.0])
    return ComplexPoly(c)


def integrate_from(dp: ComplexPoly, start: complex) -> ComplexPoly:
    """The polynomial z -> int_start^z dp(w) dw."""
    q = antiderivative(dp)
    c = q.coeffs.copy()
    c[0] -= evaluate(q, start)
    return ComplexPoly(c)


def pprime(params: CandidateParams) -> ComplexPoly:
    """(z-a)^(n-3) (z^2 + bz + c), expanded."""
    base = np.array([params.c, params.b, 1.0], dtype=complex)
    lin = np.array([-params.a, 1.0], dtype=complex)
    for _ in range(params.n - 3):
        base = np.convolve(base, lin)
    return ComplexPoly(base)


def build_candidate(params: CandidateParams) -> ComplexPoly:
    """P(z) = Q(z) - Q(beta) where Q is the antiderivative of P' with Q(0) = 0."""
    if params.n < 5:
        raise ParameterError(f"degree n={params.n} must be at least 5")
    return integrate_from(pprime(params), params.beta)


def divmod_quadratic(p: ComplexPoly, d: float):
    """Divide by z^2 + d z + 1.

    Returns ``(quotient, r1, r0)`` with p(z) = (z^2+dz+1) q(z) + r1 z + r0.
    For real ``p`` the remainder coefficients are returned as floats.
    """
    c = p.coeffs
    deg = p.degree
    if deg < 2:
        padded = np.zeros(2, dtype=complex)
        padded[: len(c)] = c
        r1, r0 = padded[1], padded[0]
        q = ComplexPoly([0.0])
    else:
        q = np.zeros(deg - 1, dtype=complex)
        # q_k = c_{k+2} - d q_{k+1} - q_{k+2}, descending in k
        q1 = q2 = 0.0
        for k in range(deg - 2, -1, -1):
            qk = c[k + 2] - d * q1 - q2
            q[k] = qk
            q2, q1 = q1, qk
        r1 = c[1] - d * q1 - q2
        r0 = c[0] - q1
        q = ComplexPoly(q)
    if p.is_real:
        return q, float(np.real(r1)), float(np.real(r0))
    return q, complex(r1), complex(r0)


def circle_pair(d: float) -> np.ndarray:
    """Roots of z^2 + d z + 1 for |d| < 2, placed exactly on the unit circle."""
    theta = math.acos(-d / 2.0)
    return np.array([complex(math.cos(theta), math.sin(theta)),
                     complex(math.cos(theta), -math.sin(theta))])


def quadratic_roots(b: complex, c: complex) -> np.ndarray:
    """Roots of z^2 + bz + c, upper half-plane root first when complex."""
    disc = np.sqrt(complex(b * b - 4 * c))
    # avoid cancellation
    if (np.conj(b) * disc).real >= 0:
        q = -(b + disc) / 2
    else:
        q = -(b - disc) / 2
    if q == 0:
        z1, z2 = 0j, 0j
    else:
        z1, z2 = q, c / q
    roots = np.array([z1, z2], dtype=complex)
    if roots[1].imag > roots[0].imag:
        roots = roots[::-1]
    return roots


# -- root finding ------------------------------------------------------------


def _horner_batch(c: np.ndarray, z: np.ndarray):
    """Value and derivative of each row polynomial (ascending ``c``) at ``z``."""
    p = np.broadcast_to(c[:, -1:], z.shape).astype(complex)
    dp = np.zeros_like(p)
    for k in range(c.shape[1] - 2, -1, -1):
        dp = dp * z + p
        p = p * z + c[:, k : k + 1]
    return p, dp


def _initial_guess(c: np.ndarray) -> np.ndarray:
    n = c.shape[1] - 1
    lead = np.abs(c[:, -1])
    const = np.abs(c[:, 0])
    with np.errstate(divide="ignore"):
        radius = np.where(const > 0, (const / lead) ** (1.0 / n), 1.0)
    radius = np.where(np.isfinite(radius) & (radius > 0), radius, 1.0)
    k = np.arange(n)
    angles = 2 * np.pi * k / n + 0.4
    return radius[:, None] * np.exp(1j * angles)[None, :]


def aberth_batch(coeffs, init=None, maxiter: int = 500, tol: float = 1e-15):
    """Aberth-Ehrlich iteration on a stack of same-degree polynomials.

    Parameters
    ----------
    coeffs : (N, deg+1) complex array, ascending, nonzero leading coefficient
    init : (N, deg) complex array, optional
        Starting approximations; a perturbed circle is used when absent.

    Returns
    -------
    roots : (N, deg) complex array
    converged : (N,) bool array
    """
    c = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    c = c / c[:, -1:]
    deg = c.shape[1] - 1
    nb = c.shape[0]
    if deg == 1:
        return -c[:, :1].copy(), np.ones(nb, dtype=bool)
    z = _initial_guess(c) if init is None else np.array(init, dtype=complex)
    active = np.ones(nb, dtype=bool)
    off = ~np.eye(deg, dtype=bool)
    for _ in range(maxiter):
        idx = np.nonzero(active)[0]
        if len(idx) == 0:
            break
        za = z[idx]
        p, dp = _horner_batch(c[idx], za)
        diff = za[:, :, None] - za[:, None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            recip = np.where(off, 1.0 / np.where(off, diff, 1.0), 0.0)
            s = recip.sum(axis=2)
            ratio = p / dp
            step = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(step)
        if bad.any():
            # coincident iterates or vanishing derivative: nudge and continue
            step = np.where(bad, 1e-3 * (1 + 1j) * (1 + np.abs(za)), step)
        z[idx] = za - step
        small = np.all(np.abs(step) <= tol * (1 + np.abs(za)) * 64, axis=1)
        active[idx[small]] = False
    return z, ~active


def _polish(c: np.ndarray, z: np.ndarray, steps: int = 3) -> np.ndarray:
    """Newton polish, keeping each update only where |p| decreases."""
    for _ in range(steps):
        p, dp = _horner_batch(c, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = z - p / dp
        pc, _ = _horner_batch(c, np.where(np.isfinite(cand), cand, z))
        better = np.isfinite(cand) & (np.abs(pc) < np.abs(p))
        z = np.where(better, cand, z)
    return z


def roots_batch(coeffs, init=None, maxiter: int = 500) -> np.ndarray:
    """All roots of each row polynomial; raises RootFindingError on failure."""
    c = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    c = c / c[:, -1:]
    z, ok = aberth_batch(c, init=init, maxiter=maxiter)
    z = _polish(c, z)
    if not ok.all():
        # stalled rows can still be fine (e.g. clusters); accept on residual
        p, _ = _horner_batch(c, z)
        scale = np.max(np.abs(c), axis=1, keepdims=True)
        bound = 1e-10 * scale * np.maximum(1.0, np.abs(z)) ** (c.shape[1] - 1)
        fine = np.all(np.abs(p) <= bound, axis=1) & np.all(np.isfinite(z), axis=1)
        if not np.all(ok | fine):
            bad = int(np.nonzero(~(ok | fine))[0][0])
            raise RootFindingError(
                f"Aberth iteration did not converge for polynomial #{bad} "
                f"after {maxiter} iterations"
            )
    return z


def find_roots(p: ComplexPoly, init=None, maxiter: int = 500) -> np.ndarray:
    """All complex roots of ``p`` with multiplicity.

    Aberth-Ehrlich simultaneous iteration from a perturbed circle (or from
    ``init``), followed by a guarded Newton polish on the monic polynomial.
    """
    if p.degree < 1:
        raise ParameterError("cannot find roots of a constant polynomial")
    init_b = None if init is None else np.asarray(init, dtype=complex)[None, :]
    roots = roots_batch(p.coeffs[None, :], init=init_b, maxiter=maxiter)[0]
    if p.is_real:
        roots = _conjugate_symmetrize(roots)
    return roots


def _conjugate_symmetrize(z: np.ndarray) -> np.ndarray:
    """Average each root with the conjugate of its partner (real input only)."""
    cost = np.abs(z[:, None] - np.conj(z)[None, :])
    _, perm = linear_sum_assignment(cost)
    if not np.array_equal(perm[perm], np.arange(len(z))):
        return z
    out = 0.5 * (z + np.conj(z[perm]))
    fixed = perm == np.arange(len(z))
    out[fixed] = out[fixed].real
    return out


# -- geometry ----------------------------------------------------------------


def d_of(roots, crits) -> float:
    """max over roots of the distance to the nearest critical point."""
    roots = np.atleast_1d(np.asarray(roots, dtype=complex))
    crits = np.atleast_1d(np.asarray(crits, dtype=complex))
    if roots.size == 0 or crits.size == 0:
        raise ParameterError("d_of needs nonempty roots and critical points")
    dist = np.abs(roots[:, None] - crits[None, :])
    return float(dist.min(axis=1).max())


def critical_points(params: CandidateParams) -> np.ndarray:
    """zeta_1, zeta_2 from the quadratic, then a repeated n-3 times."""
    quad = quadratic_roots(params.b, params.c)
    return np.concatenate([quad, np.full(params.n - 3, params.a, dtype=complex)])


def _snap_circle_roots(roots: np.ndarray, d: Sequence[float]) -> np.ndarray:
    roots = roots.copy()
    for di in d:
        if abs(di) >= 2:
            continue
        for target in circle_pair(di):
            k = int(np.argmin(np.abs(roots - target)))
            if abs(roots[k] - target) < QUADRATIC_SNAP_TOL:
                roots[k] = target
    return roots


def spectrum(params: CandidateParams, tol_circle: float = TOL_CIRCLE) -> Spectrum:
    """Roots, critical points and the radii r, R, d(P) of a candidate."""
    P = build_candidate(params)
    roots = find_roots(P)
    roots = _snap_circle_roots(roots, params.d)
    crits = critical_points(params)
    bi = int(np.argmin(np.abs(roots - params.beta)))
    if abs(roots[bi] - params.beta) >= BETA_MATCH_TOL:
        raise RootFindingError(
            f"no computed root within {BETA_MATCH_TOL} of beta={params.beta}"
        )
    roots[bi] = params.beta
    mins = np.abs(roots[:, None] - crits[None, :]).min(axis=1)
    r = float(mins[bi])
    others = np.delete(mins, bi)
    R = float(others.max()) if others.size else 0.0
    mask = np.abs(np.abs(roots) - 1.0) < tol_circle
    return Spectrum(
        roots=roots,
        critical_points=crits,
        m=int(mask.sum()),
        r=r,
        R=R,
        dP=max(r, R),
        beta_index=bi,
        circle_mask=mask,
    )
