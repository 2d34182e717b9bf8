"""Bundled reference solutions and helpers to turn them into full candidates."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ParameterError
from .poly import CandidateParams, build_candidate, find_roots

THEOREM_DEGREES = (8, 9, 12, 13, 14, 15, 19, 20, 26)


def load_reference_table(path=None) -> dict:
    """Map n -> dict(beta, a, b, c) from the bundled (or a given) JSON file."""
    if path is None:
        text = resources.files("sendov").joinpath("data/reference_solutions.json").read_text()
    else:
        text = Path(path).read_text()
    try:
        doc = json.loads(text)
        rows = doc["solutions"]
        table = {}
        for row in rows:
            n = row["n"]
            if not isinstance(n, int) or n < 5:
                raise ParameterError(f"bad degree {n!r}")
            vals = {k: float(row[k]) for k in ("beta", "a", "b", "c")}
            table[n] = vals
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParameterError(f"invalid reference file: {exc!r}") from exc
    if not table:
        raise ParameterError("reference file lists no solutions")
    return table


def recover_circle_coefficients(n, beta, a, b, c) -> tuple:
    """Estimate d_i from the unit-circle conjugate pairs of the published P.

    The quadratic coefficients d_i are not published; the upper half-plane
    roots nearest the unit circle give d_i = -2 Re(z)/|z|.  Sorted ascending.
    """
    k = 3 if n % 2 else 2
    P = build_candidate(CandidateParams(n, beta, a, b, c, ()))
    z = find_roots(P)
    upper = z[z.imag > 1e-6]
    order = np.argsort(np.abs(np.abs(upper) - 1.0))
    picked = upper[order[:k]]
    return tuple(sorted(float(-2 * w.real / abs(w)) for w in picked))


def reference_params(n: int, table=None) -> CandidateParams:
    table = load_reference_table() if table is None else table
    if n not in table:
        raise ParameterError(f"no reference solution for n={n}")
    row = table[n]
    d = recover_circle_coefficients(n, row["beta"], row["a"], row["b"], row["c"])
    return CandidateParams(n, row["beta"], row["a"], row["b"], row["c"], d)


def rounded_seed(params: CandidateParams, decimals: int = 3) -> np.ndarray:
    return np.round(params.vector, decimals)
