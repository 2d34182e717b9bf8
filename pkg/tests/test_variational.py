import numpy as np
import pytest
from scipy.integrate import quad

from sendov import fdcheck
from sendov.errors import VariationalError
from sendov.poly import ComplexPoly, evaluate, pprime
from sendov.variational import (
    VARIABLES,
    build_system,
    integral_pprime_over_factor,
    path_integral,
    root_sensitivities,
    second_derivatives,
)


def segment_quadrature(fun, start, end):
    """Adaptive Gauss-Kronrod along the straight segment start -> end."""
    h = end - start
    val, _ = quad(lambda t: fun(start + t * h), 0.0, 1.0, complex_func=True,
                  epsabs=1e-14, epsrel=1e-13, limit=200)
    return val * h


def test_trivial_integral():
    assert path_integral(ComplexPoly([0, 0, 1]), 0.0, 1.0, 0.0, 2) == pytest.approx(1.0)


def test_rejects_non_divisor(cand8):
    with pytest.raises(VariationalError):
        integral_pprime_over_factor(cand8, 1j, 0.5)


@pytest.mark.parametrize("which", ["squared", "zeta1"])
def test_integral_matches_quadrature_n8(cand8, spec8, which):
    z = spec8.roots[np.argmin(np.abs(spec8.roots - 1j))]
    dp = pprime(cand8)
    if which == "squared":
        zeta, power = cand8.a, 2
    else:
        zeta, power = spec8.critical_points[0], 1
    exact = integral_pprime_over_factor(cand8, z, zeta, power)
    numeric = segment_quadrature(lambda w: evaluate(dp, w) / (w - zeta) ** power, cand8.beta, z)
    assert abs(exact - numeric) < 1e-10


@pytest.mark.parametrize("fixture", ["8", "9"])
def test_first_derivatives_match_finite_differences(request, fixture):
    params = request.getfixturevalue("cand" + fixture)
    spec = request.getfixturevalue("spec" + fixture)
    for s in root_sensitivities(params, spec):
        num = fdcheck.fd_dbeta(params, spec, s.z)
        assert abs(s.dz_dbeta - num) <= 1e-6 * abs(num)
        num = fdcheck.fd_dzeta(params, spec, s.z, 0)
        assert abs(s.dz_dzeta1 - num) <= 1e-6 * abs(num)
        num = fdcheck.fd_dzeta(params, spec, s.z, 2)
        assert abs(s.dz_dzeta3 - num) <= 1e-6 * abs(num)


def test_collapsed_copies_share_first_derivative(cand9, spec9):
    for z in spec9.circle_roots:
        d3 = fdcheck.fd_dzeta(cand9, spec9, z, 2)
        d_last = fdcheck.fd_dzeta(cand9, spec9, z, cand9.n - 2)
        assert abs(d3 - d_last) <= 1e-6 * abs(d3)


def test_conjugate_roots_conjugate_sensitivities(cand8, spec8):
    sens = root_sensitivities(cand8, spec8)
    for s in sens:
        partner = min(sens, key=lambda t: abs(t.z - np.conj(s.z)))
        assert abs(partner.dz_dbeta - np.conj(s.dz_dbeta)) < 1e-12
        assert abs(partner.f_coeff - s.f_coeff) < 1e-10


class TestSecondDerivatives:
    def test_difference_identity(self, cand8, spec8):
        dp = pprime(cand8)
        for z in spec8.circle_roots:
            sd = second_derivatives(cand8, spec8, z)
            want = integral_pprime_over_factor(cand8, z, cand8.a, 2) / evaluate(dp, z)
            assert abs(sd.difference - want) < 1e-10

    def test_pure_and_mixed_match_finite_differences(self, cand9, spec9):
        for z in spec9.circle_roots:
            sd = second_derivatives(cand9, spec9, z)
            num = fdcheck.fd_pure(cand9, spec9, z)
            assert abs(sd.pure - num) <= 1e-4 * abs(num)
            num = fdcheck.fd_mixed(cand9, spec9, z)
            assert abs(sd.mixed - num) <= 1e-4 * abs(num)


class TestBuildSystem:
    def test_shapes(self, cand8, spec8, cand9, spec9):
        E8 = build_system(cand8, spec8, root_sensitivities(cand8, spec8))
        E9 = build_system(cand9, spec9, root_sensitivities(cand9, spec9))
        assert E8.shape == (8, 7)
        assert E9.shape == (9, 7)

    def test_structure(self, cand8, spec8):
        sys = build_system(cand8, spec8, root_sensitivities(cand8, spec8))
        assert sys.f[0] == 0 and sys.f[1] == 0
        assert sys.f[2] < 0
        assert np.count_nonzero(sys.E[2, [1, 2, 3, 4, 6]]) == 0
        assert sys.E[2, 0] == pytest.approx(-5 / (cand8.beta - cand8.a))
        assert sys.to_dict()["variables"] == list(VARIABLES)

    def test_row_one_encodes_definition(self, cand8, spec8, rng):
        sys = build_system(cand8, spec8, root_sensitivities(cand8, spec8))
        x = rng.standard_normal(7)
        dz1 = x[1] + 1j * x[2]
        want = -((dz1 - x[0]) / (spec8.critical_points[0] - cand8.beta)).real
        assert sys.E[0] @ x == pytest.approx(want, abs=1e-14)

    def test_conjugate_rows(self, cand9, spec9):
        sens = root_sensitivities(cand9, spec9)
        E = build_system(cand9, spec9, sens).E
        zs = np.array([s.z for s in sens])
        # conjugation swaps the two simple critical points and flips every Im column
        perm = [0, 3, 4, 1, 2, 5, 6]
        sign = np.array([1, 1, -1, 1, -1, 1, -1])
        for i, z in enumerate(zs):
            j = int(np.argmin(np.abs(zs - np.conj(z))))
            np.testing.assert_allclose(E[3 + j], (E[3 + i] * sign)[perm], atol=1e-10)

    def test_rejects_mismatched_sensitivities(self, cand8, spec8):
        with pytest.raises(VariationalError):
            build_system(cand8, spec8, root_sensitivities(cand8, spec8)[:-1])


def test_lemma3_expansions():
    rng = np.random.default_rng(1)
    for t in (1e-2, 1e-3):
        for _ in range(50):
            z = t * (rng.standard_normal() + 1j * rng.standard_normal())
            assert abs(abs(1 + z) - (1 + z.real)) <= 4 * t ** 2 * 10
            assert abs(abs(1 + z) - (1 + z.real + 0.5 * z.imag ** 2)) <= 4 * t ** 3 * 10


def test_directional_second_order_modulus(cand8, spec8):
    """With only Im shifts of the collapsed points summing to zero, |z_i| moves by f * sum t^2."""
    sens = root_sensitivities(cand8, spec8)
    sys = build_system(cand8, spec8, sens)
    rng = np.random.default_rng(42)
    t = rng.standard_normal(cand8.n - 3)
    t -= t.mean()
    t *= 1e-4 / np.max(np.abs(t))
    crits = spec8.critical_points.copy()
    crits[2:] += 1j * t
    for k, s in enumerate(sens):
        moved = fdcheck.tracked_root(crits, cand8.beta, s.z, spec8.roots)
        predicted = sys.f[3 + k] * np.sum(t ** 2)
        assert abs((abs(moved) - 1) - predicted) < 1e-9
        # the effect itself is ~1e-9, so also demand relative agreement
        assert abs((abs(moved) - 1) - predicted) < 1e-3 * abs(predicted)
