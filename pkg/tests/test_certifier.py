import dataclasses
import json
import math

import numpy as np
import pytest
import scipy.linalg

from sendov.certifier import certify_all, certify_G, certify_H, check_geometry
from sendov.poly import CandidateParams, spectrum
from sendov.variational import VariationalSystem, build_system, root_sensitivities


def system_for(params):
    spec = spectrum(params)
    return build_system(params, spec, root_sensitivities(params, spec))


def by_id(results):
    return {r.id: r for r in results}


class TestGeometry:
    def test_n8_all_pass(self, cand8, spec8):
        res = by_id(check_geometry(cand8, spec8))
        assert sorted(res) == list("ABCDEF")
        assert all(r.passed for r in res.values())

    def test_expected_polynomial_fails_C(self):
        p = CandidateParams(8, 1.0, 0.0, 0.0, 0.0, (math.sqrt(2), -math.sqrt(2)))
        res = by_id(check_geometry(p, spectrum(p)))
        assert not res["C"].passed
        assert res["D"].passed and res["E"].passed
        assert not res["F"].passed  # r = 1

    def test_inflated_c_breaks_D(self, cand8):
        bumped = dataclasses.replace(cand8, c=cand8.c + 1e-3)
        res = by_id(check_geometry(bumped, spectrum(bumped)))
        assert not res["D"].passed
        assert res["D"].measured["spread"] > 1e-4


class TestG:
    def test_n8(self, cand8):
        cert = certify_G(system_for(cand8))
        assert cert.null_dim == 1
        assert cert.passed and np.all(cert.c > 0.3)

    def test_certificate_equations(self, cand9):
        sys = system_for(cand9)
        cert = certify_G(sys)
        np.testing.assert_allclose(cert.c @ sys.E, 0, atol=1e-10)
        assert cert.c @ sys.f == pytest.approx(1.0, abs=1e-12)

    def test_padded_identity(self):
        E = np.vstack([np.eye(7), np.zeros((1, 7))])
        cert = certify_G(VariationalSystem(E, np.eye(8)[7]))
        assert cert.null_dim == 1
        np.testing.assert_allclose(cert.c, np.eye(8)[7], atol=1e-15)
        assert cert.c[7] == pytest.approx(1.0)
        assert not cert.passed  # zero weights off the support

    def test_trivial_null_space(self):
        cert = certify_G(VariationalSystem(np.eye(7), np.ones(7)))
        assert cert.null_dim == 0 and not cert.passed

    def test_n9_scan_matches_fine_grid(self, cand9):
        sys = system_for(cand9)
        cert = certify_G(sys)
        assert cert.null_dim == 2 and cert.passed
        N = scipy.linalg.null_space(sys.E.T)
        best = -np.inf
        for theta in np.arange(0.0, np.pi, 1e-4):
            c = N @ [np.cos(theta), np.sin(theta)]
            cf = c @ sys.f
            if abs(cf) > 1e-14:
                best = max(best, (c / cf).min())
        assert best > 0
        assert cert.min_c >= best - 1e-9
        assert cert.min_c - best <= 1e-2 * max(1.0, abs(best))


class TestH:
    def test_n8(self, cand8):
        sigma7, ok = certify_H(system_for(cand8))
        assert ok and sigma7 > 0.04

    def test_rank_deficient(self):
        rng = np.random.default_rng(0)
        base = rng.standard_normal((6, 7))
        dup = np.ones(6) @ base
        sigma7, ok = certify_H(VariationalSystem(np.vstack([base, dup, dup]), np.zeros(8)))
        assert sigma7 < 1e-12 and not ok


class TestCertifyAll:
    def test_beta_half_reports_everything(self, cand8):
        report = certify_all(dataclasses.replace(cand8, beta=0.5))
        assert [p.id for p in report.properties] == list("ABCDEFGH")
        assert not report["C"].passed
        assert not report.overall
        for p in report.properties:
            for v in p.measured.values():
                assert np.all(np.isfinite(v))

    def test_deterministic(self, cand9):
        assert certify_all(cand9).to_json() == certify_all(cand9).to_json()

    def test_report_json(self, cand8):
        doc = json.loads(certify_all(cand8).to_json())
        assert set(doc) == {"candidate", "properties", "overall", "tolerances"}
        assert doc["overall"] is True
        assert doc["properties"][6]["id"] == "G"
        assert {"id", "measured", "threshold", "pass", "margin"} <= set(doc["properties"][0])
        assert CandidateParams.from_dict(doc["candidate"]) == cand8

    def test_even_rank7_means_one_dim_null_space(self, converged):
        for n in (8, 12, 14, 20, 26):
            report = certify_all(converged[n][1])
            assert report["H"].passed
            assert report["G"].measured["null_dim"] == 1
