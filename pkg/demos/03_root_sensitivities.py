"""Analytic root derivatives against finite differences, n = 8.

The analytic side divides P' exactly by the relevant factor and integrates
the quotient from beta to the root.  The numeric side moves one critical
point (or beta), re-solves every root and differences the tracked one.
"""

import numpy as np

from sendov import fdcheck
from sendov.constructor import canonical, newton_solve
from sendov.poly import CandidateParams, spectrum
from sendov.reference import reference_params
from sendov.variational import root_sensitivities, second_derivatives

ref = reference_params(8)
params = CandidateParams.from_vector(8, canonical(8, newton_solve(8, ref.vector).x))
spec = spectrum(params)

for s in root_sensitivities(params, spec):
    num = fdcheck.fd_dbeta(params, spec, s.z)
    sd = second_derivatives(params, spec, s.z)
    pure = fdcheck.fd_pure(params, spec, s.z)
    print(f"z = {s.z:.6f}")
    print(f"   dz/dbeta   analytic {s.dz_dbeta:.8f}   fd {num:.8f}")
    print(f"   d2z/da2    analytic {sd.pure:.6f}   fd {pure:.6f}")
    print(f"   f_coeff {s.f_coeff:+.5f}")

print()
for kind, err in fdcheck.run_derivative_checks(params, spec).items():
    print(f"{kind:>17}: worst relative error {err:.2e}")
