"""Look inside the linearized system for n = 9.

The E matrix has one row per critical-point constraint (three) plus one per
unit-circle root (six for odd n).  Property H asks for rank 7; property G
asks for a strictly positive left null vector c with c . f = 1.  For odd n
the left null space is two-dimensional and c is picked by an angle scan.
"""

import numpy as np

from sendov.certifier import certify_G, certify_H
from sendov.constructor import canonical, newton_solve
from sendov.linalg import jacobi_svd, left_null_space
from sendov.poly import CandidateParams, spectrum
from sendov.reference import reference_params
from sendov.variational import VARIABLES, build_system, root_sensitivities

np.set_printoptions(precision=4, suppress=True, linewidth=110)

ref = reference_params(9)
params = CandidateParams.from_vector(9, canonical(9, newton_solve(9, ref.vector).x))
spec = spectrum(params)
system = build_system(params, spec, root_sensitivities(params, spec))

print("columns:", VARIABLES)
print(system.E)
print("f =", system.f)

_, s, _ = jacobi_svd(system.E)
print("singular values:", s)
sigma7, ok = certify_H(system)
print(f"sigma_7 = {sigma7:.4f}  (property H: {'pass' if ok else 'fail'})")

N = left_null_space(system.E)
print("left null space dimension:", N.shape[1])

cert = certify_G(system)
print("certificate c =", cert.c)
print(f"min c_k = {cert.min_c:.4f}  (property G: {'pass' if cert.passed else 'fail'}; {cert.note})")
print("|c E| =", np.abs(cert.c @ system.E).max(), "  c . f =", cert.c @ system.f)

# the same scan, shown coarsely: min_k c_k as a function of the mixing angle
u1, u2 = N[:, 0], N[:, 1]
for theta in np.linspace(0, np.pi, 13)[:-1]:
    c = np.cos(theta) * u1 + np.sin(theta) * u2
    cf = c @ system.f
    print(f"theta={theta:5.2f}  min c = {(c / cf).min():9.3f}")
