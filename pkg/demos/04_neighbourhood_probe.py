"""Random perturbations around the n = 8 candidate at several scales.

Only perturbations keeping every root in the closed disk count as
admissible.  None of them should raise d above d(P) at small scales; at
large scales improvements do exist (the far witness moves every critical
point to the origin).
"""

from sendov.constructor import canonical, newton_solve
from sendov.poly import CandidateParams, spectrum
from sendov.probe import Perturbation, classify, neighborhood_scan
from sendov.reference import reference_params

ref = reference_params(8)
params = CandidateParams.from_vector(8, canonical(8, newton_solve(8, ref.vector).x))
spec = spectrum(params)

print(f"d(P) = {spec.dP:.10f}")
for scale in (1e-5, 1e-4, 1e-3, 1e-2, 5e-2):
    st = neighborhood_scan(params, 20_000, scale, rng_seed=1, spec=spec)
    margin = "n/a" if st.margin is None else f"{st.margin:+.3e}"
    print(f"scale {scale:7.0e}: admissible {st.admissible:6d}  improvements {st.improvements:4d}  "
          f"d(P) - max d(Q) {margin}")

w = classify(params, spec, Perturbation.witness(params, spec))
print(f"witness: norm {w.perturbation.norm:.3f}, improvement={w.is_improvement}, d(Q)={w.dQ:.3f}")
