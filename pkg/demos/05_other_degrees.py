"""Try degrees missing from the published list.

Seeds are interpolated in n between neighbouring published solutions.
Converged solutions that fail certification are shown with the failing
properties; nothing here is asserted.
"""

from sendov.constructor import construct, interpolated_seed
from sendov.reference import reference_params

for n, (lo, hi) in {7: (8, 9), 10: (9, 12), 11: (9, 12), 16: (15, 19), 17: (15, 19)}.items():
    seed = interpolated_seed(n, reference_params(lo), reference_params(hi))
    out = construct(n, [seed])
    log = out.log[0]
    print(f"n={n}: converged={log['converged']} after {log.get('iterations')} iterations "
          f"{log.get('message') or ''}")
    for params in out.candidates:
        print(f"   certified: beta={params.beta:.10f}")
    for params, why in out.rejected:
        failed = why if isinstance(why, str) else ", ".join(why.failed())
        print(f"   rejected beta={params.beta:.6f} d={[round(x, 4) for x in params.d]}: {failed}")
