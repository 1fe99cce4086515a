"""
When is the transfer bound reached?
===================================

The bound is approached arbitrarily closely when the eigenvalues (over pi)
have no integer relations. We look for low-height relations, scan for the
first time the bound is approached, and compare with the Diophantine
estimate for the number of discrete steps.
"""

import spinitc as si

for kind, n, pair in (("xx", 5, (0, 1)), ("heisenberg", 7, (0, 1))):
    spec = si.eigendecompose(si.single_excitation_hamiltonian(si.build_chain(n, kind)))
    rel = si.rational_independence_check(spec.eigenvalues, max_coeff=3)
    print(f"{kind} N={n}: {len(rel)} relations, e.g. {[r.coefficients for r in rel[:3]]}")
    hit = si.find_attainment_time(spec, *pair, epsilon=0.01, t_max=2e3)
    pm = si.max_transfer_probability(spec, *pair)
    if hit is None:
        print(f"  p_max={pm:.4f}: not within 0.01 before t=2000")
    else:
        print(f"  p_max={pm:.4f}: reached {hit.p:.4f} at t={hit.t:.3f}")

##############################################################################
# Phase accuracy needed per eigenvalue, and the step-count estimate.
for eps in (0.1, 0.01):
    print(f"eps={eps}: phase tolerance (N=5) {si.phase_tolerance(eps, 5):.2e}, "
          f"steps N=1 {si.attainment_time_estimate(eps, 1):.1f}, N=5 {si.attainment_time_estimate(eps, 5):.3g}")
for n in range(1, 7):
    print(n, round(si.nowak_constant(n), 4))
