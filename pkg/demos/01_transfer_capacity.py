"""
Maximum transfer capacity of a spin chain
=========================================

How much of an excitation placed on one spin can ever reach another?
For a uniform XX chain of 7 spins, the end-to-middle transfer is capped
well below 1, while end-to-end transfer is (eventually) perfect.
"""

import numpy as np

import spinitc as si

net = si.build_chain(7, "xx")
H = si.single_excitation_hamiltonian(net)
spec = si.eigendecompose(H)
print("eigenvalues:", np.round(spec.eigenvalues, 4))

##############################################################################
# The bound is a sum over eigen-projectors; no time evolution is needed.
itc = si.itc_matrix(net)
print("p_max(1 -> 4) =", round(itc.p_max[0, 3], 4))
print("p_max(1 -> 7) =", round(itc.p_max[0, 6], 12))

##############################################################################
# A long time scan never beats the bound, and gets close to it.
t, p = si.probability_time_series(spec, 0, 3, 1000.0, 0.005)
print(f"scan max over t <= 1000: {p.max():.6f} at t = {t[p.argmax()]:.3f}")

##############################################################################
# Node-to-node distances d = -ln p_max.
np.set_printoptions(precision=3, suppress=True)
print(itc.dist)

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    tt, pp = si.probability_time_series(spec, 0, 3, 60.0, 0.01)
    plt.plot(tt, pp, "--", label="free evolution")
    plt.axhline(itc.p_max[0, 3], ls="-.", c="k", label="p_max")
    plt.xlabel("t (1/J)")
    plt.ylabel("population of spin 4")
    plt.legend()
    plt.savefig("transfer_capacity.png", dpi=120)
