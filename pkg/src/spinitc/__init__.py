"""Information transfer capacity of spin networks: geometry, clustering and control."""

from .model import (CouplingKind, DegenerateGeometryError, InvalidNetworkError, SpinNetwork,
                    build_chain, build_geometric_network, single_excitation_hamiltonian)
from .spectral import (NumericalError, Spectrum, eigendecompose, probability_time_series,
                       propagator, transfer_probability)
from .itc import (ITCMatrix, RationalRelation, attainment_time_estimate, find_attainment_time,
                  itc_distance, itc_from_spectrum, itc_matrix, max_transfer_probability,
                  nowak_constant, phase_tolerance, rational_independence_check,
                  verify_bound_by_scan)
from .geometry import (NonEuclideanError, embedding_dimension, equivalence_classes, gram_matrix,
                       gromov_delta, inertia, quotient_metric, triangle_audit)
from .cluster import ClusterTree, clusters_at, hierarchical_clusters
from .control import (ControlSequence, EffectiveHamiltonian, OptimizerConfig, control_hamiltonian,
                      controlled_transfer_probability, effective_hamiltonian, effective_itc,
                      optimize_switching, piecewise_evolution)

__version__ = "0.1.0"
