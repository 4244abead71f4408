"""Matroid toolkit: k-fold circuits, principal partitions, balancedness,
pseudomodular lattices and count matroids."""
from .core import Matroid, RankFunctionMatroid, max_ground
from .constructions import (direct_sum, explicit_circuits, graphic, linear, parallel_connection,
                            subspace_intersection, two_sum, uniform, LinearMatroidSpec)
from .count import (CountParams, ab_clique, count_closure, count_matroid, full_count_matroid,
                    is_rigid, technicolour_vertices)
from .errors import CapacityError, DomainError, InvariantViolation, MatroidError
from .graphs import Multigraph, complete_graph
from .kfold import (KFoldCircuit, balance_report, disconnected_compose_check, ear_decomposition,
                    enumerate_kfold_circuits, is_trivial, kfold_order, matching_upper_bound,
                    MatchingInstance, principal_partition, verify_kfold_property)

__version__ = "1.0.0"
