"""Exact grove, resistance and double-dimer connection probabilities."""

from .dimers import BipartiteNetwork, dd_bruteforce, dd_tripartite_prob, dimer_partition_function, x_matrix
from .exact import MultiPoly, det, pfaffian, pfaffianoid
from .groves import (
    GroveProbability,
    grove_probability,
    minor_grove_identity,
    tripartite_pairing_prob,
    tripod_prob,
    tripod_prob_via_dual,
)
from .network import Network, dual_response, resistance_matrix, response_matrix, standard_graph
from .oracle import enumerate_groves
from .partitions import ColorSpec, Partition, project, tripartite_partition
from .reconstruction import reconstruct

__version__ = "0.1.0"

__all__ = [
    "BipartiteNetwork",
    "ColorSpec",
    "GroveProbability",
    "MultiPoly",
    "Network",
    "Partition",
    "dd_bruteforce",
    "dd_tripartite_prob",
    "det",
    "dimer_partition_function",
    "dual_response",
    "enumerate_groves",
    "grove_probability",
    "minor_grove_identity",
    "pfaffian",
    "pfaffianoid",
    "project",
    "reconstruct",
    "resistance_matrix",
    "response_matrix",
    "standard_graph",
    "tripartite_pairing_prob",
    "tripartite_partition",
    "tripod_prob",
    "tripod_prob_via_dual",
    "x_matrix",
]
