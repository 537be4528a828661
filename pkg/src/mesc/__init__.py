"""Minimum entropy set cover: BiasedGreedy(delta), exact oracle, certificates, coloring."""
from .core import (
    CoverAssignment,
    Distribution,
    DomainError,
    EntropyDecomposition,
    InvalidInstanceError,
    InstanceFormatError,
    CapExceeded,
    MescError,
    SetSystem,
    avg_frequency,
    element_frequency,
    entropy_decomposition,
    entropy_of_cover,
    kl_divergence,
    read_instance,
    validate,
    write_instance,
)
from .solvers import (
    AlgorithmTrace,
    BoundCertificate,
    SplitReport,
    best_delta,
    biased,
    biased_greedy,
    certify,
    enumerate_min_entropy_cover,
    exact_min_entropy_cover,
    greedy,
    split_light_heavy,
    theorem_bound,
)
from .coloring import (
    Coloring,
    Graph,
    biased_coloring,
    complement,
    f_alpha3,
    maximal_independent_sets,
    to_set_cover,
)
from .generators import GenSpec, paper_example_graph, random_graph, random_set_system

__version__ = "0.1.0"
