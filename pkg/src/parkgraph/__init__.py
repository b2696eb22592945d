"""Parking functions on directed graphs.

Feasibility checking through bipartite matching with certificates both ways,
specialized checkers for oriented trees and mapping digraphs, the
sink/source relabeling involution and the tree/mapping rewiring bijection,
and exhaustive counting sweeps that verify the known identities and bounds
at small sizes.
"""

from .bijections import (
    NotInImageError,
    PsiInverseResult,
    PsiResult,
    TauResult,
    canonical_parking,
    deletable_cycle_edges,
    extend_sequence,
    first_occurrence,
    psi,
    psi_inverse,
    psi_nm,
    psi_nm_inverse,
    tau,
    tau_inverse,
)
from .check import (
    HallViolator,
    ParkingOutcome,
    SimulationRun,
    hall_witness,
    is_classical_parking_function,
    is_deterministic,
    is_parking_distribution,
    is_parking_function,
    is_prime,
    is_source_tree_pf,
    parking_schedule,
    replay_validate,
    simulate_deterministic,
)
from .counting import (
    CapExceededError,
    CountResult,
    ScanRow,
    SweepResult,
    VerifyReport,
    VerifyRow,
    count_distributions,
    count_pf,
    family_counts,
    family_size,
    family_sum,
    lemma_deletable_sweep,
    open_question_scan,
    psi_roundtrip_sweep,
    tau_roundtrip_sweep,
    verify_identity,
)
from .digraph import Digraph
from .families import (
    SINK,
    SOURCE,
    MappingFn,
    RootedTree,
    all_mappings,
    all_rooted_trees,
    classical_count,
    cycle_mapping,
    falling_factorial,
    identity_mapping,
    path_tree,
    sink_star_lower,
    source_star_count,
    star_tree,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceededError",
    "CountResult",
    "Digraph",
    "HallViolator",
    "MappingFn",
    "NotInImageError",
    "ParkingOutcome",
    "PsiInverseResult",
    "PsiResult",
    "RootedTree",
    "ScanRow",
    "SimulationRun",
    "SINK",
    "SOURCE",
    "SweepResult",
    "TauResult",
    "VerifyReport",
    "VerifyRow",
    "all_mappings",
    "all_rooted_trees",
    "canonical_parking",
    "classical_count",
    "count_distributions",
    "count_pf",
    "cycle_mapping",
    "deletable_cycle_edges",
    "extend_sequence",
    "falling_factorial",
    "family_counts",
    "family_size",
    "family_sum",
    "first_occurrence",
    "hall_witness",
    "identity_mapping",
    "is_classical_parking_function",
    "is_deterministic",
    "is_parking_distribution",
    "is_parking_function",
    "is_prime",
    "is_source_tree_pf",
    "lemma_deletable_sweep",
    "open_question_scan",
    "parking_schedule",
    "path_tree",
    "psi",
    "psi_inverse",
    "psi_nm",
    "psi_nm_inverse",
    "psi_roundtrip_sweep",
    "replay_validate",
    "simulate_deterministic",
    "sink_star_lower",
    "source_star_count",
    "star_tree",
    "tau",
    "tau_inverse",
    "tau_roundtrip_sweep",
    "verify_identity",
]
