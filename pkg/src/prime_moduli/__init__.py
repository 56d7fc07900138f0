"""Exact rational cohomology computations for graph categories and moduli of prime 3-manifolds.

Submodules:

graphs     half-edge graphs, isomorphism classes, morphisms, chain posets
galgebra   graded-commutative presentations, Groebner bases, ring maps
confcoh    cohomology of configuration spaces of points in S^3
hgamma     the per-graph rings and the maps induced by graph morphisms
limits     group invariants, derived limits over finite posets, the genus-2 assembly
verify     named reference checks
cli        the ``prime-moduli`` command
"""

from . import confcoh, galgebra, graphs, hgamma, limits, linalg
from .confcoh import conf_ring, forget_points, sym_action
from .errors import (
    ExcludedCaseError,
    FactorDataError,
    IntertwiningError,
    InvalidInputError,
    MarkingConflictError,
    NonInvariantError,
    NotAForestError,
    PrimeModuliError,
    RelationViolationError,
    ResourceCapError,
    SpanGapError,
    ValenceError,
)
from .galgebra import BettiTable, GradedPresentation, RingElement, RingMap, betti, graded_basis, groebner, is_groebner
from .graphs import (
    GraphMorphism,
    MarkedGraph,
    automorphisms,
    chain_poset,
    contract_edges,
    enumerate_graphs,
    hom_set,
    make_graph,
    relative_homology,
    rose2,
    theta,
    theta_to_rose,
    tripod_pullback,
)
from .hgamma import HGammaRing, aut_action, build_ring, induced_map
from .limits import Diagram, RingAction, assemble_u2, derived_limits, e2_page, reynolds_matrix, slominska_diagram

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
