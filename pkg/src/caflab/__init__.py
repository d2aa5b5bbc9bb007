"""caflab: an exhaustively verifying workbench for classification aggregation.

Classifications map objects onto categories surjectively; aggregation
functions merge one classification per individual into a single one. The
package checks the classical axioms with replayable witnesses, enumerates
every valid independent aggregator at desk scale, and machine-checks the
dictatorship results, including executable forms of their proofs.
"""

from .axioms import (
    AxiomReport,
    ElementaryCaf,
    GeneralCaf,
    IndependentCaf,
    check_citizen_sovereignty,
    check_essential_dictatorship,
    check_generalized_unanimity,
    check_independence,
    check_unanimity,
    check_validity,
)
from .core import (
    CategoryPermutation,
    CategoryVector,
    Classification,
    Params,
    Profile,
    apply_permutation,
    count_classifications,
    enumerate_classifications,
    make_classification,
    make_profile,
    profile_column,
)
from .rules import (
    TieBreakOrder,
    example_plurality,
    make_dictatorship,
    make_essential_dictatorship,
    make_per_object_majority,
    make_plurality,
    parse_rule,
)
from .search import (
    SearchReport,
    SearchSpec,
    enumerate_elementary_cafs,
    enumerate_independent_cafs,
    estimate_search_space,
    find_witness_vector,
)
from .theorem_lab import (
    DictatorReport,
    PivotalLadder,
    TheoremVerdict,
    build_lemma_profile,
    compute_pi,
    extract_dictator_pivotal,
    pivotal_ladder,
    verify_claim,
)

__version__ = "0.1.0"
