"""Exact computation of polymatroid invariants.

The cave polynomial of a polymatroid is computed by four independent
algorithms (cave formula, stalactite construction, box expansion, Mobius
recurrence), together with the Snapper polynomial in the binomial basis,
and the equivalence of all routes is verified differentially on arbitrary
and randomly generated instances.
"""

from .algorithms import (
    LexOrder,
    MobiusTable,
    Stalactite,
    box_polynomial,
    box_summands,
    cave_polynomial,
    mobius_interval,
    mobius_polynomial,
    mobius_table,
    neighbors,
    snapper_eur_larson,
    snapper_from_cave,
    stalactite,
    stalactite_counts,
    stalactite_decomposition,
    stalactite_polynomial,
)
from .core import (
    Polymatroid,
    RankFunction,
    homogenize,
    is_generalized_polymatroid,
    is_m_convex,
    points_from_rank,
    rank_from_points,
    validate_rank_function,
)
from .errors import (
    AxiomViolation,
    CavepolyError,
    DimensionMismatch,
    EmptyInput,
    GenerationExhausted,
    InternalInvariantFailure,
    NegativeExponent,
    NotABasePoint,
    NotComparable,
    NotInIndependence,
    NotMConvex,
    ParseError,
    UnknownFamily,
)
from .genverify import (
    CampaignReport,
    GeneratorConfig,
    VerificationReport,
    named_family,
    random_polymatroid,
    shrink_instance,
    verify_campaign,
    verify_instance,
)
from .geometry import (
    CaveReport,
    IndependenceSet,
    independence_points,
    indicator,
    is_cave,
    top_elements,
    truncate,
    truncation_set,
)
from .polyalg import (
    BinomialBasisPoly,
    MultiPoly,
    RationalPoly,
    binomial_map,
    canonical_string,
    eval_integer,
    expand_binomial,
    poly_add,
    poly_mul,
)

__version__ = "0.1.0"
