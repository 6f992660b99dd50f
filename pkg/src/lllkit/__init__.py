"""Exact local-lemma verification and constructive search for packings and Latin transversals."""

__version__ = "0.1.0"

from lllkit.errors import (  # noqa: E402
    DomainError,
    HypothesisError,
    NullConditioningError,
    ParseError,
    SizeLimitError,
)
from lllkit.finite_prob import (  # noqa: E402
    Event,
    SampleSpace,
    conditional,
    enumerate_injections,
    is_mutually_independent,
    probability,
)
from lllkit.lll import (  # noqa: E402
    E,
    EInterval,
    Graph,
    Verdict,
    check_lll_condition,
    check_symmetric_condition,
    find_weights,
    verify_dependency_graph,
    verify_lll_conclusion,
    verify_negative_dependency_graph,
)
from lllkit.injection import (  # noqa: E402
    CanonicalEvent,
    Matching,
    apply_permutation,
    canonical_event,
    canonical_event_probability,
    conflict_graph,
    conflicts,
    make_matching,
)
from lllkit.hypergraph import (  # noqa: E402
    Hypergraph,
    PackingInstance,
    build_packing_instance,
    corollary_conditions,
    perfect_packing_reduction,
    theorem41_condition,
    theorem42_condition,
    verify_packing,
)
from lllkit.latin import (  # noqa: E402
    IntMatrix,
    LatinEventFamily,
    build_latin_events,
    is_latin_transversal,
    max_multiplicity,
    theorem51_condition,
)
from lllkit.solver import (  # noqa: E402
    AvoidanceProblem,
    Certificate,
    Mode,
    solve_exhaustive,
    solve_randomized,
)
