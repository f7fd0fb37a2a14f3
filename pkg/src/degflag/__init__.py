"""Degenerate flag varieties of type A: cells, PBW characters and geometry."""
from .characters import (
    DominantWeight, ExtendedWeight, QCharacter, RationalTerm, abl_character_eval,
    abl_character_exact, abl_term, gamma, gamma_lambda, graded_dimensions, specialize_q1,
)
from .combinatorics import (
    AdmissibleCollection, BaseCellLabel, IndexSet, ParabolicShape, RootIndex, ab_pair,
    base_cell_dimension, beta_order, cell_dimension, codim_one_cells, enumerate_admissible,
    enumerate_admissible_parabolic, enumerate_base_cells, is_admissible, relative_dimension,
)
from .census import census, smallness_report
from .errors import (
    CapacityError, DegFlagError, InternalConsistencyError, InvalidRankError, PreconditionError,
    ResampleRequired, StructuralError,
)
from .laurent import LaurentMonomial, LaurentPolynomial

__version__ = "0.1.0"
