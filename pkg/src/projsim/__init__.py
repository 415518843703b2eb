"""Group-of-vectors similarity by subspace projection, with a paraphrase classification pipeline."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DegenerateTraining,
    DimensionMismatch,
    EmptySentenceGroup,
    EmptyTable,
    InvalidClass,
    InvalidProximity,
    LengthMismatch,
    ParseError,
    ProjSimError,
    SingularGram,
    TooFewRecords,
    ZeroVector,
)
from .groupsim import (  # noqa: E402
    Projector,
    SimilarityValue,
    build_projector,
    cos_group_to_group,
    cos_to_group,
    cos_to_group_gram,
    pairwise_mean_cosine,
    sim_symmetric,
)
from .linalg import OrthonormalBasis, orthonormalize, project_onto_basis, project_via_gram  # noqa: E402
