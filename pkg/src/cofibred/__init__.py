"""Exact computations with finite categories, Grothendieck fibrations and
their fibred and cleaved nerves.

The package is organised bottom-up:

``category``
    finite categories, functors and the standard constructions.
``fibration``
    cartesian arrows, cleavages, good maps, base change, Grothendieck
    construction.
``simplicial``
    truncated (bi)simplicial sets, nerve, diagonal, codiagonal, hc, TCP.
``nerves``
    fibred and cleaved nerves with the comparison maps between them.
``homology``
    Smith normal form, chain complexes, modules over categories,
    bicomplexes and spectral sequences.
``cli``
    text input format and the ``cofibred`` command.
"""

from .category import (
    CategoryError,
    FiniteCategory,
    Functor,
    arrow_category,
    fiber,
    homotopy_fiber,
    mapping_category,
    ordinal,
    product,
    validate_category,
)
from .fibration import (
    Cleavage,
    DiagramOfCategories,
    FibrationCertificate,
    base_change,
    certify_fibration,
    enumerate_cleavages,
    grothendieck,
    is_cartesian,
)
from .simplicial import (
    BisimplicialSet,
    SimplicialMap,
    SimplicialSet,
    codiagonal,
    diagonal,
    nerve,
)

__all__ = [
    "BisimplicialSet",
    "CategoryError",
    "Cleavage",
    "DiagramOfCategories",
    "FibrationCertificate",
    "FiniteCategory",
    "Functor",
    "SimplicialMap",
    "SimplicialSet",
    "arrow_category",
    "base_change",
    "certify_fibration",
    "codiagonal",
    "diagonal",
    "enumerate_cleavages",
    "fiber",
    "grothendieck",
    "homotopy_fiber",
    "is_cartesian",
    "mapping_category",
    "nerve",
    "ordinal",
    "product",
    "validate_category",
]

__version__ = "0.1.0"
