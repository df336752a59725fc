"""Tools for block-transitive 3-designs with small blocks on few points."""

from .classify import CanonicalForm, canonical_form, is_isomorphic, iso_classes
from .design import Design, DesignParams, block_orbit, derive_params, verify_design
from .errors import (
    CatalogParseError, InfeasibleParametersError, IntransitiveGroupError, NotADesignError, ValidationError,
)
from .perm import BlockSystem, Permutation, PermGroup

__all__ = [
    "BlockSystem", "CanonicalForm", "CatalogParseError", "Design", "DesignParams", "InfeasibleParametersError",
    "IntransitiveGroupError", "NotADesignError", "PermGroup", "Permutation", "ValidationError",
    "block_orbit", "canonical_form", "derive_params", "is_isomorphic", "iso_classes", "verify_design",
]
