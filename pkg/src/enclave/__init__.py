"""Consent-boundary social platform engine.

Users post and comment anonymously while demarcating, per node, exactly
which trait-defined audience may see the content. Audiences only ever
shrink down a thread and under edits; an independent brute-force oracle
re-derives every visibility decision in the test and replay harnesses.
"""

from .boundaries import (
    ChainLevel,
    ConsentBoundary,
    MatchContext,
    PopulationMember,
    PUBLIC_BOUNDARY,
    check_restriction,
    compose_audience,
    boundary_metadata_view,
    matches,
    validate_boundary,
)
from .platform import Platform
from .serialization import boundary_from_dict, boundary_to_dict
from .traits import TraitProfile, profile_from_dict
from .vocab import Vocabulary, default_vocabulary

__all__ = [
    "ChainLevel",
    "ConsentBoundary",
    "MatchContext",
    "Platform",
    "PopulationMember",
    "PUBLIC_BOUNDARY",
    "TraitProfile",
    "Vocabulary",
    "boundary_from_dict",
    "boundary_metadata_view",
    "boundary_to_dict",
    "check_restriction",
    "compose_audience",
    "default_vocabulary",
    "matches",
    "profile_from_dict",
    "validate_boundary",
]
