"""Disagreement-driven interactive clarification for IaC generation."""

from .spec_model import (  # noqa: F401
    Spec,
    Fingerprint,
    extract_type,
    fingerprint,
    normalize_labels,
    parse_spec,
    serialize_spec,
)
from .disagreement import (  # noqa: F401
    Axis,
    Disagreement,
    RoundRobinState,
    compute_disagreements,
    entropy,
    rank_and_select,
)
from .session import Session, SessionConfig, run_session  # noqa: F401

__version__ = "0.1.0"
