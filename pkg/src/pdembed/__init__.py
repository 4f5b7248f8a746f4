"""Metric embeddings of persistence diagrams on a fixed number of points.

Single-scale landmark maps, multi-scale coarse and uniform embeddings into
(sparse) Hilbert space, a finite-dimensional map for diagrams in a frame, and an
injective angle map with reconstruction.
"""

__version__ = "0.1.0"

from .bottleneck import bottleneck_bruteforce, bottleneck_distance, point_distance
from .bounded import (
    BoundedEmbeddingSpec,
    count_landmarks,
    lambda_bruteforce,
    lambda_closed_form,
    non_injectivity_witness,
    phi3,
    phi3_distance,
    rho3_linear,
    rho3_steps,
    rho3_steps_separated,
    uniform_spec,
)
from .diagram import DIAG, PersistenceDiagram
from .grid import SparseEmbedding, grid_candidates, key_from_text, key_to_text, phi_component, phi_scale
from .injective import AnchorSet, IllConditionedError, default_anchors, injective_embed, reconstruct
from .multiscale import (
    CertifiedInterval,
    certified_distance,
    coarse_schedule,
    combined_schedule,
    rho_minus,
    rho_minus_improved,
    rho_minus_separated,
    uniform_schedule,
)
from .verify import CheckConfig, CheckReport, run_checks, sample_diagram

__all__ = [
    "DIAG",
    "PersistenceDiagram",
    "bottleneck_distance",
    "bottleneck_bruteforce",
    "point_distance",
    "SparseEmbedding",
    "grid_candidates",
    "phi_component",
    "phi_scale",
    "key_to_text",
    "key_from_text",
    "CertifiedInterval",
    "coarse_schedule",
    "uniform_schedule",
    "combined_schedule",
    "certified_distance",
    "rho_minus",
    "rho_minus_improved",
    "rho_minus_separated",
    "BoundedEmbeddingSpec",
    "count_landmarks",
    "phi3",
    "phi3_distance",
    "rho3_steps",
    "rho3_steps_separated",
    "rho3_linear",
    "lambda_closed_form",
    "lambda_bruteforce",
    "uniform_spec",
    "non_injectivity_witness",
    "AnchorSet",
    "IllConditionedError",
    "default_anchors",
    "injective_embed",
    "reconstruct",
    "CheckConfig",
    "CheckReport",
    "run_checks",
    "sample_diagram",
]
