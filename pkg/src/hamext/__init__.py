"""Rotation-system toolkit for Hamiltonian extensions of surface embeddings."""

from .embedding import (
    CombEmbedding,
    FaceWalk,
    InvalidEmbeddingError,
    Multigraph,
    SurfaceStats,
    find_embedding_with_genus,
    stats,
    trace_faces,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "CombEmbedding",
    "FaceWalk",
    "InvalidEmbeddingError",
    "Multigraph",
    "SurfaceStats",
    "find_embedding_with_genus",
    "stats",
    "trace_faces",
    "validate",
]
