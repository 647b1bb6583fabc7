"""Sentence-to-knowledge-graph pipeline with centrality and eye-fixation analysis."""

__version__ = "0.1.0"
