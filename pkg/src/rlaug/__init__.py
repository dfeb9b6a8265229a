"""Deterministic image-batch augmentation for visual RL."""

__version__ = "0.1.0"
