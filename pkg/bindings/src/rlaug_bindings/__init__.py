"""Bindings from in-memory arrays to the rlaug augmentation engine.

The engine is reached exclusively through its public surface: the ``rlaug``
command line and the ARLT tensor format. Each call marshals the caller's
array across the process boundary, so no interpreter lock is held while the
kernels run, and outputs are bytewise the engine's own.
"""

from .bridge import BindingError, bound_apply, version_handshake
from .reference import reference_bilinear

__all__ = ["BindingError", "bound_apply", "version_handshake", "reference_bilinear"]
