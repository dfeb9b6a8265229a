"""Process-boundary bridge to the augmentation CLI.

Holds its own ARLT codec (written against the format description, not the
engine's source) so the two implementations cross-check each other on every
call.
"""

from __future__ import annotations

import os
import struct
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np
import yaml

_MAGIC = b"ARLT"
_HEADER = struct.Struct("<4sIIIIIB7x")
_DTYPE_CODE = {np.dtype(np.uint8): 0, np.dtype(np.float32): 1}
_CODE_DTYPE = {0: np.dtype(np.uint8), 1: np.dtype(np.float32)}


class BindingError(RuntimeError):
    pass


def _cli_argv() -> list[str]:
    override = os.environ.get("RLAUG_CLI")
    if override:
        return override.split()
    return [sys.executable, "-m", "rlaug.cli"]


def write_arlt(array: np.ndarray, path) -> None:
    n, c, h, w = array.shape
    header = _HEADER.pack(_MAGIC, 1, n, c, h, w, _DTYPE_CODE[array.dtype])
    Path(path).write_bytes(header + array.tobytes())


def read_arlt(path) -> np.ndarray:
    blob = Path(path).read_bytes()
    magic, version, n, c, h, w, code = _HEADER.unpack_from(blob)
    if magic != _MAGIC or version != 1:
        raise BindingError(f"{path}: not a version-1 ARLT file")
    dt = _CODE_DTYPE[code]
    arr = np.frombuffer(blob[_HEADER.size:], dtype=dt).reshape(n, c, h, w)
    return arr.copy()


def _validate_view(array: np.ndarray) -> np.ndarray:
    if not isinstance(array, np.ndarray):
        array = np.asarray(array)
    if array.ndim != 4:
        raise BindingError(f"expected a (n, c, h, w) array, got shape {array.shape}")
    if array.dtype == np.dtype(np.uint8):
        pass
    elif array.dtype == np.dtype(np.float32):
        if array.size and (array.min() < 0.0 or array.max() > 1.0):
            raise BindingError("float32 input must lie in [0, 1]")
    else:
        raise BindingError(f"dtype must be uint8 or float32, got {array.dtype}")
    if not array.flags.c_contiguous:
        raise BindingError("input must be C-contiguous")
    return array


def version_handshake() -> str:
    """Semantic version of the engine behind the bridge."""
    proc = subprocess.run(
        _cli_argv() + ["--version"], capture_output=True, text=True, check=False
    )
    if proc.returncode != 0:
        raise BindingError(f"engine not reachable: {proc.stderr.strip()}")
    return proc.stdout.strip()


def bound_apply(array: np.ndarray, spec: dict, seed: int) -> np.ndarray:
    """Augment an array exactly as ``rlaug augment`` would.

    ``spec`` is an operator or fusion-schedule mapping in the engine's
    config schema (e.g. ``{"kind": "pad_crop", "strength": 4}``).
    """
    array = _validate_view(array)
    if not isinstance(spec, dict):
        raise BindingError("spec must be a mapping (operator or schedule)")
    with tempfile.TemporaryDirectory(prefix="rlaug_bind_") as tmp:
        tmp = Path(tmp)
        src = tmp / "in.arlt"
        dst = tmp / "out.arlt"
        cfg = tmp / "config.yaml"
        write_arlt(array, src)
        cfg.write_text(yaml.safe_dump({"augmentation": spec}))
        proc = subprocess.run(
            _cli_argv()
            + ["augment", str(src), str(dst), "--config", str(cfg), "--seed", str(seed)],
            capture_output=True,
            text=True,
            check=False,
        )
        if proc.returncode != 0:
            raise BindingError(
                f"engine rejected the request (exit {proc.returncode}): {proc.stderr.strip()}"
            )
        return read_arlt(dst)
