"""Field files: a flat binary payload plus a JSON sidecar.

Binary layout (little-endian)::

    offset  0  t_extent   float64
    offset  8  x_extent   float64
    offset 16  n_t        int64
    offset 24  n_x        int64
    offset 32  n_t * n_x complex128, row-major (time index slowest)

The sidecar ``<path>.json`` records provenance and which representation the
payload holds (``physical`` or ``spectral``) in which frame.
"""

from __future__ import annotations

import json
import os
import struct
import tempfile

import numpy as np

from .grid import GridSpec, SpacetimeField

__all__ = ["HEADER", "FIELD_SCHEMA", "write_field", "read_field", "remove_field", "sidecar_path"]

HEADER = struct.Struct("<ddqq")
FIELD_SCHEMA = "xsblab.field/1"


def sidecar_path(path) -> str:
    return os.fspath(path) + ".json"


def write_field(path, u: SpacetimeField, representation: str = "physical", family=None, N=None,
                norms=None, rescaled: bool = False) -> dict:
    """Write ``u`` to ``path`` and its sidecar; returns the sidecar dictionary."""
    if representation not in ("physical", "spectral"):
        raise ValueError("representation must be 'physical' or 'spectral'")
    g = u.grid
    data = np.ascontiguousarray(getattr(u, representation), dtype="<c16")
    meta = {
        "schema": FIELD_SCHEMA,
        "family": family if family is not None else u.meta.get("family"),
        "N": N if N is not None else u.meta.get("N"),
        "grid": g.as_dict(),
        "rescaled": bool(rescaled),
        "norms": dict(norms or {}),
        "frame": u.frame,
        "xi_shift": u.xi_shift,
        "representation": representation,
    }
    payload = HEADER.pack(g.t_extent, g.x_extent, g.n_t, g.n_x) + data.tobytes()
    _atomic_write(sidecar_path(path), (json.dumps(meta, sort_keys=True, indent=2) + "\n").encode())
    try:
        _atomic_write(path, payload)
    except BaseException:
        remove_field(path)
        raise
    return meta


def _atomic_write(path, data: bytes):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".xsblab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def remove_field(path):
    """Delete a field file and its sidecar if present."""
    for p in (os.fspath(path), sidecar_path(path)):
        if os.path.exists(p):
            os.unlink(p)


def read_field(path) -> SpacetimeField:
    with open(path, "rb") as fh:
        head = fh.read(HEADER.size)
        if len(head) != HEADER.size:
            raise ValueError("truncated field header")
        t_ext, x_ext, n_t, n_x = HEADER.unpack(head)
        grid = GridSpec(t_ext, x_ext, n_t, n_x)
        payload = np.frombuffer(fh.read(), dtype="<c16")
    if payload.size != n_t * n_x:
        raise ValueError(f"payload has {payload.size} values, header promises {n_t * n_x}")
    try:
        with open(sidecar_path(path)) as fh:
            meta = json.load(fh)
    except FileNotFoundError:
        meta = {"representation": "physical", "frame": "lab", "xi_shift": 0.0}
    arr = payload.reshape(n_t, n_x).astype(np.complex128)
    rep = meta.get("representation", "physical")
    kw = {rep: arr}
    extra = {k: meta[k] for k in ("family", "N") if meta.get(k) is not None}
    return SpacetimeField(grid, frame=meta.get("frame", "lab"), xi_shift=meta.get("xi_shift", 0.0),
                          meta=extra, **kw)
