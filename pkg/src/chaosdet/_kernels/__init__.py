"""Backend selection for the sample-evaluation kernel.

The compiled extension is used when it was built; otherwise the numpy
fallback.  Set CHAOSDET_BACKEND=python to force the fallback, or
CHAOSDET_BACKEND=native to require the extension (ImportError if it is
missing).  Both backends implement the same contract and produce
bit-identical output.
"""
from __future__ import annotations

import importlib
import os

from . import _pure

_REQUESTED = os.environ.get("CHAOSDET_BACKEND", "auto")
if _REQUESTED not in ("auto", "python", "native"):
    raise ValueError(
        f"CHAOSDET_BACKEND must be auto, python or native, got {_REQUESTED!r}"
    )

_native = None
if _REQUESTED in ("auto", "native"):
    try:
        _native = importlib.import_module("._native", __package__)
    except ImportError:
        if _REQUESTED == "native":
            raise ImportError(
                "CHAOSDET_BACKEND=native but the compiled kernel is not built; "
                "reinstall with a C compiler available"
            ) from None

if _REQUESTED != "python" and _native is not None:
    BACKEND = "native"
    eval_many = _native.eval_many
else:
    BACKEND = "python"
    eval_many = _pure.eval_many

hermite_table = _pure.hermite_table


def backends() -> dict:
    """Available eval_many implementations, keyed by backend name."""
    impls = {"python": _pure.eval_many}
    if _native is not None:
        impls["native"] = _native.eval_many
    return impls
