"""Python bindings for the XCSP 2.1 toolkit."""

from ._xcsp21 import (
    Instance,
    XcspError,
    check,
    convert,
    eval_qcsp,
    load,
    run_cli,
    solve,
    stats,
    validate,
    write,
)

__all__ = [
    "Instance",
    "XcspError",
    "check",
    "convert",
    "eval_qcsp",
    "load",
    "load_file",
    "run_cli",
    "solve",
    "stats",
    "validate",
    "write",
]


def load_file(path):
    """Load a document from disk; returns (instance or None, diagnostics)."""
    with open(path, "rb") as f:
        return load(f.read().decode("utf-8"))
