"""Select the join kernel: compiled if importable, pure Python otherwise.

Setting ``RL2DATALOG_PURE=1`` forces the pure-Python kernel.
"""

import os
from contextlib import contextmanager

from . import _kernel_py

ATOM, NEG, CMP = _kernel_py.ATOM, _kernel_py.NEG, _kernel_py.CMP
CMP_OPS = {"<": 0, "<=": 1, ">": 2, ">=": 3, "=": 4, "!=": 5}

try:
    from ._kernel import Plan as CompiledPlan
except ImportError:  # extension not built
    CompiledPlan = None

PurePlan = _kernel_py.Plan

if CompiledPlan is not None and os.environ.get("RL2DATALOG_PURE") != "1":
    Plan, BACKEND = CompiledPlan, "cython"
else:
    Plan, BACKEND = PurePlan, "python"


def set_backend(name: str) -> None:
    global Plan, BACKEND
    if name == "cython":
        if CompiledPlan is None:
            raise RuntimeError("compiled kernel is not available")
        Plan, BACKEND = CompiledPlan, "cython"
    elif name == "python":
        Plan, BACKEND = PurePlan, "python"
    else:
        raise ValueError(f"unknown backend {name!r}")


@contextmanager
def backend(name: str):
    """Temporarily switch the kernel used by newly compiled plans."""
    saved = BACKEND
    set_backend(name)
    try:
        yield
    finally:
        set_backend(saved)
