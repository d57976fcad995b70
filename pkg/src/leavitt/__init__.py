"""Computational toolkit for Leavitt path algebras of finite directed
graphs with symbolic infinite-edge bundles."""

from . import algebra, branching, catalog, chen, classify, graphs, ideals
from .errors import InputError, InternalCheckError, LeavittError, MalformedSystem, WindowOverflow
from .fields import QQ, PrimeField

__version__ = "0.1.0"

__all__ = [
    "algebra",
    "branching",
    "catalog",
    "chen",
    "classify",
    "graphs",
    "ideals",
    "InputError",
    "InternalCheckError",
    "LeavittError",
    "MalformedSystem",
    "WindowOverflow",
    "QQ",
    "PrimeField",
    "__version__",
]
