"""Random block-tridiagonal chiral operators."""

from ._core import *  # noqa: F401,F403
from ._core import Error, RngStream, BlockTridiagonalOperator  # noqa: F401

__version__ = "0.1.0"
