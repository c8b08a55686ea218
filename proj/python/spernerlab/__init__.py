"""Exact and Monte Carlo tools for antichains, shadows, and graph containers
on the Boolean lattice.

Subsets of [n] = {1,...,n} are integer bit masks (bit i-1 <-> element i);
families are lists of masks with the ground size n passed alongside.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
