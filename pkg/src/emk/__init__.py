"""Exact computations around families of sets with no s pairwise disjoint members.

Subpackages of note: :mod:`emk.core` (masks and families), :mod:`emk.formulas`
(closed forms), :mod:`emk.exactsolve` (matching and cover numbers, blockers),
:mod:`emk.constructions`, :mod:`emk.baranyai`, :mod:`emk.lemmalab`,
:mod:`emk.search` and the ``emk`` command line in :mod:`emk.cli`.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"
