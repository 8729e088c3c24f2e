"""Finite groups admitting diagonal double Kodaira structures.

Multiplication-table groups, a presentation DSL with coset enumeration, the
CCT and monolithic predicates, automorphism groups, the exhaustive structure
search, and first homology of the associated branched covers.
"""

from .group import FiniteGroup, GroupError, SubgroupSet
from .presentation import Presentation, Word, parse_presentation, todd_coxeter
from .snf import AbelianInvariants, smith_normal_form

__version__ = "0.1.0"
# bump whenever a change could alter any cached result
ENGINE_VERSION = "1"

__all__ = [
    "AbelianInvariants",
    "ENGINE_VERSION",
    "FiniteGroup",
    "GroupError",
    "Presentation",
    "SubgroupSet",
    "Word",
    "parse_presentation",
    "smith_normal_form",
    "todd_coxeter",
]
