"""Exact deformation and obstruction spaces of orthogonal and symplectic
sheaves on projective space."""

from .exactla import BACKEND
from .defcomplex import QuadraticSheaf, deformation_report, infinitesimal_symmetries
from .docformat import dump, load

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "QuadraticSheaf",
    "deformation_report",
    "dump",
    "infinitesimal_symmetries",
    "load",
]
