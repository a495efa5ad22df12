"""Exact and numerical tools for toric Sasaki-Einstein 5-manifolds.

Submodules: ``lattice`` (integer linear algebra), ``fanpoly`` (2D fans and
polygons), ``reduction`` (3-Sasakian weight matrices), ``asd`` (isotropy
data), ``sasaki`` (circle bundles, classification, joins) and ``metriclab``
(float checks of the Guillemin metric).
"""
from . import asd, fanpoly, lattice, metriclab, reduction, sasaki

__all__ = ["asd", "fanpoly", "lattice", "metriclab", "reduction", "sasaki"]
__version__ = "0.1.0"
