"""Contractibility of closed curves on the boundary of a triangulated 3-manifold.

The package decides whether a possibly self-crossing PL closed curve on the
boundary surface of a triangulated 3-manifold is contractible inside the
manifold.  Self-crossings are removed two at a time by smoothing, each step
certified by an exact free-group identity; embedded curves are handled by a
bounded normal-surface search for a spanning disk.  All geometry is exact
rational arithmetic; every run is deterministic.
"""

from .triangulation import Triangulation, ValidationReport, parse_triangulation, validate_manifold
from .boundary import BoundarySurface, boundary_surface
from .curve import PLCurve, CrossingSet, compute_crossings, parse_curve
__version__ = "0.1.0"
