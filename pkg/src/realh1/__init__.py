"""Galois cohomology H^1(R, G) of real quasi-connected reductive groups.

H^1(R, G) is computed as the set of orbits of W0 acting on the finite
F_2-vector space H^1(R, Q) by xi * w = w^{-1}_* xi + delta(w), where Q is a
fundamental quasi-torus of G.
"""

from .catalog import catalog_get, list_entries
from .descriptor import QuasiConnectedDescriptor, make_descriptor
from .fgab import FgAbGroup, GammaModule, h1_gamma
from .intmat import IntMatrix, smith_normal_form
from .orbits import OrbitReport, h1_compute

__all__ = ["FgAbGroup", "GammaModule", "IntMatrix", "OrbitReport", "QuasiConnectedDescriptor",
           "catalog_get", "h1_compute", "h1_gamma", "list_entries", "make_descriptor",
           "smith_normal_form"]
