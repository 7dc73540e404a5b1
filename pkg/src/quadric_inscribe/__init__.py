"""Inscribability of planar 3-connected graphs in the sphere, hyperboloid
and cylinder, with numerical construction of the inscribed ideal polyhedra."""

from .algebra import (GC, Mobius, ProjPoint, cross_ratio, decompose_shape,
                      embed_affine, join_lr, mobius_to_standard, split_lr)
from .ads import (AdSMeasurement, AdSPolyhedron, ads_from_angles, ads_hull,
                  laminations_from_pair, measure, validate)
from .conditions import (CheckReport, EquatorGraph, FeasibilityCertificate,
                         ads_to_rivin, check_ads_conditions,
                         check_rivin_conditions, cone_dimension, dual_graph,
                         feasibility, hamiltonian_cycles, rivin_to_ads)
from .hp import (HPAngleData, HPPolyhedron, fiber_action, hp2_area_and_angles,
                 hp_angles, hp_embed, hp_from_angles, hp_hull, minimize_length,
                 section_of)
from .inscribe import InscribedMesh, export, import_mesh, inscribe, verify_inscribed
from .polygon import (DecoratedLengths, IdealPolygon, MarkedTriangulation,
                      earthquake, infinitesimal_shear_field, lambda_lengths,
                      length_fn, lengths_to_shears, polygon_from_shears,
                      shear_of_diagonal, symplectic_form)

__version__ = "0.1.0"
