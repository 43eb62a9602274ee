"""Point-conic and point-ellipse configurations.

Combinatorial incidence structures with forbidden-biclique predicates, a
planar conic geometry kernel, builders for the classical point-conic
configurations, audits, and JSON/SVG interchange.
"""

from .analysis import (AuditReport, IntersectionType, audit, geometric_meets,
                       intersection_type, intersection_type_combinatorial,
                       isometry_check, strongly_isometric_to_circles)
from .configuration import GeometricConfiguration, Polytope4
from .constructions import (ConstructionError, cell24, crossed_ellipses,
                            dipyramid_carnot, parallelogram_ellipse_pair,
                            pmn, polygon_ring, product, qcube_48,
                            realize_by_conics, realize_lineal_by_circles,
                            richter_gebert)
from .geometry import (AffineMap2, Conic, GeometryError, Projection4to2,
                       apply_affine, apply_affine_point, carnot_product,
                       carnot_solve_sixth, central_conic_from_pairs, classify,
                       conic_conic_intersections, conic_from_5_points,
                       dilation_to_circle, ellipse_parameters,
                       line_conic_intersections, point_on_conic, project,
                       project_conic_plane, signed_ratio)
from .incidence import (IncidenceError, IncidenceStructure, LeviGraph,
                        PropertyReport, Signature, are_isomorphic, catalog,
                        catalog_names, cyclic_cascade, disjoint_union, dual,
                        girth, has_biclique, incidence_switch, levi_graph,
                        new_incidence_structure, property_report, signature,
                        vertex_connectivity)
from .io import (InterfaceError, read_configuration, write_configuration)
from .svg import SceneStyle, render_svg

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
