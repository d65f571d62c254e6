"""Two-generator groups, their coset tables, bicolored maps, finite
geometries, and commutation structure."""

__version__ = "0.1.0"

from .cosets import CosetTable, low_index_subgroups, table_to_permutations, todd_coxeter
from .dessin import modular_invariants, passport, signature
from .errors import GzooError
from .geometry import (IncidenceGeometry, basic_hyperplanes, build_defined_geometry,
                       build_stabilized_geometry, classify_generalized_polygon,
                       classify_gu, configuration, dual_geometry, graph_stats,
                       predict_polar_space, veldkamp_closure)
from .contextuality import kappa, kappa_summary
from .permgroup import (PermutationGroup, classify_two_point_stabilizers, group_from,
                        rank_profile, subgroups_equal, two_point_stabilizer)
from .textio import (parse_group_file, parse_permutations, parse_presentation,
                     parse_word)
from .words import Presentation, SubgroupSpec, Word
