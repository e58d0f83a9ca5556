"""theta-forge: rank-2 cluster scattering diagrams, theta functions, and
constructive positivity/atomicity verdicts, all in exact integer
arithmetic."""

from .series import (CutoffError, InexactDivisionError, NonInvertibleError,
                     TruncatedSeries, add, coefficient, delta, exact_divide,
                     monomial, mul, power, sub, truncate)
from .scatter import (Chamber, CheckReport, ConsistencyBug, DiagramError,
                      OnWallError, PathAutomorphism, ScatteringDiagram,
                      Wall, apply_path, chamber_adjacent, chamber_of,
                      chambers, check_consistency, check_wall_positivity,
                      complete, crossing_apply, diagram_from_json,
                      initial_diagram, loop_product, path_product)
from .theta import (AtomicityVerdict, BrokenLine, NotInSpanError,
                    PositivityVerdict, ThetaExpansion, broken_lines,
                    check_atomicity, check_transition_positivity,
                    check_universal_positivity, expand, expansion_from_json,
                    localize, structure_constants, theta_local, transport)
from .cluster import (ClusterChamber, ClusterError, Seed,
                      check_cluster_theta_agreement,
                      check_laurent_positivity, cluster_atlas_positivity,
                      cluster_chambers, cluster_variables, initial_chamber,
                      initial_seed, mutate)

__version__ = "0.1.0"

__all__ = [n for n in dir() if not n.startswith("_")]
