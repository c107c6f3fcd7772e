"""torex: rotation-system embeddings, density parameters, surface surgery,
certified planarization, and toroidal grid minors."""

from .embedding import (DartPath, EmbCycle, EmbeddingError, FormatError,
                        RotationSystem, canonical_form, isomorphic, parse,
                        serialize, vertex_face_incidence)
from .homology import (ExactStretchTooLarge, GenusZeroError, LeapReport,
                       StretchResult, TexCrossingBound, crossing_lb_from_tex,
                       ew, ewn, ewn_dual, fw, fwn, is_contractible,
                       is_separating, leap_report, shortest_nonseparating_cycle,
                       shortest_nonseparating_cycles,
                       shortest_noncontractible_cycle, shortest_switching_ear,
                       stretch)
from .surgery import (CutAlongResult, CutThroughResult, PlanarizingSequence,
                      cut_along, cut_through, good_planarizing_sequence, lift)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
