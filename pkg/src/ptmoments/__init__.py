"""Entanglement detection for two-qubit states from the moments of the
partially transposed density matrix."""
from .bounds3d import (BoundsResult, Class3D, StationaryRoots, P_value, classify_from_bounds, classify_triple,
                       classify_triple_many, delta_and_pq, dividing_surface, envelope, p4_bounds, p4_bounds_many, stationary_roots)
from .config import DEFAULT, Tolerances
from .errors import (DomainError, InconsistentMomentsError, InternalConsistencyError, PTMomentError,
                     ResolutionError, ValidationError)
from .moments import (PTMomentVector, Spectrum, bell_diagonal_moments, concurrence_interval, det_from_moments,
                      elementary_symmetric, negativity, pt_moments, reconstruct_spectrum, werner_moments)
from .qstate import (BellDiagonalParams, DensityMatrix, PartialTranspose, is_bell_separable, make_bell_diagonal,
                     make_werner, partial_transpose, sample_random_state)
from .region2d import Class2D, MomentPair, classify_2d, f_bounds, in_region_A, phi4
from .srange import SRange, feasible_s, s_range, s_range_many

__version__ = "0.1.0"
