"""Fourier analysis attached to an arbitrary nondegenerate bilinear form ``b(x, y) = x^T M y``."""
from .errors import (AxisOutOfRange, Degenerate, DimensionMismatch, EmptyFrequencyList, GeoFTError, GridMismatch,
                     IncommensurateWave, NonSquare, NotGridRealizable, NotPeriodic, NotPositiveDefinite,
                     ParamOutOfRange, PreconditionFailed, RadiusTooLarge, SingularMatrix, TailBoundViolated,
                     TrivialAlgebraWarning, UnknownCheck, UnsupportedMode)
from .forms import (Classification, GeometricPair, GeometricStructure, Side, adjoint, canonical_pair, classify,
                    geometric_pair, in_group, in_lie_algebra, lie_algebra_basis, make_structure, negated, opposite,
                    sample_group_element, symplectic_matrix)
from .fields import (FieldOp, GaussianFunction, GridMode, GridSpec, PlaneWave, PolyGaussian, SampledField,
                     TrigPolynomial, b_plane_wave, field_map, gaussian_geometric_ft, gaussian_inverse_geometric_ft,
                     sample, tau_action)
from .spectral import (FrequencyLattice, Method, Spectrum, classical_ft, convolve, dft_direct, geometric_ft,
                       inverse_geometric_ft, sheared_lattice)
from .calculus import (Direction, b_laplacian, derivative_transform_identity, gradient, laplacian_equivariance,
                       laplacian_symbol, laplacian_transform_identity, partial_derivative, plane_wave_eigencheck,
                       sobolev_norm_identity)
from .lattice import Lattice, PoissonForm, PoissonReport, enumerate_points, gaussian_tail_bound, poisson_check
from .fraclap import FracCheck, FracParams, frac_laplacian, frac_property_check, multiplier, path_agreement
from .identities import CATALOG, Backend, CheckReport, CheckSpec, run_check, run_suite

__version__ = "0.1.0"
