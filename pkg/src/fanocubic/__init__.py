"""Exact-arithmetic toolkit for the line geometry of cubic threefolds.

Core objects: graded quotient rings of cubics by their partial derivatives,
lines of the two types, double lines and their tangent planes, adjoint-class
representatives on the wedge square, finite-field censuses, and the
reconstruction of a cubic from its double lines.
"""

from .fields import (ExtensionField, FieldSpec, PrimeField, RationalField,
                     field_of_order, parse_field_spec)
from .forms import HomForm, exponents, space_dim
from .binary import BinaryRoots, binary_roots
from .linalg import EchelonSpace, rref_rank_kernel
from .lines import ProjLine, ProjPlane
from .jacobian import (CubicContext, XiClass, build_context, make_xi,
                       pairing_matrix, sigma_line_of_xi, xi_of_line,
                       xi_quadric_rank)
from .linegeom import (LineReport, classify_line, dual_map_image,
                       eckardt_test, hessian_on_line, lines_through_point,
                       plane_section, tangent_plane_witness)
from .adjoint import (AdjointReport, TwoForm, adjoint_class, d_r_lines,
                      evaluate_on_line, primitive_form, schubert_form,
                      w_spaces)
from .census import (CensusConfig, CensusReport, census_run, dphi_rank,
                     eckardt_census, enumerate_lines, line_count,
                     normalize_double_line, reconstruct)
from .parser import form_to_text, parse_cubic

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
