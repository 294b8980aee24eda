"""Weight-one theta series of totally real cubic fields, with exact verification tools."""
from .arith import is_fundamental, is_prime, kronecker, three_reflection
from .cubic import CubicForm, enumerate_cubic_fields, ring_of, trace_form, trace_zero
from .pipeline import verify_discriminant, verify_range
from .qform import QuadForm, class_group, compose, reduce_gl2, reduce_sl2, three_rank
from .theta import ThetaSeries, f_K, first_two_nonzero, linearly_independent, theta_expand

__version__ = "0.1.0"
