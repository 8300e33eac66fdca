"""Diagonal equations g^2 X^l + g Y^l + 1 = 0 over finite fields and weight-3 conflict-avoiding codes."""

from .cac import CacCode, Codeword, build_optimal_cac, derive_triples, difference_set, export_cac, import_cac, verify_cac
from .charsums import Character, count_via_charsum, jacobi_matrix, jacobi_sum
from .diagonal import (
    bound_sheet,
    cac_size_sheet,
    count_affine,
    count_projective,
    find_solvable_generator,
    find_witness_prime,
    solvability_bound,
    solve,
)
from .errors import ConstructionError, DomainError, ImproperDivisorError, OracleMismatch, ReducibleModulusError
from .field import FieldCtx, FieldElem, make_field, make_subgroup_H, make_subgroup_ell
from .scan import fib_prime_sequence, fibonacci_primitive_roots, p_ell_set, scan_range, verify_conjecture

__version__ = "0.1.0"
