"""Quiver moment maps, their stratifications, and exact jet point counts."""

from __future__ import annotations

__version__ = "0.1.0"

from .quiver import Quiver, QuiverError, ZeroDimensionError, euler_form, sym_form
from .predicates import (fundamental_domain_contains, has_property_P, is_totally_negative,
                         simple_module_exists)
from .strata import (SemisimpleType, aux_quiver, enumerate_semisimple_types, enumerate_top_types,
                     tau_min, types_leq, z_sequence)
from .bounds import (cb_bound, check_loop_lemma, check_totneg_lemma, dim_M, dim_R_double, dim_X,
                     mustata_ledger)
from .ring import RingMatrix, TruncatedPoly, enumerate_ring, kernel_size_exponent
from .counting import (CountRecord, MomentSystem, check_jet_fiber_lemma, count_fiber_over_origin,
                       count_moment_fiber, count_multiplicative_fiber, mustata_diagnostic,
                       normalized_sequence, singular_jet_count)
from .mukai import (MukaiVector, NSLattice, cross_check_gloop, ext_quiver_from_mukai, is_positive,
                    is_primitive, mukai_pairing)
