"""S-rings over finite groups, their Cayley schemes, automorphisms and schurity."""

__version__ = "0.1.0"

from .autgrp import PermGroup, is_block_system, orbits, right_translations, scheme_automorphisms, stabilizer
from .constructions import m27_partition, m3n_partition
from .groups import (
    FiniteGroup,
    GroupError,
    Subgroup,
    is_normal,
    left_cosets,
    mk_cyclic,
    mk_from_table,
    mk_metacyclic,
    parse_group_spec,
    quotient,
    subgroup_generated,
)
from .schemes import CayleyScheme, NotCoherent, neighborhood, to_scheme, verify_scheme
from .schurity import SchurityVerdict, is_schurian, orbit_sring, quotient_aut_order
from .srings import (
    NotClosed,
    Partition,
    PartitionError,
    SRing,
    a_subgroups,
    class_sum,
    is_commutative,
    quotient_sring,
    ring_mul,
    structure_constants,
    verify_partition,
)
