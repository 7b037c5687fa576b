"""Schur's orbit construction and the schurity test."""

from __future__ import annotations

from dataclasses import dataclass

from .autgrp import PermGroup, right_translations, scheme_automorphisms
from .groups import FiniteGroup, Subgroup
from .schemes import to_scheme
from .srings import SRing, make_sring, quotient_sring


class NotOverGroup(ValueError):
    """The permutation group does not contain the right translations."""


@dataclass(frozen=True)
class SchurityVerdict:
    schurian: bool
    aut_order: int
    aut_e_orbits: tuple[tuple[int, ...], ...]
    mismatch_witness: tuple[int, tuple[int, ...]] | None
    stabilizer_order: int

    def format(self, G: FiniteGroup) -> str:
        lines = [f"schurian={'true' if self.schurian else 'false'} aut_order={self.aut_order}"]
        lines += ["orbit: " + " ".join(G.format(x) for x in orb) for orb in self.aut_e_orbits]
        return "\n".join(lines) + "\n"


def orbit_sring(G: FiniteGroup, gamma: PermGroup) -> SRing:
    """The S-ring spanned by the orbits of the identity stabilizer of ``gamma``."""
    if gamma.degree != G.order or not gamma.contains_group(right_translations(G)):
        raise NotOverGroup("the group does not contain the right translations of G")
    orbits = gamma.stabilizer(0).orbits()
    return make_sring(G, orbits)


def is_schurian(S: SRing, parallel: bool = False) -> SchurityVerdict:
    aut = scheme_automorphisms(to_scheme(S), parallel=parallel)
    K = aut.stabilizer(0)
    orbits = tuple(K.orbits())
    basic = S.partition.as_sets()
    orbit_sets = {frozenset(o) for o in orbits}
    witness = None
    for k, cls in enumerate(S.partition.classes):
        if frozenset(cls) not in orbit_sets:
            part = next(o for o in orbits if o[0] in cls)
            witness = (k, part)
            break
    return SchurityVerdict(
        schurian=orbit_sets == basic,
        aut_order=aut.order(),
        aut_e_orbits=orbits,
        mismatch_witness=witness,
        stabilizer_order=K.order(),
    )


def quotient_aut_order(S: SRing, U: Subgroup, L: Subgroup) -> int:
    """Order of the automorphism group of the quotient S-ring over ``U/L``."""
    Q = quotient_sring(S, U, L)
    return scheme_automorphisms(to_scheme(Q)).stabilizer(0).order()
