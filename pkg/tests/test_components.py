"""Centralizer shapes, component groups, eigenspaces and eta characters."""

import pytest

from wdsign.errors import DomainError
from wdsign.field import QuadraticCharacter, make_padic_odd
from wdsign.components import (
    centralizer,
    component_group,
    eigenspace,
    eta,
    eta_c,
)
from wdsign.reps import (
    Atom,
    AtomSet,
    CONJUGATE_ORTHOGONAL,
    FormalRep,
    ORTHOGONAL,
    SYMPLECTIC,
)
from wdsign.classify import UnramifiedRep, unramified_build

from conftest import random_selfdual_table


def _orthogonal_world():
    group = make_padic_odd(1).square_classes
    trivial = QuadraticCharacter.trivial(group)
    atoms = AtomSet(
        [
            Atom("M1", 1, ORTHOGONAL, group.character("u")),
            Atom("M2", 3, ORTHOGONAL, trivial),
            Atom("M3", 2, ORTHOGONAL, group.character("pi")),
            Atom("S1", 2, SYMPLECTIC, trivial),
            Atom("P", 2, None, trivial, dual_partner="Pd"),
            Atom("Pd", 2, None, trivial, dual_partner="P"),
        ]
    )
    return group, atoms


def test_centralizer_factors():
    group, atoms = _orthogonal_world()
    m = FormalRep.of([("M1", 1)], ORTHOGONAL)
    assert centralizer(m, atoms).render() == "O(1)"
    m = FormalRep.of([("M1", 2)], ORTHOGONAL)
    assert centralizer(m, atoms).render() == "O(2)"
    m = FormalRep.of([("P", 1), ("Pd", 1)], ORTHOGONAL)
    assert centralizer(m, atoms).render() == "GL(1)"
    m = FormalRep.of([("M1", 1), ("S1", 2), ("P", 1), ("Pd", 1)], ORTHOGONAL)
    assert centralizer(m, atoms).render() == "O(1) x Sp(2) x GL(1)"
    with pytest.raises(DomainError):
        centralizer(FormalRep.of([("M1", 1)]), atoms)  # undeclared duality


def test_component_group_basis_and_orders():
    group, atoms = _orthogonal_world()
    m = FormalRep.of([("M1", 2), ("M2", 1), ("S1", 2), ("P", 1), ("Pd", 1)], ORTHOGONAL)
    cg = component_group(m, atoms)
    assert cg.basis_ids() == ("M1", "M2")
    assert cg.order == 4
    # GL pairs alone give the trivial group
    pair_only = FormalRep.of([("P", 1), ("Pd", 1)], ORTHOGONAL)
    assert component_group(pair_only, atoms).rank == 0
    # multiplicities do not change the basis
    big = FormalRep.of([("M1", 5), ("M2", 4)], ORTHOGONAL)
    assert component_group(big, atoms).basis_ids() == ("M1", "M2")


def test_plus_subgroup_has_index_at_most_two():
    group, atoms = _orthogonal_world()
    m = FormalRep.of([("M1", 1), ("M2", 1), ("M3", 1)], ORTHOGONAL)
    cg = component_group(m, atoms, use_plus=True)
    assert cg.order == 8
    assert cg.valid_order == 4  # index two: two odd-dimensional summands
    all_even = FormalRep.of([("M3", 1)], ORTHOGONAL)
    cg2 = component_group(all_even, atoms, use_plus=True)
    assert cg2.valid_order == cg2.order == 2  # index one


def test_plus_is_rejected_for_conjugate_parameters():
    cgroup = make_padic_odd(1, involution="inert").square_classes
    atoms = AtomSet(
        [Atom("C1", 1, CONJUGATE_ORTHOGONAL, QuadraticCharacter.trivial(cgroup, False))]
    )
    m = FormalRep.of([("C1", 1)], CONJUGATE_ORTHOGONAL)
    assert component_group(m, atoms).rank == 1
    with pytest.raises(DomainError):
        component_group(m, atoms, use_plus=True)


def test_symplectic_irreducible_gives_z2():
    group, atoms = _orthogonal_world()
    m = FormalRep.of([("S1", 1)], SYMPLECTIC)
    cg = component_group(m, atoms)
    assert cg.render() == "Z/2"


def test_unramified_component_groups():
    ctx = make_padic_odd(1)
    rep, atoms = unramified_build(UnramifiedRep((), 1, 1), ctx)
    cg = component_group(rep, atoms, use_plus=True)
    assert cg.valid_order == 2  # A+ = Z/2 when both m, n > 0


def test_eigenspace_rules():
    group, atoms = _orthogonal_world()
    m = FormalRep.of([("M1", 2), ("M2", 1), ("M3", 1)], ORTHOGONAL)
    cg = component_group(m, atoms)
    a1 = cg.element(["M1"])
    assert eigenspace(m, atoms, a1) == FormalRep.of([("M1", 1)], ORTHOGONAL)
    assert eigenspace(m, atoms, cg.zero) == FormalRep.empty(ORTHOGONAL)
    a12 = cg.element(["M1", "M2"])
    assert eigenspace(m, atoms, a12) == FormalRep.of([("M1", 1), ("M2", 1)], ORTHOGONAL)
    # dim M^(a+b) = dim M^a + dim M^b mod 2
    for a in cg.elements():
        for b in cg.elements():
            lhs = cg.eigen_dim(a + b) % 2
            rhs = (cg.eigen_dim(a) + cg.eigen_dim(b)) % 2
            assert lhs == rhs


def test_eta_and_eta_c_are_homomorphisms(rng):
    for _ in range(15):
        table = random_selfdual_table(rng)
        atoms = table.atoms
        same_type = [a.id for a in atoms if a.duality == ORTHOGONAL]
        if not same_type:
            continue
        m = FormalRep.of([(i, rng.randint(1, 3)) for i in same_type], ORTHOGONAL)
        cg = component_group(m, atoms)
        elements = list(cg.elements())
        cs = list(table.field.square_classes.elements())
        for a in elements:
            for b in elements:
                assert eta(cg, a + b) == eta(cg, a) * eta(cg, b)
                for c in cs:
                    assert eta_c(cg, c, a + b) == eta_c(cg, c, a) * eta_c(cg, c, b)


def test_eta_values():
    group, atoms = _orthogonal_world()
    m = FormalRep.of([("M1", 1), ("S1", 2)], ORTHOGONAL)
    cg = component_group(m, atoms)
    assert eta(cg, cg.zero) == 1
    assert eta(cg, cg.element(["M1"])) == -1  # dim 1
    sympl = FormalRep.of([("S1", 1)], SYMPLECTIC)
    cg2 = component_group(sympl, atoms)
    assert eta(cg2, cg2.element(["S1"])) == 1  # even dimension: eta trivial
    # eta_c at the identity class is +1
    assert eta_c(cg, group.identity, cg.element(["M1"])) == 1


def test_plus_constraint_is_dimension_parity():
    group, atoms = _orthogonal_world()
    m = FormalRep.of([("M1", 1), ("M2", 1), ("M3", 2)], ORTHOGONAL)
    cg = component_group(m, atoms, use_plus=True)
    for a in cg.elements():
        assert cg.valid(a) == (cg.eigen_dim(a) % 2 == 0)


def test_product_group_disambiguates_shared_labels():
    group, atoms = _orthogonal_world()
    m = FormalRep.of([("M1", 1)], ORTHOGONAL)
    cg = component_group(m, atoms)
    prod = cg.product(cg)
    assert prod.basis_ids() == ("M1", "M1'")
    assert prod.rank == 2
