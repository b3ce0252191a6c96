"""Formal representations, duality signs and the epsilon axiom system."""

import pytest

from wdsign.errors import DomainError, IncompleteTableError
from wdsign.field import QuadraticCharacter, make_padic_odd
from wdsign.reps import (
    Atom,
    AtomSet,
    CONJUGATE_ORTHOGONAL,
    CONJUGATE_SYMPLECTIC,
    CONTEXT_CONJUGATE,
    CONTEXT_SELFDUAL,
    EpsilonTable,
    FormalRep,
    ORTHOGONAL,
    SYMPLECTIC,
    det_of_tensor,
    epsilon,
    induce_sign,
    one_dim_conj_type,
    tensor_sign,
    twist,
    validate_epsilon,
)
from wdsign.fixtures import quadratic_family_table, unramified_table
from wdsign.classify import UnramifiedRep

from conftest import PSI, PSI0, random_conjugate_table, random_selfdual_table


def test_tensor_sign_table():
    assert tensor_sign(1, 1) == 1
    assert tensor_sign(-1, -1) == 1
    assert tensor_sign(1, -1) == -1
    assert tensor_sign(-1, 1) == -1
    with pytest.raises(DomainError):
        tensor_sign(0, 1)


def test_induce_sign_is_identity():
    assert induce_sign(1) == 1
    assert induce_sign(-1) == -1
    for b in (1, -1):
        assert induce_sign(tensor_sign(b, b)) == 1


def test_one_dim_conj_type():
    group = make_padic_odd(1, involution="inert").square_classes
    trivial = QuadraticCharacter.trivial(group, False)
    mu = QuadraticCharacter.trivial(group, True)
    assert one_dim_conj_type(trivial) == CONJUGATE_ORTHOGONAL
    assert one_dim_conj_type(mu) == CONJUGATE_SYMPLECTIC
    # squares restrict trivially to k0*
    assert one_dim_conj_type(mu * mu) == CONJUGATE_ORTHOGONAL
    with pytest.raises(DomainError):
        one_dim_conj_type(QuadraticCharacter.trivial(group))


def test_atom_invariants():
    group = make_padic_odd(1).square_classes
    trivial = QuadraticCharacter.trivial(group)
    with pytest.raises(DomainError):
        Atom("bad", 3, SYMPLECTIC, trivial)  # odd symplectic
    with pytest.raises(DomainError):
        Atom("bad", 2, SYMPLECTIC, group.character("u"))  # nontrivial det
    with pytest.raises(DomainError):
        Atom("bad", 2, None, trivial)  # missing partner
    with pytest.raises(DomainError):
        Atom("bad", 2, ORTHOGONAL, trivial, dual_partner="other")  # both given
    # 1-dimensional conjugate type must match the restriction bit
    cgroup = make_padic_odd(1, involution="inert").square_classes
    with pytest.raises(DomainError):
        Atom("bad", 1, CONJUGATE_ORTHOGONAL, QuadraticCharacter.trivial(cgroup, True))
    atom = Atom("ok", 1, CONJUGATE_SYMPLECTIC, QuadraticCharacter.trivial(cgroup, True))
    assert atom.det.restriction_nontrivial is True
    # restriction bit is derived when omitted
    derived = Atom("ok2", 3, CONJUGATE_SYMPLECTIC, QuadraticCharacter.trivial(cgroup))
    assert derived.det.restriction_nontrivial is True


def test_formal_rep_parity_invariants():
    group = make_padic_odd(1).square_classes
    trivial = QuadraticCharacter.trivial(group)
    atoms = AtomSet(
        [
            Atom("O1", 1, ORTHOGONAL, group.character("u")),
            Atom("S1", 2, SYMPLECTIC, trivial),
            Atom("P", 2, None, trivial, dual_partner="Pd"),
            Atom("Pd", 2, None, trivial, dual_partner="P"),
        ]
    )
    ok = FormalRep.of([("O1", 3), ("S1", 2), ("P", 1), ("Pd", 1)], ORTHOGONAL)
    ok.validate(atoms)
    assert ok.dim(atoms) == 3 + 4 + 4
    assert ok.det(atoms).gen_values == group.character("u").gen_values
    with pytest.raises(DomainError):
        FormalRep.of([("S1", 1)], ORTHOGONAL).validate(atoms)  # odd opposite-sign
    with pytest.raises(DomainError):
        FormalRep.of([("P", 2), ("Pd", 1)], ORTHOGONAL).validate(atoms)  # unpaired
    with pytest.raises(DomainError):
        FormalRep.of([("O1", 1)], CONJUGATE_ORTHOGONAL).validate(atoms)  # wrong context


def test_det_of_tensor():
    group = make_padic_odd(1).square_classes
    atoms = AtomSet(
        [
            Atom("A", 2, ORTHOGONAL, group.character("u")),
            Atom("B", 4, ORTHOGONAL, group.character("pi")),
            Atom("C1", 1, ORTHOGONAL, QuadraticCharacter.trivial(group)),
        ]
    )
    m = FormalRep.of([("A", 1)], ORTHOGONAL)
    n = FormalRep.of([("B", 1)], ORTHOGONAL)
    # both even dimensional: clearly trivial
    assert det_of_tensor(m, n, atoms).is_trivial
    # tensoring with the 1-dimensional trivial representation keeps det M
    one = FormalRep.of([("C1", 1)], ORTHOGONAL)
    assert det_of_tensor(m, one, atoms).gen_values == group.character("u").gen_values
    # chi^2 . chi^2 = trivial
    assert det_of_tensor(one, one, atoms).is_trivial


def test_unramified_twist_is_frobenius_multiplication():
    ctx = make_padic_odd(1)
    u = UnramifiedRep(("s",), 1, 1)
    table, rep = unramified_table(u, ctx)
    c = ctx.square_classes.element("u")
    # multiply Frobenius eigenvalues by -1: C(s) -> C(-s) needs -s present
    assert table.twist_atom("C(1)", c) == "C(-1)"
    assert table.twist_atom("C(-1)", c) == "C(1)"
    with pytest.raises(IncompleteTableError):
        table.twist_atom("C(s)", c)
    # identity twist is a no-op
    assert twist(rep, ctx.square_classes.identity, table) == rep


def test_twist_is_an_action_where_closed():
    table, atoms = quadratic_family_table(1, 1)
    group = table.field.square_classes
    rep = FormalRep.of([("D(1)", 1), ("D(u)", 2)], ORTHOGONAL)
    for c in group.elements():
        for d in group.elements():
            once = twist(twist(rep, c, table), d, table)
            assert once == twist(rep, c * d, table)


def test_twist_det_bookkeeping():
    table, atoms = quadratic_family_table(1, -1)
    group = table.field.square_classes
    rep = FormalRep.of([("D(u)", 1), ("D(pi)", 1)], ORTHOGONAL)
    c = group.element("pi")
    twisted = twist(rep, c, table)
    expected = rep.det(atoms) * group.character(c).power(rep.dim(atoms))
    assert twisted.det(atoms).gen_values == expected.gen_values
    assert twisted.declared_duality == ORTHOGONAL


def test_epsilon_empty_and_biadditive(rng):
    table = random_selfdual_table(rng, max_atoms=4)
    atoms = table.atoms
    ids = list(atoms.ids())
    empty = FormalRep.empty(ORTHOGONAL)
    some = FormalRep.of([(ids[0], 1)], None)
    assert epsilon(empty, some, PSI, table) == 1
    assert epsilon(some, empty, PSI, table) == 1
    for _ in range(20):
        m1 = FormalRep.of([(i, rng.randint(0, 2)) for i in ids])
        m2 = FormalRep.of([(i, rng.randint(0, 2)) for i in ids])
        n = FormalRep.of([(i, rng.randint(0, 2)) for i in ids])
        lhs = epsilon(m1.direct_sum(m2), n, PSI, table)
        rhs = epsilon(m1, n, PSI, table) * epsilon(m2, n, PSI, table)
        assert lhs == rhs


def test_epsilon_translate_rule(rng):
    for _ in range(10):
        table = random_selfdual_table(rng, max_atoms=4)
        atoms = table.atoms
        ids = list(atoms.ids())
        m = FormalRep.of([(ids[0], 1)] + [(i, rng.randint(0, 1)) for i in ids])
        n = FormalRep.of([(ids[-1], 1)] + [(i, rng.randint(0, 1)) for i in ids])
        det = det_of_tensor(m, n, atoms)
        for a in table.field.square_classes.elements():
            expected = epsilon(m, n, PSI, table) * det.value(a)
            assert epsilon(m, n, PSI.translate(a), table) == expected


def test_epsilon_unramified_is_plus_one():
    ctx = make_padic_odd(3)
    table, rep = unramified_table(UnramifiedRep(("s",), 2, 1), ctx)
    assert epsilon(rep, rep, PSI, table) == 1
    assert rep.det(atoms=table.atoms).at_minus_one() == 1


def test_missing_entry_raises_incomplete():
    ctx = make_padic_odd(1)
    group = ctx.square_classes
    atoms = AtomSet([Atom("A", 2, ORTHOGONAL, QuadraticCharacter.trivial(group))])
    table = EpsilonTable(ctx, CONTEXT_SELFDUAL, PSI, atoms, {})
    m = FormalRep.of([("A", 1)], ORTHOGONAL)
    with pytest.raises(IncompleteTableError):
        epsilon(m, m, PSI, table)


def test_validate_passes_on_empty_table():
    ctx = make_padic_odd(1)
    table = EpsilonTable(ctx, CONTEXT_SELFDUAL, PSI, AtomSet(), {})
    assert validate_epsilon(table).ok


def test_conjugate_orthogonal_pairs_pass_a3(rng):
    table = random_conjugate_table(rng)
    report = validate_epsilon(table)
    assert report.ok
    # same-sign pairs really are +1
    for atom_a in table.atoms:
        for atom_b in table.atoms:
            if atom_a.duality is None or atom_b.duality is None:
                continue
            if atom_a.sign() * atom_b.sign() == 1:
                assert table.entry(atom_a.id, atom_b.id, PSI0) == 1


# --- dedicated single-axiom violation fixtures ----------------------------


def _selfdual_base(q=1):
    ctx = make_padic_odd(q)
    group = ctx.square_classes
    trivial = QuadraticCharacter.trivial(group)
    return ctx, group, trivial


def fixture_a1():
    ctx, group, trivial = _selfdual_base()
    atoms = AtomSet(
        [
            Atom("X", 1, ORTHOGONAL, group.character("u")),
            Atom("Y", 1, ORTHOGONAL, trivial),
        ]
    )
    pairs = {
        ("X", "Y", PSI.key()): 1,
        # translate factor is chi_u(pi) = -1, so +1 here breaks A1 only
        ("X", "Y", PSI.translate(group.element("pi")).key()): 1,
    }
    return EpsilonTable(ctx, CONTEXT_SELFDUAL, PSI, atoms, pairs)


def fixture_a2():
    ctx, group, trivial = _selfdual_base(q=3)
    atoms = AtomSet(
        [
            Atom("X", 1, ORTHOGONAL, group.character("pi")),
            Atom("Y", 1, ORTHOGONAL, trivial),
        ]
    )
    # det(X (x) Y)(-1) = (pi, u) = -1: no sign-valued epsilon exists
    pairs = {("X", "Y", PSI.key()): 1}
    return EpsilonTable(ctx, CONTEXT_SELFDUAL, PSI, atoms, pairs)


def fixture_a3():
    ctx = make_padic_odd(1, involution="inert")
    group = ctx.square_classes
    atoms = AtomSet(
        [
            Atom("X", 1, CONJUGATE_ORTHOGONAL, QuadraticCharacter.trivial(group, False)),
            Atom("Y", 3, CONJUGATE_ORTHOGONAL, QuadraticCharacter.trivial(group, False)),
        ]
    )
    pairs = {("X", "Y", PSI0.key()): -1}
    return EpsilonTable(ctx, CONTEXT_CONJUGATE, PSI0, atoms, pairs)


def fixture_a4():
    ctx, group, trivial = _selfdual_base()
    atoms = AtomSet(
        [
            Atom("P", 1, None, trivial, dual_partner="Pd"),
            Atom("Pd", 1, None, trivial, dual_partner="P"),
            Atom("N", 1, ORTHOGONAL, trivial),
        ]
    )
    # hyperbolic product should be det(P (x) N)(-1) = +1; -1 breaks A4 only
    pairs = {("P", "N", PSI.key()): 1, ("Pd", "N", PSI.key()): -1}
    return EpsilonTable(ctx, CONTEXT_SELFDUAL, PSI, atoms, pairs)


def fixture_a5():
    ctx = make_padic_odd(1, involution="inert")
    group = ctx.square_classes
    atoms = AtomSet(
        [
            Atom("X", 1, CONJUGATE_ORTHOGONAL, QuadraticCharacter.trivial(group, False)),
            Atom("Y", 1, CONJUGATE_SYMPLECTIC, QuadraticCharacter.trivial(group, True)),
        ]
    )
    pairs = {("X", "Y", PSI0.key()): 0}  # not a sign
    return EpsilonTable(ctx, CONTEXT_CONJUGATE, PSI0, atoms, pairs)


@pytest.mark.parametrize(
    "builder,axiom",
    [
        (fixture_a1, "A1"),
        (fixture_a2, "A2"),
        (fixture_a3, "A3"),
        (fixture_a4, "A4"),
        (fixture_a5, "A5"),
    ],
)
def test_each_axiom_has_a_dedicated_detector(builder, axiom):
    report = validate_epsilon(builder())
    assert not report.ok
    assert report.axioms_violated() == (axiom,)


def test_entry_from_foreign_psi_orbit_is_incomplete():
    table, atoms = quadratic_family_table(1, 1)
    from wdsign.field import PsiClass

    with pytest.raises(IncompleteTableError):
        table.entry("D(1)", "D(u)", PsiClass("other"))


def test_table_rejects_mixed_duality_contexts():
    ctx = make_padic_odd(1, involution="inert")
    group = ctx.square_classes
    atoms = AtomSet(
        [
            Atom("A", 2, ORTHOGONAL, QuadraticCharacter.trivial(group)),
            Atom("B", 1, CONJUGATE_ORTHOGONAL, QuadraticCharacter.trivial(group, False)),
        ]
    )
    with pytest.raises(DomainError):
        EpsilonTable(ctx, CONTEXT_CONJUGATE, PSI0, atoms, {})
    with pytest.raises(DomainError):
        EpsilonTable(ctx, CONTEXT_SELFDUAL, PSI, atoms, {})
