"""Shared helpers: residue-field oracles and random validated tables."""

from __future__ import annotations

import random

import pytest

from wdsign.field import PsiClass, QuadraticCharacter, make_padic_odd
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
)

PSI = PsiClass("psi")
PSI0 = PsiClass("psi0")


# ---------------------------------------------------------------------------
# Brute-force residue field arithmetic for the tame Hilbert symbol oracle.


class SmallField:
    """F_p or F_{p^2} = F_p[x]/(x^2 - c) with c a non-square mod p."""

    def __init__(self, p: int, quadratic: bool = False):
        self.p = p
        self.quadratic = quadratic
        if quadratic:
            self.c = next(
                a for a in range(2, p) if all(pow(b, 2, p) != a for b in range(p))
            )
            self.elements = [(a, b) for a in range(p) for b in range(p)]
            self.one = (1, 0)
            self.zero = (0, 0)
        else:
            self.elements = list(range(p))
            self.one = 1
            self.zero = 0

    @property
    def q(self) -> int:
        return self.p ** (2 if self.quadratic else 1)

    def mul(self, x, y):
        if not self.quadratic:
            return (x * y) % self.p
        a, b = x
        d, e = y
        return ((a * d + b * e * self.c) % self.p, (a * e + b * d) % self.p)

    def inv(self, x):
        for y in self.elements:
            if self.mul(x, y) == self.one:
                return y
        raise ZeroDivisionError

    def neg(self, x):
        if not self.quadratic:
            return (-x) % self.p
        return ((-x[0]) % self.p, (-x[1]) % self.p)

    def units(self):
        return [x for x in self.elements if x != self.zero]

    def squares(self):
        return {self.mul(x, x) for x in self.units()}

    def nonsquare(self):
        squares = self.squares()
        return next(x for x in self.units() if x not in squares)

    def quad_char(self, x) -> int:
        return 1 if x in self.squares() else -1


def tame_hilbert_symbol(field: SmallField, a, b) -> int:
    """(a, b) for a = ua * pi^va over a local field with residue field F_q.

    a and b are (unit part, valuation) pairs; the tame formula evaluates the
    quadratic residue character at (-1)^(va vb) ua^vb ub^(-va).
    """
    (ua, va), (ub, vb) = a, b
    value = field.one
    for _ in range(va * vb % 2):
        value = field.neg(value)
    for _ in range(vb % 2):
        value = field.mul(value, ua)
    for _ in range(va % 2):
        value = field.mul(value, field.inv(ub))
    return field.quad_char(value)


# ---------------------------------------------------------------------------
# Random validated epsilon tables.


def random_selfdual_table(rng: random.Random, max_atoms: int = 5):
    """A validated selfdual table over the q = 1 mod 4 model.

    Over that model det(-1) is always +1, so axiom A2 never constrains the
    determinant choices; partner pairs are forced by A4.
    """
    ctx = make_padic_odd(1)
    group = ctx.square_classes
    atoms = AtomSet()
    count = rng.randint(1, max_atoms)
    i = 0
    while len(atoms) < count:
        kind = rng.choice(("orth", "orth", "sympl", "pair"))
        if kind == "pair" and len(atoms) + 2 > max_atoms:
            kind = "orth"
        if kind == "orth":
            det = group.character(group.element(rng.randrange(group.order)))
            atoms.add(
                Atom(
                    f"O{i}",
                    rng.choice((1, 2, 3)),
                    ORTHOGONAL,
                    det,
                    eps_self={PSI.key(): rng.choice((1, -1))},
                )
            )
        elif kind == "sympl":
            atoms.add(
                Atom(
                    f"S{i}",
                    rng.choice((2, 4)),
                    SYMPLECTIC,
                    QuadraticCharacter.trivial(group),
                    eps_self={PSI.key(): rng.choice((1, -1))},
                )
            )
        else:
            dim = rng.choice((1, 2))
            det = QuadraticCharacter.trivial(group)
            atoms.add(Atom(f"P{i}", dim, None, det, dual_partner=f"P{i}d"))
            atoms.add(Atom(f"P{i}d", dim, None, det, dual_partner=f"P{i}"))
        i += 1
    pair_values = _fill_pairs(rng, atoms, CONTEXT_SELFDUAL, PSI)
    table = EpsilonTable(ctx, CONTEXT_SELFDUAL, PSI, atoms, pair_values)
    assert table.validate().ok
    return table


def random_conjugate_table(
    rng: random.Random, max_atoms: int = 5, store_translates: bool = False
):
    """A validated conjugate table over the inert q = 1 mod 4 model.

    Same-sign pairs are pinned to +1 by A3; opposite-sign pairs are free.
    With store_translates the psi0[t] entries are materialized explicitly
    (still A1-consistent), which the psi-change fault-injection tests flip.
    """
    ctx = make_padic_odd(1, involution="inert")
    group = ctx.square_classes
    atoms = AtomSet()
    count = rng.randint(1, max_atoms)
    i = 0
    while len(atoms) < count:
        kind = rng.choice(("co", "cs", "co", "cs", "pair"))
        if kind == "pair" and len(atoms) + 2 > max_atoms:
            kind = "co"
        if kind == "pair":
            det = QuadraticCharacter.trivial(group, False)
            dim_p = rng.choice((1, 2))
            atoms.add(Atom(f"P{i}", dim_p, None, det, dual_partner=f"P{i}d"))
            atoms.add(Atom(f"P{i}d", dim_p, None, det, dual_partner=f"P{i}"))
        else:
            duality = CONJUGATE_ORTHOGONAL if kind == "co" else CONJUGATE_SYMPLECTIC
            dim = rng.choice((1, 2, 3))
            det = group.character(group.element(rng.randrange(group.order)))
            eps = 1 if duality == CONJUGATE_ORTHOGONAL else rng.choice((1, -1))
            atoms.add(
                Atom(
                    f"{'CO' if kind == 'co' else 'CS'}{i}",
                    dim,
                    duality,
                    QuadraticCharacter(group, det.gen_values, None),
                    eps_self={PSI0.key(): eps},
                )
            )
        i += 1
    pair_values = _fill_pairs(rng, atoms, CONTEXT_CONJUGATE, PSI0)
    table = EpsilonTable(ctx, CONTEXT_CONJUGATE, PSI0, atoms, pair_values)
    if store_translates:
        t = ctx.norm_translate()
        psi_t = PSI0.translate(t)
        extra = {}
        ids = atoms.ids()
        for a_idx, a in enumerate(ids):
            for b in ids[a_idx:]:
                extra[(a, b, psi_t.key())] = table.entry(a, b, psi_t)
        pair_values.update(extra)
        table = EpsilonTable(ctx, CONTEXT_CONJUGATE, PSI0, atoms, pair_values)
    assert table.validate().ok
    return table


def _fill_pairs(rng, atoms: AtomSet, context: str, psi: PsiClass):
    """Random pair values satisfying A3 (same-sign conjugate pairs are +1)
    and A4 (hyperbolic products hit their targets)."""
    values = {}
    ids = atoms.ids()

    def dual(atom_id):
        atom = atoms.get(atom_id)
        return atom_id if atom.duality is not None else atom.dual_partner

    for i, a in enumerate(ids):
        for b in ids[i:]:
            key = tuple(sorted((a, b))) + (psi.key(),)
            if key in values:
                continue
            atom_a, atom_b = atoms.get(a), atoms.get(b)
            both = atom_a.duality is not None and atom_b.duality is not None
            if context == CONTEXT_CONJUGATE and both and atom_a.sign() == atom_b.sign():
                values[key] = 1
                continue
            dual_key = tuple(sorted((dual(a), dual(b)))) + (psi.key(),)
            if dual_key != key and dual_key in values:
                if context == CONTEXT_SELFDUAL:
                    from wdsign.reps import det_of_tensor

                    target = det_of_tensor(atom_a, atom_b, atoms).at_minus_one()
                else:
                    target = 1
                values[key] = target * values[dual_key]
            else:
                values[key] = rng.choice((1, -1))
    return values


def random_metaplectic_table(rng: random.Random):
    """A validated selfdual table with symplectic atoms closed under the
    u-class twist, plus the unit atom C1 and its twist Cm1.

    Entries against the 1-dimensional atoms are forced to agree with the
    self epsilons through the twist action (eps(X (x) C1) = eps(X),
    eps(X (x) Cm1) = eps(X(u))), the compatibility that makes a table an
    honest epsilon system; pair values among the X's stay random.
    """
    ctx = make_padic_odd(1)
    group = ctx.square_classes
    trivial = QuadraticCharacter.trivial(group)
    atoms = AtomSet()
    eps_cm1 = rng.choice((1, -1))
    atoms.add(Atom("C1", 1, ORTHOGONAL, trivial, eps_self={PSI.key(): 1}))
    atoms.add(
        Atom("Cm1", 1, ORTHOGONAL, group.character("u"), eps_self={PSI.key(): eps_cm1})
    )
    twists = {
        ("C1", "u"): "Cm1",
        ("Cm1", "u"): "C1",
    }
    n_pairs = rng.randint(1, 2)
    for i in range(n_pairs):
        dim = rng.choice((2, 4))
        for suffix in ("", "u"):
            atoms.add(
                Atom(
                    f"X{i}{suffix}",
                    dim,
                    SYMPLECTIC,
                    trivial,
                    eps_self={PSI.key(): rng.choice((1, -1))},
                )
            )
        twists[(f"X{i}", "u")] = f"X{i}u"
        twists[(f"X{i}u", "u")] = f"X{i}"
    pair_values = _fill_pairs(rng, atoms, CONTEXT_SELFDUAL, PSI)

    def force(a, b, value):
        pair_values[tuple(sorted((a, b))) + (PSI.key(),)] = value

    def eps_of(atom_id):
        return atoms.get(atom_id).eps_self[PSI.key()]

    force("C1", "C1", eps_of("C1"))
    force("C1", "Cm1", eps_of("Cm1"))
    force("Cm1", "Cm1", eps_of("C1"))
    for atom_id, twisted_id in list(twists.items()):
        if atom_id[0].startswith("X"):
            force(atom_id[0], "C1", eps_of(atom_id[0]))
            force(atom_id[0], "Cm1", eps_of(twists[(atom_id[0], "u")]))
    table = EpsilonTable(ctx, CONTEXT_SELFDUAL, PSI, atoms, pair_values, twists)
    assert table.validate().ok
    m = FormalRep.of([(f"X{i}", 1) for i in range(n_pairs)], SYMPLECTIC)
    n = FormalRep.of([("C1", 1), ("Cm1", 2)], ORTHOGONAL)
    return table, m, n


def random_skew_table(rng: random.Random, parity: int):
    """A validated conjugate table with a mu twist, shaped for the odd
    (parity 1, conjugate-orthogonal) or even (parity 0, conjugate-symplectic)
    skew-hermitian case; the ordering identity is built into the values."""
    ctx = make_padic_odd(1, involution="inert")
    group = ctx.square_classes
    psi = PsiClass("psi0")
    atoms = AtomSet()
    atoms.add(
        Atom("mu", 1, CONJUGATE_SYMPLECTIC, QuadraticCharacter.trivial(group, True))
    )
    if parity == 1:
        duality, other = CONJUGATE_ORTHOGONAL, CONJUGATE_SYMPLECTIC
        dims = [rng.choice((1, 3)) for _ in range(2)]
    else:
        duality, other = CONJUGATE_SYMPLECTIC, CONJUGATE_ORTHOGONAL
        dims = [2, 2]
    for i, d in enumerate(dims):
        atoms.add(Atom(f"X{i}", d, duality, QuadraticCharacter.trivial(group)))
        atoms.add(Atom(f"X{i}t", d, other, QuadraticCharacter.trivial(group)))
    values = _fill_pairs(rng, atoms, CONTEXT_CONJUGATE, psi)
    # twist-transfer identity: eps(X_i (x) mu X_j) = eps(mu X_i (x) X_j)
    for i in range(len(dims)):
        for j in range(len(dims)):
            k1 = tuple(sorted((f"X{i}", f"X{j}t"))) + (psi.key(),)
            k2 = tuple(sorted((f"X{i}t", f"X{j}"))) + (psi.key(),)
            values[k2] = values[k1]
    twists = {}
    for i in range(len(dims)):
        twists[(f"X{i}", "mu")] = f"X{i}t"
        twists[(f"X{i}t", "mu")] = f"X{i}"
    table = EpsilonTable(ctx, CONTEXT_CONJUGATE, psi, atoms, values, twists)
    assert table.validate().ok
    m = FormalRep.of([("X0", 1)], duality)
    n = FormalRep.of([("X1", 1)], duality)
    return table, m, n, psi


@pytest.fixture
def rng():
    return random.Random(20260811)
