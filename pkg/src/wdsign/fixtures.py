"""Built-in fixture builders: unramified tables and 1-dimensional families.

unramified_table assembles a fully closed epsilon table over the atoms of an
unramified representation: every pair value is +1 at the unramified psi, the
determinants are forced, and twisting by the non-square unit class u swaps
the Frobenius eigenvalue s with -s.

quadratic_family_table builds a selfdual table over 1-dimensional orthogonal
atoms C(d) on a q = 1 mod 4 model from a sign assignment f with the
multiplicative anomaly f(a) f(b) = (a, b) f(ab); such tables are validated
and reproduce the Hilbert-symbol identity for corrected characters.
"""

from __future__ import annotations

from typing import Dict, Optional, Sequence, Tuple

from .errors import DomainError
from .field import LocalFieldModel, PsiClass, QuadraticCharacter, make_padic_odd
from .classify import UnramifiedRep, unramified_build
from .reps import (
    Atom,
    AtomSet,
    CONTEXT_CONJUGATE,
    CONTEXT_SELFDUAL,
    EpsilonTable,
    FormalRep,
    ORTHOGONAL,
)

UNRAMIFIED_PSI = PsiClass("psi")


def _negate_label(s: str) -> str:
    return s[1:] if s.startswith("-") else f"-{s}"


def _unramified_partner_ids(atom_ids: Sequence[str]) -> Dict[str, str]:
    """Image of each unramified atom under the u-twist (s -> -s)."""
    mapping = {}
    for atom_id in atom_ids:
        inner = atom_id[2:-1]  # strip "C(" and ")"
        if inner.endswith("^-1"):
            target = f"C({_negate_label(inner[:-3])}^-1)"
        else:
            target = f"C({_negate_label(inner)})"
        mapping[atom_id] = target
    return mapping


def unramified_table(
    u: UnramifiedRep,
    ctx: LocalFieldModel,
    duality: Optional[str] = None,
) -> Tuple[EpsilonTable, FormalRep]:
    """A validated table over the atoms of an unramified representation.

    All pair and self epsilon values are +1 at the unramified psi orbit.  The
    u-class twist closure is included whenever the atom set is stable under
    s -> -s (always true for the C(+-1) part).
    """
    rep, atoms = unramified_build(u, ctx, duality)
    context = CONTEXT_CONJUGATE if ctx.has_conjugation else CONTEXT_SELFDUAL
    ids = atoms.ids()
    pair_values = {}
    for i, a in enumerate(ids):
        for b in ids[i:]:
            pair_values[(a, b, UNRAMIFIED_PSI.key())] = 1
    twists = {}
    # the s -> -s twist: by the unit square class u in the selfdual context,
    # by the conjugate-symplectic atom C(-1) in the conjugate one
    twist_key = "C(-1)" if ctx.has_conjugation else "u"
    if ctx.has_conjugation or "u" in ctx.square_classes.generator_labels:
        for source, target in _unramified_partner_ids(ids).items():
            if target in atoms:
                twists[(source, twist_key)] = target
    table = EpsilonTable(ctx, context, UNRAMIFIED_PSI, atoms, pair_values, twists)
    return table, rep


def steinberg_metaplectic_table(q_mod_4: int = 1) -> Tuple[EpsilonTable, FormalRep, FormalRep]:
    """A discrete-series style selfdual fixture over a p-adic model.

    M = St, a 2-dimensional symplectic atom with eps(St) = -1 whose u-twist
    St_u has eps(St_u) = +1; N = C(1).  Twists by the unit class u close over
    {St, St_u} and {C(1), C(-1)}.  The table is validated.
    """
    ctx = make_padic_odd(q_mod_4)
    group = ctx.square_classes
    trivial = QuadraticCharacter.trivial(group)
    quad_u = group.character("u")
    psi = UNRAMIFIED_PSI
    atoms = AtomSet()
    atoms.add(Atom("St", 2, "symplectic", trivial, eps_self={psi.key(): -1}))
    atoms.add(Atom("St_u", 2, "symplectic", trivial, eps_self={psi.key(): 1}))
    atoms.add(Atom("C(1)", 1, ORTHOGONAL, trivial, eps_self={psi.key(): 1}))
    atoms.add(Atom("C(-1)", 1, ORTHOGONAL, quad_u, eps_self={psi.key(): 1}))
    pair_values = {
        ("St", "St", psi.key()): 1,
        ("St", "St_u", psi.key()): 1,
        ("St_u", "St_u", psi.key()): 1,
        # eps(St (x) chi) = -chi(pi) for unramified quadratic chi
        ("St", "C(1)", psi.key()): -1,
        ("St", "C(-1)", psi.key()): 1,
        ("St_u", "C(1)", psi.key()): 1,
        ("St_u", "C(-1)", psi.key()): -1,
        ("C(1)", "C(1)", psi.key()): 1,
        ("C(1)", "C(-1)", psi.key()): 1,
        ("C(-1)", "C(-1)", psi.key()): 1,
    }
    twists = {
        ("St", "u"): "St_u",
        ("St_u", "u"): "St",
        ("C(1)", "u"): "C(-1)",
        ("C(-1)", "u"): "C(1)",
    }
    table = EpsilonTable(ctx, CONTEXT_SELFDUAL, psi, atoms, pair_values, twists)
    M = FormalRep.of([("St", 1)], "symplectic")
    N = FormalRep.of([("C(1)", 1)], ORTHOGONAL)
    return table, M, N


def quadratic_family_table(
    f_u: int,
    f_pi: int,
    dets: Sequence[str] = ("1", "u", "pi", "u*pi"),
) -> Tuple[EpsilonTable, AtomSet]:
    """1-dimensional orthogonal atoms D(d) over the q = 1 mod 4 model, with
    epsilon data from the anomaly model f(a) f(b) = (a, b) f(ab).

    f is pinned by its values on u and pi (f(1) = +1); the atom D(d) gets
    eps_self f(d) and the pair (D(a), D(b)) the value f(a) f(b) (a, b).
    """
    if f_u not in (1, -1) or f_pi not in (1, -1):
        raise DomainError("f values must be +1 or -1")
    ctx = make_padic_odd(1)
    group = ctx.square_classes
    f_values = {
        "1": 1,
        "u": f_u,
        "pi": f_pi,
        "u*pi": -f_u * f_pi,  # f(u) f(pi) = (u, pi) f(u*pi) with (u, pi) = -1
    }
    psi = UNRAMIFIED_PSI
    atoms = AtomSet()
    for d in dets:
        cls = group.element(d)
        atoms.add(
            Atom(
                f"D({d})",
                1,
                ORTHOGONAL,
                group.character(cls),
                eps_self={psi.key(): f_values[cls.label()]},
            )
        )
    pair_values = {}
    ids = atoms.ids()
    for i, a in enumerate(ids):
        for b in ids[i:]:
            ca = atoms.get(a).det.to_class()
            cb = atoms.get(b).det.to_class()
            value = f_values[ca.label()] * f_values[cb.label()] * group.pairing(ca, cb)
            pair_values[(a, b, psi.key())] = value
    twists = {}
    for a in ids:
        ca = atoms.get(a).det.to_class()
        for c in group.elements():
            target = f"D({(ca * c).label()})"
            if target in atoms:
                twists[(a, c.label())] = target
    table = EpsilonTable(ctx, CONTEXT_SELFDUAL, psi, atoms, pair_values, twists)
    return table, atoms
