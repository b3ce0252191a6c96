"""Classification of formal representations as classical-group parameters.

The classification table: a selfdual or conjugate-dual representation M is a
parameter of

    Sp(V),  dim V = 2n:    M orthogonal,           dim M = 2n+1, det M = 1
    SO(V),  dim V = 2n+1:  M symplectic,           dim M = 2n
    SO(V),  dim V = 2n:    M orthogonal,           dim M = 2n,   det M = disc V
    U(V),   dim V = 2n+1:  M conjugate-orthogonal, dim M = 2n+1
    U(V),   dim V = 2n:    M conjugate-symplectic, dim M = 2n

The metaplectic group shares the symplectic-M row with odd SO and is selected
by an explicit caller flag.  Split involutions classify as GL with singleton
packets.  The unramified builders produce sums of C(s), C(s^-1), C(-1), C(1)
with their forced determinants and unramified epsilon values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import ClassificationError, DomainError
from .field import LocalFieldModel, QuadraticCharacter
from .components import ComponentGroup, component_group
from .reps import (
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
    duality_context,
)

FAMILY_SP = "Sp"
FAMILY_SO_ODD = "SO-odd"
FAMILY_SO_EVEN = "SO-even"
FAMILY_U_ODD = "U-odd"
FAMILY_U_EVEN = "U-even"
FAMILY_METAPLECTIC = "Mp"
FAMILY_GL = "GL"


@dataclass(frozen=True)
class GroupCase:
    family: str
    dim_v: int
    disc: Optional[QuadraticCharacter] = None
    ambiguous: bool = False
    singleton_packets: bool = False

    def render(self) -> str:
        name = {
            FAMILY_SP: "Sp",
            FAMILY_SO_ODD: "SO",
            FAMILY_SO_EVEN: "SO",
            FAMILY_U_ODD: "U",
            FAMILY_U_EVEN: "U",
            FAMILY_METAPLECTIC: "Mp",
            FAMILY_GL: "GL",
        }[self.family]
        return f"{name}({self.dim_v})"


def classify(
    M: FormalRep,
    ctx: LocalFieldModel,
    atoms: AtomSet,
    metaplectic: bool = False,
    expected_disc: Optional[str] = None,
) -> GroupCase:
    """The classical group whose parameters are representations shaped like M.

    expected_disc, when given, is a square-class label checked against det M
    in the even special orthogonal case (det M = disc V).
    """
    if ctx.singleton_packets:
        return GroupCase(FAMILY_GL, M.dim(atoms), singleton_packets=True)
    duality = M.require_duality()
    M.validate(atoms)
    if duality_context(duality) == CONTEXT_CONJUGATE and not ctx.has_conjugation:
        raise ClassificationError(
            "conjugate-dual parameters need a quadratic field involution"
        )
    if duality_context(duality) == CONTEXT_SELFDUAL and ctx.has_conjugation:
        raise ClassificationError(
            "selfdual parameters classify over the field itself, not a quadratic extension"
        )
    dim = M.dim(atoms)
    if duality == SYMPLECTIC:
        if metaplectic:
            return GroupCase(FAMILY_METAPLECTIC, dim)
        return GroupCase(FAMILY_SO_ODD, dim + 1)
    if metaplectic:
        raise ClassificationError("metaplectic parameters must be symplectic")
    if duality == ORTHOGONAL:
        det = M.det(atoms)
        if dim % 2 == 1:
            if not det.is_trivial:
                raise ClassificationError(
                    "odd orthogonal parameters must have trivial determinant"
                )
            return GroupCase(FAMILY_SP, dim - 1)
        if expected_disc is not None:
            wanted = ctx.square_classes.character(ctx.square_classes.element(expected_disc))
            if det.gen_values != wanted.gen_values:
                raise ClassificationError(
                    f"det M is the class {det.to_class().label()!r}, "
                    f"not the declared discriminant {expected_disc!r}"
                )
        return GroupCase(
            FAMILY_SO_EVEN, dim, disc=det, ambiguous=ambiguity_flag(M, atoms)
        )
    if duality == CONJUGATE_ORTHOGONAL:
        if dim % 2 == 0:
            raise ClassificationError(
                "conjugate-orthogonal parameters of even dimension match no unitary group"
            )
        return GroupCase(FAMILY_U_ODD, dim)
    if duality == CONJUGATE_SYMPLECTIC:
        if dim % 2 == 1:
            raise ClassificationError(
                "conjugate-symplectic parameters of odd dimension match no unitary group"
            )
        return GroupCase(FAMILY_U_EVEN, dim)
    raise ClassificationError(f"no classification row matches {duality!r}")


def ambiguity_flag(M: FormalRep, atoms: AtomSet) -> bool:
    """True iff every same-type orthogonal summand has even dimension, in
    which case two parameters {phi, phi*} share the representation M."""
    if M.declared_duality != ORTHOGONAL:
        raise DomainError("the ambiguity flag applies to orthogonal representations")
    return all(atoms.get(a).dim % 2 == 0 for a in M.same_type_ids(atoms))


def central_sign(M: FormalRep, case: GroupCase, table: EpsilonTable) -> int:
    """The sign by which the central element -1 acts, from root numbers.

    Sp case: eps(M).  Even SO case: eps(M, psi) / eps(det M, psi), with the
    epsilon of a trivial determinant normalized to +1.
    """
    atoms = table.atoms
    psi = table.base_psi
    if case.family == FAMILY_SP:
        return table.epsilon_rep(M, psi)
    if case.family == FAMILY_SO_EVEN:
        value = table.epsilon_rep(M, psi)
        det = M.det(atoms)
        if det.is_trivial:
            return value
        det_atoms = [
            atom
            for atom in atoms
            if atom.dim == 1
            and atom.duality == ORTHOGONAL
            and atom.det.gen_values == det.gen_values
        ]
        if not det_atoms:
            raise DomainError(
                "no 1-dimensional atom realizes det M; cannot evaluate eps(det M)"
            )
        return value * table.eps_self_value(det_atoms[0].id, psi)
    raise DomainError(f"central sign is defined for Sp and even SO, not {case.family}")


@dataclass(frozen=True)
class UnramifiedRep:
    """Frobenius data of an unramified (conjugate-)selfdual representation:
    pairs C(s) + C(s^-1) with s != s^-1, plus m.C(-1) and n.C(1)."""

    pairs: Tuple[str, ...]
    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise DomainError("multiplicities m, n must be non-negative")
        if len(set(self.pairs)) != len(self.pairs):
            raise DomainError("Frobenius labels must be distinct")

    @property
    def dim(self) -> int:
        return 2 * len(self.pairs) + self.m + self.n


def _unramified_atoms(u: UnramifiedRep, ctx: LocalFieldModel) -> AtomSet:
    group = ctx.square_classes
    trivial = QuadraticCharacter.trivial(group)
    # C(-1) is the unramified quadratic character, nontrivial on k0* in the
    # conjugate case; its square class is u for the built-in p-adic models.
    if "u" not in group.generator_labels:
        raise DomainError(
            "unramified data needs a non-archimedean model with a non-square "
            "unit class u"
        )
    quad = group.character("u")
    conjugate = ctx.has_conjugation
    atoms = AtomSet()
    unramified_eps = {("psi", 0): 1}
    atoms.add(
        Atom(
            "C(1)",
            1,
            CONJUGATE_ORTHOGONAL if conjugate else ORTHOGONAL,
            QuadraticCharacter(group, trivial.gen_values, False if conjugate else None),
            eps_self=dict(unramified_eps),
        )
    )
    atoms.add(
        Atom(
            "C(-1)",
            1,
            CONJUGATE_SYMPLECTIC if conjugate else ORTHOGONAL,
            QuadraticCharacter(group, quad.gen_values, True if conjugate else None),
            eps_self=dict(unramified_eps),
        )
    )
    for s in u.pairs:
        det = QuadraticCharacter.trivial(group, False if conjugate else None)
        atoms.add(Atom(f"C({s})", 1, None, det, dual_partner=f"C({s}^-1)"))
        atoms.add(Atom(f"C({s}^-1)", 1, None, det, dual_partner=f"C({s})"))
    return atoms


def unramified_duality_options(u: UnramifiedRep, ctx: LocalFieldModel) -> Tuple[str, ...]:
    if ctx.has_conjugation:
        options = []
        if u.m % 2 == 0:
            options.append(CONJUGATE_ORTHOGONAL)
        if u.n % 2 == 0:
            options.append(CONJUGATE_SYMPLECTIC)
        return tuple(options)
    options = [ORTHOGONAL]
    if u.m % 2 == 0 and u.n % 2 == 0:
        options.append(SYMPLECTIC)
    return tuple(options)


def unramified_build(
    u: UnramifiedRep,
    ctx: LocalFieldModel,
    duality: Optional[str] = None,
) -> Tuple[FormalRep, AtomSet]:
    """The formal representation of the unramified data, with its atoms.

    Atoms carry the forced determinants (trivial for C(1) and the pairs, the
    unramified quadratic character for C(-1)) and unramified self epsilon +1.
    """
    options = unramified_duality_options(u, ctx)
    if duality is None:
        if not options:
            raise DomainError(
                "no selfdual or conjugate-dual structure exists for this data"
            )
        duality = options[0]
    elif duality not in options:
        raise DomainError(
            f"duality {duality!r} is not admissible here (options: {options})"
        )
    atoms = _unramified_atoms(u, ctx)
    summands: List[Tuple[str, int]] = []
    for s in u.pairs:
        summands.append((f"C({s})", 1))
        summands.append((f"C({s}^-1)", 1))
    if u.m:
        summands.append(("C(-1)", u.m))
    if u.n:
        summands.append(("C(1)", u.n))
    rep = FormalRep.of(summands, duality)
    rep.validate(atoms)
    return rep, atoms


def unramified_classify(
    u: UnramifiedRep, ctx: LocalFieldModel
) -> List[Tuple[str, ComponentGroup]]:
    """All admissible dualities with their component groups.

    Orthogonal data uses A+ (the centralizer taken in SO(M)); conjugate data
    uses the full component group.
    """
    results: List[Tuple[str, ComponentGroup]] = []
    for duality in unramified_duality_options(u, ctx):
        rep, atoms = unramified_build(u, ctx, duality)
        use_plus = duality == ORTHOGONAL
        results.append((duality, component_group(rep, atoms, use_plus=use_plus)))
    return results
