"""Epsilon-factor characters of component groups and the distinguished-character
recipes for all five restriction cases, with their psi/mu-change checks.

Conventions.  For conjugate-dual M, N the character chi_N on A_M sends a to
eps(M^a (x) N, psi0).  For selfdual M, N of even dimension the corrected
character on A_M+ is

    chi_N(a) = eps(M^a (x) N) * det(M^a)(-1)^(dim N / 2) * det(N)(-1)^(dim M^a / 2),

with every half-integer exponent validated as an integer before use.
Characters are stored by their values on the basis of the component group and
extend multiplicatively; plus-constrained characters are normalized
extensions whose restriction to A+ is the mathematically defined character.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import CaseMismatchError, DomainError
from .field import PsiClass, SquareClassElement, char_eval
from .components import (
    ComponentElement,
    ComponentGroup,
    component_group,
    eigenspace,
)
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
    ValidationReport,
    Violation,
)

CASE_ORTHOGONAL = "orthogonal-bessel"
CASE_HERMITIAN = "hermitian-bessel"
CASE_METAPLECTIC = "symplectic-metaplectic"
CASE_SKEW_ODD = "skew-hermitian-odd"
CASE_SKEW_EVEN = "skew-hermitian-even"
ALL_CASES = (
    CASE_ORTHOGONAL,
    CASE_HERMITIAN,
    CASE_METAPLECTIC,
    CASE_SKEW_ODD,
    CASE_SKEW_EVEN,
)

QUASI_SPLIT = "quasi-split"
NON_QUASI_SPLIT = "non-quasi-split"


@dataclass(frozen=True)
class CharacterOnA:
    """A character of a component group, stored by basis values."""

    domain: ComponentGroup
    values_on_basis: Tuple[int, ...]

    def __post_init__(self):
        if len(self.values_on_basis) != self.domain.rank:
            raise DomainError("character values must match the basis size")
        if any(v not in (1, -1) for v in self.values_on_basis):
            raise DomainError("character values must be +1 or -1")

    @classmethod
    def trivial(cls, domain: ComponentGroup) -> "CharacterOnA":
        return cls(domain, (1,) * domain.rank)

    def value_unchecked(self, a: ComponentElement) -> int:
        sign = 1
        for i, v in enumerate(self.values_on_basis):
            if (a.bits >> i) & 1:
                sign *= v
        return sign

    def value(self, a: ComponentElement) -> int:
        if a.group is not self.domain and not self.domain.compatible(a.group):
            raise DomainError("element belongs to a different component group")
        if not self.domain.valid(a):
            raise DomainError("element lies outside the constrained subgroup A+")
        return self.value_unchecked(a)

    def __call__(self, a: ComponentElement) -> int:
        return self.value(a)

    def __mul__(self, other: "CharacterOnA") -> "CharacterOnA":
        if other.domain is not self.domain and (
            other.domain.basis_ids() != self.domain.basis_ids()
        ):
            raise DomainError("cannot multiply characters on different groups")
        return CharacterOnA(
            self.domain,
            tuple(a * b for a, b in zip(self.values_on_basis, other.values_on_basis)),
        )

    def is_trivial(self) -> bool:
        """Trivial on the (constrained) domain; exact on the valid subgroup."""
        if not self.domain.constraint_blocks:
            return all(v == 1 for v in self.values_on_basis)
        return all(self.value_unchecked(a) == 1 for a in self.domain.valid_elements())

    def equals_on_valid(self, other: "CharacterOnA") -> bool:
        if self.domain.basis_ids() != other.domain.basis_ids():
            return False
        return all(
            self.value_unchecked(a) == other.value_unchecked(a)
            for a in self.domain.valid_elements()
        )

    def render(self) -> str:
        return "[" + ", ".join("+1" if v == 1 else "-1" for v in self.values_on_basis) + "]"

    def __repr__(self) -> str:
        return f"CharacterOnA({self.render()} on {list(self.domain.basis_ids())})"


@dataclass(frozen=True)
class CaseDescriptor:
    """Which restriction case is being computed, with its auxiliary data."""

    kind: str
    psi: Optional[PsiClass] = None
    psi0: Optional[PsiClass] = None
    mu: Optional[str] = None
    discriminant_data: Optional[str] = None
    trivial_atom: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ALL_CASES:
            raise DomainError(f"unknown case {self.kind!r}")
        needs_psi0 = self.kind in (CASE_HERMITIAN, CASE_SKEW_ODD)
        if needs_psi0 != (self.psi0 is not None):
            raise DomainError(
                "psi0 is required exactly in the hermitian and odd skew-hermitian cases"
            )
        needs_mu = self.kind in (CASE_SKEW_ODD, CASE_SKEW_EVEN)
        if needs_mu != (self.mu is not None):
            raise DomainError("mu is required exactly in the skew-hermitian cases")
        if self.trivial_atom is not None and self.kind != CASE_METAPLECTIC:
            raise DomainError("trivial_atom only applies to the metaplectic case")


def _single(atom_id: str, duality: Optional[str]) -> FormalRep:
    return FormalRep.of([(atom_id, 1)], duality)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise CaseMismatchError(message)


def chi_conj(
    M: FormalRep, N: FormalRep, psi0: PsiClass, table: EpsilonTable
) -> CharacterOnA:
    """chi_N(a) = eps(M^a (x) N, psi0) on the full component group A_M.

    When the duality signs satisfy b(M) b(N) = +1 every tensor involved is
    conjugate-orthogonal and the character is trivial (axiom A3 makes this
    automatic for validated tables).
    """
    if table.context != CONTEXT_CONJUGATE:
        raise DomainError("chi_conj needs a conjugate-context table")
    M.require_duality()
    N.require_duality()
    group = component_group(M, table.atoms)
    values = tuple(
        table.epsilon(_single(rec.atom_id, M.declared_duality), N, psi0)
        for rec in group.records
    )
    return CharacterOnA(group, values)


def chi_conj_at(
    M: FormalRep,
    N: FormalRep,
    a: ComponentElement,
    psi0: PsiClass,
    table: EpsilonTable,
) -> int:
    """Direct evaluation eps(M^a (x) N, psi0) at an arbitrary element."""
    return table.epsilon(eigenspace(M, table.atoms, a), N, psi0)


def _chi_self_from_eigen(
    eigen: FormalRep, other: FormalRep, table: EpsilonTable, psi: PsiClass
) -> int:
    """eps(E (x) N) . det(E)(-1)^(dim N/2) . det(N)(-1)^(dim E/2) for E = M^a."""
    atoms = table.atoms
    dim_e = eigen.dim(atoms)
    dim_o = other.dim(atoms)
    if dim_e % 2 != 0 or dim_o % 2 != 0:
        raise DomainError("half-integral exponent: dimensions here must be even")
    minus_one = table.field.square_classes.minus_one
    value = table.epsilon(eigen, other, psi)
    if eigen.summands and (dim_o // 2) % 2 == 1:
        value *= char_eval(eigen.det(atoms), minus_one)
    if other.summands and (dim_e // 2) % 2 == 1:
        value *= char_eval(other.det(atoms), minus_one)
    return value


def _plus_extension(group: ComponentGroup, direct) -> Tuple[int, ...]:
    """Basis values of an extension to A of a character defined on A+.

    Even-dimensional basis elements are evaluated directly; odd ones are
    paired against the first odd index, whose value is normalized to +1.
    The restriction of the extension to A+ is exactly the given character.
    """
    odd = [i for i, r in enumerate(group.records) if r.dim % 2 == 1]
    anchor = odd[0] if odd else None
    values = []
    for i, rec in enumerate(group.records):
        if rec.dim % 2 == 0:
            values.append(direct(group.element(1 << i)))
        elif i == anchor:
            values.append(1)
        else:
            values.append(direct(group.element((1 << anchor) | (1 << i))))
    return tuple(values)


def chi_self(
    M: FormalRep,
    N: FormalRep,
    table: EpsilonTable,
    psi: Optional[PsiClass] = None,
) -> CharacterOnA:
    """The corrected selfdual character on A_M+ (even dimensions only).

    The returned values are a normalized extension to the ambient basis;
    evaluation is restricted to A+.  The value is independent of psi.
    """
    if table.context != CONTEXT_SELFDUAL:
        raise DomainError("chi_self needs a selfdual-context table")
    M.require_duality()
    N.require_duality()
    atoms = table.atoms
    if M.dim(atoms) % 2 != 0 or N.dim(atoms) % 2 != 0:
        raise DomainError("chi_self is defined for even-dimensional selfdual pairs")
    psi = psi or table.base_psi
    group = component_group(M, atoms, use_plus=True)

    def direct(a: ComponentElement) -> int:
        return _chi_self_from_eigen(eigenspace(M, atoms, a), N, table, psi)

    return CharacterOnA(group, _plus_extension(group, direct))


def chi_self_at(
    M: FormalRep,
    N: FormalRep,
    a: ComponentElement,
    table: EpsilonTable,
    psi: Optional[PsiClass] = None,
) -> int:
    """Direct evaluation of the corrected selfdual character at a in A_M+."""
    if not a.group.valid(a):
        raise DomainError("element lies outside A+")
    psi = psi or table.base_psi
    return _chi_self_from_eigen(eigenspace(M, table.atoms, a), N, table, psi)


def hilbert_pairing_character(
    M: FormalRep, N: FormalRep, table: EpsilonTable
) -> CharacterOnA:
    """a -> (det M^a, det N), the Hilbert-symbol character on A_M+."""
    atoms = table.atoms
    group = component_group(M, atoms, use_plus=True)
    det_n = N.det(atoms).to_class()

    def direct(a: ComponentElement) -> int:
        eigen = eigenspace(M, atoms, a)
        if not eigen.summands:
            return 1
        return table.field.square_classes.pairing(eigen.det(atoms).to_class(), det_n)

    return CharacterOnA(group, _plus_extension(group, direct))


def find_trivial_atom(atoms: AtomSet, hint: Optional[str] = None) -> Atom:
    """The unit atom used to form N1 = N (+) C in the metaplectic recipe."""
    if hint is not None:
        atom = atoms.get(hint)
        if atom.dim != 1 or atom.duality != ORTHOGONAL or not atom.det.is_trivial:
            raise DomainError(f"designated trivial atom {hint!r} is not trivial")
        return atom
    candidates = [
        atom
        for atom in atoms
        if atom.dim == 1 and atom.duality == ORTHOGONAL and atom.det.is_trivial
    ]
    if len(candidates) != 1:
        raise DomainError(
            "cannot identify a unique trivial atom; declare one on the case"
        )
    return candidates[0]


def _product_character(
    first: CharacterOnA, second: CharacterOnA
) -> CharacterOnA:
    domain = first.domain.product(second.domain)
    return CharacterOnA(domain, first.values_on_basis + second.values_on_basis)


def _restrict_to_subbasis(
    char: CharacterOnA, group: ComponentGroup, id_map
) -> CharacterOnA:
    """Restrict a character along an inclusion of component groups.

    id_map sends each basis id of `group` to a basis id of char's domain.
    """
    source_ids = char.domain.basis_ids()
    values = []
    for rec in group.records:
        target = id_map(rec.atom_id)
        if target not in source_ids:
            raise DomainError(f"basis id {target!r} missing from the larger group")
        values.append(char.values_on_basis[source_ids.index(target)])
    return CharacterOnA(group, tuple(values))


def distinguished(
    case: CaseDescriptor,
    M: FormalRep,
    N: FormalRep,
    table: EpsilonTable,
) -> CharacterOnA:
    """The distinguished character of the packet, per restriction case.

    orthogonal:        chi = chi_N x chi_M           on A_M  x A_N+
    hermitian:         chi = chi_N x chi_M           on A_M  x A_N
    metaplectic:       chi = chi_N1 x chi_M, N1 = N (+) C, restricted to
                       A_M x A_N+ inside A_M x A_N1+
    skew-hermitian:    chi = chi_N x chi_M(mu^-1) = chi_N(mu^-1) x chi_M
                       on A_M x A_N (both orderings computed and compared)
    """
    atoms = table.atoms
    kind = case.kind

    if kind == CASE_ORTHOGONAL:
        _require(table.context == CONTEXT_SELFDUAL, "orthogonal case needs a selfdual table")
        _require(M.declared_duality == SYMPLECTIC, "M must be symplectic")
        _require(N.declared_duality == ORTHOGONAL, "N must be orthogonal")
        _require(N.dim(atoms) % 2 == 0, "N must have even dimension")
        return _product_character(chi_self(M, N, table), chi_self(N, M, table))

    if kind == CASE_HERMITIAN:
        _require(table.context == CONTEXT_CONJUGATE, "hermitian case needs a conjugate table")
        _require(M.declared_duality == CONJUGATE_SYMPLECTIC, "M must be conjugate-symplectic")
        _require(N.declared_duality == CONJUGATE_ORTHOGONAL, "N must be conjugate-orthogonal")
        _require(M.dim(atoms) % 2 == 0, "M must have even dimension")
        _require(N.dim(atoms) % 2 == 1, "N must have odd dimension")
        psi0 = case.psi0
        return _product_character(
            chi_conj(M, N, psi0, table), chi_conj(N, M, psi0, table)
        )

    if kind == CASE_METAPLECTIC:
        _require(table.context == CONTEXT_SELFDUAL, "metaplectic case needs a selfdual table")
        _require(M.declared_duality == SYMPLECTIC, "M must be symplectic")
        _require(N.declared_duality == ORTHOGONAL, "N must be orthogonal")
        _require(N.dim(atoms) % 2 == 1, "N must have odd dimension")
        _require(N.det(atoms).is_trivial, "N must have trivial determinant")
        unit = find_trivial_atom(atoms, case.trivial_atom)
        n1 = N.direct_sum(_single(unit.id, ORTHOGONAL))
        chi_n1 = chi_self(M, n1, table)
        chi_m_on_n1 = chi_self(n1, M, table)
        restricted = _restrict_to_subbasis(
            chi_m_on_n1, component_group(N, atoms, use_plus=True), lambda i: i
        )
        return _product_character(chi_n1, restricted)

    if kind in (CASE_SKEW_ODD, CASE_SKEW_EVEN):
        _require(table.context == CONTEXT_CONJUGATE, "skew-hermitian cases need a conjugate table")
        if kind == CASE_SKEW_ODD:
            want = CONJUGATE_ORTHOGONAL
            parity = 1
        else:
            want = CONJUGATE_SYMPLECTIC
            parity = 0
        _require(
            M.declared_duality == want and N.declared_duality == want,
            f"M and N must both be {want}",
        )
        _require(
            M.dim(atoms) % 2 == parity and N.dim(atoms) % 2 == parity,
            "dimensions do not match the declared skew-hermitian case",
        )
        mu = atoms.get(case.mu)
        if mu.dim != 1 or mu.duality != CONJUGATE_SYMPLECTIC:
            raise DomainError("mu must be a 1-dimensional conjugate-symplectic atom")
        psi0 = case.psi0 or table.base_psi
        psi_list = [psi0]
        if kind == CASE_SKEW_EVEN:
            # even case: the value must not depend on the psi0 orbit chosen
            psi_list.append(psi0.translate(table.field.norm_translate()))
        m_twist = table.twist(M, mu)
        n_twist = table.twist(N, mu)

        def basis_value(rec_id: str, fixed: FormalRep, fixed_twist: FormalRep) -> int:
            # both orderings of the mu-twisted recipe, at every admissible psi0
            twisted = table.twist_atom(rec_id, mu)
            twisted_rep = _single(twisted, atoms.get(twisted).duality)
            candidates = []
            for p in psi_list:
                candidates.append(table.epsilon(_single(rec_id, want), fixed_twist, p))
                candidates.append(table.epsilon(twisted_rep, fixed, p))
            if len(set(candidates)) != 1:
                raise DomainError(
                    "table is inconsistent: the two skew-hermitian orderings "
                    f"differ at {rec_id!r}"
                )
            return candidates[0]

        values_m = [
            basis_value(rec.atom_id, N, n_twist)
            for rec in component_group(M, atoms).records
        ]
        values_n = [
            basis_value(rec.atom_id, M, m_twist)
            for rec in component_group(N, atoms).records
        ]
        domain = component_group(M, atoms).product(component_group(N, atoms))
        return CharacterOnA(domain, tuple(values_m) + tuple(values_n))

    raise DomainError(f"unknown case {kind!r}")  # pragma: no cover


def pure_inner_form_of(chi: CharacterOnA) -> str:
    """Quasi-split iff chi(-1) = +1, with -1 the sum of odd-dimensional basis
    elements (the image of the central involution); non-archimedean rule."""
    minus = chi.domain.minus_one()
    return QUASI_SPLIT if chi.value_unchecked(minus) == 1 else NON_QUASI_SPLIT


def hermitian_psi_change_check(
    M: FormalRep,
    N: FormalRep,
    psi0: PsiClass,
    table: EpsilonTable,
    t: Optional[SquareClassElement] = None,
) -> ValidationReport:
    """Check chi^t(a, b) = eta(a) . chi(a, b) over all of A_M x A_N.

    chi is the hermitian distinguished character computed with psi0, chi^t
    the one computed with the translated orbit psi0^t.  Empty report means
    the table is consistent with the psi0-change law.
    """
    atoms = table.atoms
    _require(table.context == CONTEXT_CONJUGATE, "hermitian check needs a conjugate table")
    _require(M.declared_duality == CONJUGATE_SYMPLECTIC, "M must be conjugate-symplectic")
    _require(N.declared_duality == CONJUGATE_ORTHOGONAL, "N must be conjugate-orthogonal")
    _require(M.dim(atoms) % 2 == 0, "M must have even dimension")
    _require(N.dim(atoms) % 2 == 1, "N must have odd dimension")
    if t is None:
        t = table.field.norm_translate()
    psi0_t = psi0.translate(t)
    group_m = component_group(M, atoms)
    group_n = component_group(N, atoms)
    violations = []
    for a in group_m.elements():
        eta_a = group_m.eta(a)
        for b in group_n.elements():
            base = chi_conj_at(M, N, a, psi0, table) * chi_conj_at(N, M, b, psi0, table)
            translated = chi_conj_at(M, N, a, psi0_t, table) * chi_conj_at(
                N, M, b, psi0_t, table
            )
            if translated != eta_a * base:
                violations.append(
                    Violation(
                        "psi-change",
                        f"(a, b) = ({a.render()}, {b.render()})",
                        f"chi^t = {translated}, eta(a) . chi = {eta_a * base}",
                    )
                )
    return ValidationReport(violations)


def metaplectic_eta_bracket(
    M: FormalRep, c: SquareClassElement, table: EpsilonTable
) -> CharacterOnA:
    """eta[c](a) = eps(M^a) . eps(M(c)^a) . (c, -1)^(dim M^a / 2) on A_M."""
    atoms = table.atoms
    if table.context != CONTEXT_SELFDUAL:
        raise DomainError("the eta bracket needs a selfdual-context table")
    if M.declared_duality != SYMPLECTIC:
        raise DomainError("the eta bracket is defined for symplectic parameters")
    group = component_group(M, atoms)
    pairing_sign = table.field.square_classes.pairing(
        c, table.field.square_classes.minus_one
    )
    psi = table.base_psi
    values = []
    for rec in group.records:
        if rec.dim % 2 != 0:
            raise DomainError("half-integral exponent: symplectic summands must be even")
        value = table.eps_self_value(rec.atom_id, psi)
        value *= table.eps_self_value(table.twist_atom(rec.atom_id, c), psi)
        if (rec.dim // 2) % 2 == 1:
            value *= pairing_sign
        values.append(value)
    return CharacterOnA(group, tuple(values))


def metaplectic_eta_bracket_at(
    M: FormalRep, c: SquareClassElement, a: ComponentElement, table: EpsilonTable
) -> int:
    """Direct evaluation of eta[c] at an arbitrary component element."""
    atoms = table.atoms
    eigen = eigenspace(M, atoms, a)
    twisted = table.twist(eigen, c)
    dim_eigen = eigen.dim(atoms)
    if dim_eigen % 2 != 0:
        raise DomainError("half-integral exponent: dim M^a must be even")
    value = table.epsilon_rep(eigen, table.base_psi)
    value *= table.epsilon_rep(twisted, table.base_psi)
    if (dim_eigen // 2) % 2 == 1:
        value *= table.field.square_classes.pairing(
            c, table.field.square_classes.minus_one
        )
    return value


def metaplectic_conjugate(
    M: FormalRep,
    chi: CharacterOnA,
    c: SquareClassElement,
    table: EpsilonTable,
) -> Tuple[FormalRep, CharacterOnA]:
    """The conjugated parameter (M(c), chi . eta[c]); A_M(c) is identified
    with A_M through the twist."""
    group = component_group(M, table.atoms)
    if chi.domain.basis_ids() != group.basis_ids():
        raise DomainError("character domain does not match A_M")
    bracket = metaplectic_eta_bracket(M, c, table)
    twisted_rep = table.twist(M, c)
    twisted_group = component_group(twisted_rep, table.atoms)
    values = tuple(
        v * w for v, w in zip(chi.values_on_basis, bracket.values_on_basis)
    )
    return twisted_rep, CharacterOnA(twisted_group, values)


def metaplectic_psi_prop_check(
    M: FormalRep,
    N: FormalRep,
    c: SquareClassElement,
    table: EpsilonTable,
    psi: Optional[PsiClass] = None,
    trivial_atom: Optional[str] = None,
) -> ValidationReport:
    """Check (chi_Nc . eta[c]) x chi_M = chi_N1 x chi_M(c) on A_M x A_N+.

    Here N1 = N (+) C and Nc = N(c) (+) C.  Empty report means the table's
    pair values, self values and twists are mutually consistent with the
    psi-change law for the metaplectic case.
    """
    atoms = table.atoms
    _require(table.context == CONTEXT_SELFDUAL, "metaplectic check needs a selfdual table")
    _require(M.declared_duality == SYMPLECTIC, "M must be symplectic")
    _require(N.declared_duality == ORTHOGONAL, "N must be orthogonal")
    _require(N.dim(atoms) % 2 == 1, "N must have odd dimension")
    psi = psi or table.base_psi
    unit = find_trivial_atom(atoms, trivial_atom)
    unit_rep = _single(unit.id, ORTHOGONAL)
    n1 = N.direct_sum(unit_rep)
    nc = table.twist(N, c).direct_sum(unit_rep)
    m_c = table.twist(M, c)
    group_m = component_group(M, atoms)
    group_n_plus = component_group(N, atoms, use_plus=True)
    violations = []
    for a_m in group_m.elements():
        eigen_m = eigenspace(M, atoms, a_m)
        eigen_m_c = table.twist(eigen_m, c)
        lhs_m = _chi_self_from_eigen(eigen_m, nc, table, psi)
        lhs_m *= metaplectic_eta_bracket_at(M, c, a_m, table)
        rhs_m = _chi_self_from_eigen(eigen_m_c, n1, table, psi)
        for a_n in group_n_plus.valid_elements():
            eigen_n = eigenspace(N, atoms, a_n)
            lhs_n = _chi_self_from_eigen(table.twist(eigen_n, c), M, table, psi)
            rhs_n = _chi_self_from_eigen(eigen_n, m_c, table, psi)
            if lhs_m * lhs_n != rhs_m * rhs_n:
                violations.append(
                    Violation(
                        "metaplectic-psi",
                        f"(a', a) = ({a_m.render()}, {a_n.render()})",
                        f"lhs = {lhs_m * lhs_n}, rhs = {rhs_m * rhs_n}",
                    )
                )
    return ValidationReport(violations)
