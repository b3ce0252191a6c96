"""Formal Weil-Deligne representations and the epsilon-factor axiom system.

Atoms are opaque irreducible representations carrying dimension, duality
type, determinant character and optional self epsilon values.  Formal
representations are multisets of atoms with a declared duality sign.
Epsilon factors are *data with axioms*: pair values live in a table that is
validated against the sign laws the theory proves (psi-translate rule,
duality rule, conjugate-orthogonal positivity, hyperbolic pairs, squares).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .errors import DomainError, IncompleteTableError
from .field import (
    LocalFieldModel,
    PsiClass,
    QuadraticCharacter,
    SquareClassElement,
    char_eval,
)

ORTHOGONAL = "orthogonal"
SYMPLECTIC = "symplectic"
CONJUGATE_ORTHOGONAL = "conjugate-orthogonal"
CONJUGATE_SYMPLECTIC = "conjugate-symplectic"

SELFDUAL_DUALITIES = (ORTHOGONAL, SYMPLECTIC)
CONJUGATE_DUALITIES = (CONJUGATE_ORTHOGONAL, CONJUGATE_SYMPLECTIC)
ALL_DUALITIES = SELFDUAL_DUALITIES + CONJUGATE_DUALITIES

CONTEXT_SELFDUAL = "selfdual"
CONTEXT_CONJUGATE = "conjugate"


def duality_sign(duality: str) -> int:
    """+1 for (conjugate-)orthogonal, -1 for (conjugate-)symplectic."""
    if duality in (ORTHOGONAL, CONJUGATE_ORTHOGONAL):
        return 1
    if duality in (SYMPLECTIC, CONJUGATE_SYMPLECTIC):
        return -1
    raise DomainError(f"not a duality type: {duality!r}")


def is_conjugate_duality(duality: str) -> bool:
    return duality in CONJUGATE_DUALITIES


def duality_context(duality: str) -> str:
    return CONTEXT_CONJUGATE if is_conjugate_duality(duality) else CONTEXT_SELFDUAL


def flip_duality(duality: str) -> str:
    return {
        ORTHOGONAL: SYMPLECTIC,
        SYMPLECTIC: ORTHOGONAL,
        CONJUGATE_ORTHOGONAL: CONJUGATE_SYMPLECTIC,
        CONJUGATE_SYMPLECTIC: CONJUGATE_ORTHOGONAL,
    }[duality]


def tensor_sign(b1: int, b2: int) -> int:
    """Sign of a tensor product of (conjugate-)selfdual representations."""
    if b1 not in (1, -1) or b2 not in (1, -1):
        raise DomainError("signs must be +1 or -1")
    return b1 * b2


def induce_sign(b: int) -> int:
    """Induction from k to k0 preserves the duality sign."""
    if b not in (1, -1):
        raise DomainError("signs must be +1 or -1")
    return b


def one_dim_conj_type(chi: QuadraticCharacter) -> str:
    """Duality type of a 1-dimensional conjugate-dual character.

    Conjugate-orthogonal iff the character is trivial on k0*, else
    conjugate-symplectic.
    """
    if chi.restriction_nontrivial is None:
        raise DomainError("character carries no restriction data for k0*")
    return CONJUGATE_SYMPLECTIC if chi.restriction_nontrivial else CONJUGATE_ORTHOGONAL


class Atom:
    """An opaque irreducible representation.

    Compared by id only.  duality is None exactly when the atom is not
    (conjugate-)selfdual, in which case dual_partner names the distinct atom
    representing its dual.
    """

    def __init__(
        self,
        id: str,
        dim: int,
        duality: Optional[str],
        det: QuadraticCharacter,
        dual_partner: Optional[str] = None,
        eps_self: Optional[Mapping[Tuple[str, int], int]] = None,
    ):
        if dim <= 0:
            raise DomainError("atom dimension must be positive")
        if duality is not None and duality not in ALL_DUALITIES:
            raise DomainError(f"unknown duality {duality!r}")
        if (duality is None) == (dual_partner is None):
            raise DomainError(
                "exactly one of duality / dual_partner must be given"
            )
        if dual_partner is not None and dual_partner == id:
            raise DomainError("dual partner must be a distinct atom")
        if duality == SYMPLECTIC:
            if dim % 2 != 0:
                raise DomainError("symplectic atoms have even dimension")
            if not det.is_trivial:
                raise DomainError("symplectic atoms have trivial determinant")
        if duality in CONJUGATE_DUALITIES:
            # det of a conjugate-dual rep of sign b has sign b^dim, so its
            # restriction bit is forced; fill it in or check it.
            forced = duality == CONJUGATE_SYMPLECTIC and dim % 2 == 1
            if det.restriction_nontrivial is None:
                det = QuadraticCharacter(det.group, det.gen_values, forced)
            elif det.restriction_nontrivial != forced:
                raise DomainError(
                    f"atom {id!r}: determinant restriction bit contradicts its duality"
                )
            if dim == 1 and duality != one_dim_conj_type(det):
                raise DomainError(
                    f"atom {id!r}: 1-dimensional conjugate duality must match "
                    "the determinant's restriction to k0*"
                )
        self.id = id
        self.dim = dim
        self.duality = duality
        self.det = det
        self.dual_partner = dual_partner
        self.eps_self: Dict[Tuple[str, int], int] = dict(eps_self or {})
        for value in self.eps_self.values():
            if value not in (1, -1):
                raise DomainError("eps_self values must be +1 or -1")

    @property
    def is_selfdual_type(self) -> bool:
        return self.duality is not None

    def sign(self) -> int:
        if self.duality is None:
            raise DomainError(f"atom {self.id!r} is not selfdual or conjugate-dual")
        return duality_sign(self.duality)

    def __eq__(self, other) -> bool:
        return isinstance(other, Atom) and other.id == self.id

    def __hash__(self) -> int:
        return hash(self.id)

    def __repr__(self) -> str:
        kind = self.duality or f"dual of {self.dual_partner}"
        return f"Atom({self.id!r}, dim={self.dim}, {kind})"


class AtomSet:
    """An ordered registry of atoms; declaration order is preserved."""

    def __init__(self, atoms: Iterable[Atom] = ()):
        self._atoms: Dict[str, Atom] = {}
        for atom in atoms:
            self.add(atom)

    def add(self, atom: Atom) -> Atom:
        if atom.id in self._atoms:
            raise DomainError(f"duplicate atom id {atom.id!r}")
        self._atoms[atom.id] = atom
        return atom

    def __contains__(self, atom_id: str) -> bool:
        return atom_id in self._atoms

    def __iter__(self):
        return iter(self._atoms.values())

    def __len__(self) -> int:
        return len(self._atoms)

    def get(self, atom_id: str) -> Atom:
        try:
            return self._atoms[atom_id]
        except KeyError:
            raise DomainError(f"unknown atom {atom_id!r}") from None

    def ids(self) -> Tuple[str, ...]:
        return tuple(self._atoms)

    def partner(self, atom: Atom) -> Atom:
        if atom.dual_partner is None:
            return atom
        partner = self.get(atom.dual_partner)
        if partner.dim != atom.dim:
            raise DomainError(
                f"dual partners {atom.id!r}/{partner.id!r} have unequal dimensions"
            )
        return partner

    def validate_partners(self) -> None:
        for atom in self:
            if atom.dual_partner is not None:
                partner = self.partner(atom)
                if partner.dual_partner not in (None, atom.id):
                    raise DomainError(
                        f"atom {atom.id!r} has non-reciprocal dual partner"
                    )


@dataclass(frozen=True)
class FormalRep:
    """A multiset of atoms with an optional declared duality sign."""

    summands: Tuple[Tuple[str, int], ...]
    declared_duality: Optional[str] = None

    @classmethod
    def of(
        cls,
        summands: Iterable[Tuple[str, int] | str],
        duality: Optional[str] = None,
    ) -> "FormalRep":
        merged: Dict[str, int] = {}
        for entry in summands:
            if isinstance(entry, str):
                atom_id, mult = entry, 1
            else:
                atom_id, mult = entry
            if mult < 0:
                raise DomainError("multiplicities must be non-negative")
            merged[atom_id] = merged.get(atom_id, 0) + mult
        cleaned = tuple((a, m) for a, m in merged.items() if m > 0)
        return cls(cleaned, duality)

    @classmethod
    def empty(cls, duality: Optional[str] = None) -> "FormalRep":
        return cls((), duality)

    def multiplicity(self, atom_id: str) -> int:
        for a, m in self.summands:
            if a == atom_id:
                return m
        return 0

    def atom_ids(self) -> Tuple[str, ...]:
        return tuple(a for a, _ in self.summands)

    def direct_sum(self, other: "FormalRep") -> "FormalRep":
        duality = self.declared_duality
        if duality is None:
            duality = other.declared_duality
        elif other.declared_duality not in (None, duality):
            raise DomainError("cannot sum representations of different declared duality")
        return FormalRep.of(self.summands + other.summands, duality)

    def dim(self, atoms: AtomSet) -> int:
        return sum(atoms.get(a).dim * m for a, m in self.summands)

    def det(self, atoms: AtomSet) -> QuadraticCharacter:
        chi: Optional[QuadraticCharacter] = None
        for a, m in self.summands:
            part = atoms.get(a).det.power(m)
            chi = part if chi is None else chi * part
        if chi is None:
            raise DomainError("determinant of an empty representation needs a group")
        return chi

    def same_type_ids(self, atoms: AtomSet) -> Tuple[str, ...]:
        """Ids of irreducible summands of the same type as the declared duality."""
        duality = self.require_duality()
        return tuple(
            a for a, _ in self.summands if atoms.get(a).duality == duality
        )

    def require_duality(self) -> str:
        if self.declared_duality is None:
            raise DomainError("representation has no declared duality")
        return self.declared_duality

    def validate(self, atoms: AtomSet) -> None:
        """Check the parity conditions a declared duality imposes.

        Opposite-sign irreducible summands occur with even multiplicity and
        non-selfdual summands pair off with equal multiplicities.
        """
        duality = self.require_duality()
        context = duality_context(duality)
        opposite = flip_duality(duality)
        for a, m in self.summands:
            atom = atoms.get(a)
            if atom.duality is not None:
                if duality_context(atom.duality) != context:
                    raise DomainError(
                        f"summand {a!r} has duality {atom.duality!r}, outside the "
                        f"{context} context"
                    )
                if atom.duality == opposite and m % 2 != 0:
                    raise DomainError(
                        f"opposite-sign summand {a!r} must have even multiplicity"
                    )
            else:
                partner = atoms.partner(atom)
                if self.multiplicity(partner.id) != m:
                    raise DomainError(
                        f"paired summands {a!r} and {partner.id!r} must have equal "
                        "multiplicities"
                    )

    def render(self) -> str:
        if not self.summands:
            return "0"
        parts = [a if m == 1 else f"{m}.{a}" for a, m in self.summands]
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"FormalRep({self.render()}, {self.declared_duality})"


def det_of_tensor(
    M: FormalRep | Atom, N: FormalRep | Atom, atoms: AtomSet
) -> QuadraticCharacter:
    """det(M (x) N) = det(M)^dim(N) * det(N)^dim(M)."""
    det_m, dim_m = _det_dim(M, atoms)
    det_n, dim_n = _det_dim(N, atoms)
    if det_m is None and det_n is None:
        raise DomainError("determinant of an empty tensor needs a group")
    if det_m is None:
        det_m = QuadraticCharacter.trivial(
            det_n.group, None if det_n.restriction_nontrivial is None else False
        )
    if det_n is None:
        det_n = QuadraticCharacter.trivial(
            det_m.group, None if det_m.restriction_nontrivial is None else False
        )
    return det_m.power(dim_n) * det_n.power(dim_m)


def _det_dim(
    rep: FormalRep | Atom, atoms: AtomSet
) -> Tuple[Optional[QuadraticCharacter], int]:
    if isinstance(rep, Atom):
        return rep.det, rep.dim
    if not rep.summands:
        return None, 0
    return rep.det(atoms), rep.dim(atoms)


def _pair_key(id_a: str, id_b: str) -> Tuple[str, str]:
    return (id_a, id_b) if id_a <= id_b else (id_b, id_a)


@dataclass(frozen=True)
class Violation:
    axiom: str
    subject: str
    detail: str

    def render(self) -> str:
        return f"{self.axiom} {self.subject}: {self.detail}"


@dataclass
class ValidationReport:
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms_violated(self) -> Tuple[str, ...]:
        return tuple(sorted({v.axiom for v in self.violations}))

    def render(self) -> str:
        if self.ok:
            return "OK"
        return "; ".join(v.render() for v in self.violations)


class EpsilonTable:
    """Validated-by-axioms storage of pair epsilon values and twists.

    pair_values maps (atom id, atom id, psi key) to +-1 (psi keys are
    PsiClass.key()).  Values at translated psi orbits are derived from stored
    values through the translate rule eps(M, psi_a) = det M(a) * eps(M, psi).
    twist_closure maps (atom id, twist key) to the image atom id, where the
    twist key is a square-class label or the id of a 1-dimensional atom.
    """

    def __init__(
        self,
        field: LocalFieldModel,
        context: str,
        base_psi: PsiClass,
        atoms: AtomSet,
        pair_values: Optional[Mapping[Tuple[str, str, Tuple[str, int]], int]] = None,
        twist_closure: Optional[Mapping[Tuple[str, str], str]] = None,
    ):
        if context not in (CONTEXT_SELFDUAL, CONTEXT_CONJUGATE):
            raise DomainError(f"unknown table context {context!r}")
        if context == CONTEXT_CONJUGATE and not field.has_conjugation:
            raise DomainError("conjugate tables need a quadratic field involution")
        self.field = field
        self.context = context
        self.base_psi = base_psi
        self.atoms = atoms
        self.pair_values: Dict[Tuple[str, str, Tuple[str, int]], int] = {}
        for (a, b, psikey), value in (pair_values or {}).items():
            self.pair_values[_pair_key(a, b) + (tuple(psikey),)] = value
        self.twist_closure: Dict[Tuple[str, str], str] = dict(twist_closure or {})
        atoms.validate_partners()
        for atom in atoms:
            if atom.duality is not None and duality_context(atom.duality) != context:
                raise DomainError(
                    f"atom {atom.id!r} has duality {atom.duality!r}, outside the "
                    f"{context} table context"
                )

    # -- psi bookkeeping ---------------------------------------------------

    def translate_group(self):
        if self.context == CONTEXT_SELFDUAL:
            return self.field.square_classes
        return self.field.norm_classes

    def _shift_between(self, stored: Tuple[str, int], wanted: PsiClass):
        if stored[0] != wanted.orbit_label:
            return None
        group = self.translate_group()
        return group.element(stored[1] ^ wanted.offset_bits())

    def _det_factor(self, det: QuadraticCharacter, shift: SquareClassElement) -> int:
        if shift.is_identity:
            return 1
        if self.context == CONTEXT_SELFDUAL:
            return char_eval(det, shift)
        # conjugate context: shift is the nontrivial class t of k0*/N(k*)
        try:
            return det.norm_restriction_sign()
        except DomainError:
            raise IncompleteTableError(
                "missing k0*-restriction data, cannot translate the psi0 orbit"
            ) from None

    # -- entries -----------------------------------------------------------

    def stored_entries(self, id_a: str, id_b: str):
        key = _pair_key(id_a, id_b)
        return {
            psikey: v
            for (a, b, psikey), v in self.pair_values.items()
            if (a, b) == key
        }

    def entry(self, id_a: str, id_b: str, psi: PsiClass) -> int:
        """The epsilon value of the atom pair at psi, deriving translates."""
        atom_a, atom_b = self.atoms.get(id_a), self.atoms.get(id_b)
        stored = self.stored_entries(id_a, id_b)
        exact = stored.get(psi.key())
        if exact is not None:
            return exact
        det = det_of_tensor(atom_a, atom_b, self.atoms)
        base_key = (psi.orbit_label, 0)
        candidates = [base_key] + sorted(k for k in stored if k != base_key)
        for key in candidates:
            if key in stored:
                shift = self._shift_between(key, psi)
                if shift is None:
                    continue
                return stored[key] * self._det_factor(det, shift)
        raise IncompleteTableError(
            f"no epsilon entry for pair ({id_a}, {id_b}) reachable from psi "
            f"{psi.render()!r}"
        )

    def eps_self_value(self, atom_id: str, psi: PsiClass) -> int:
        atom = self.atoms.get(atom_id)
        if atom.eps_self:
            exact = atom.eps_self.get(psi.key())
            if exact is not None:
                return exact
            for key in sorted(atom.eps_self):
                shift = self._shift_between(key, psi)
                if shift is None:
                    continue
                return atom.eps_self[key] * self._det_factor(atom.det, shift)
        raise IncompleteTableError(
            f"atom {atom_id!r} has no self epsilon value reachable from psi "
            f"{psi.render()!r}"
        )

    # -- operations --------------------------------------------------------

    def epsilon(self, M: FormalRep, N: FormalRep, psi: PsiClass) -> int:
        """Bi-additive extension of the pair table; empty products are +1."""
        sign = 1
        for a, ma in M.summands:
            for b, mb in N.summands:
                if (ma * mb) % 2 == 1:
                    sign *= self.entry(a, b, psi)
        return sign

    def twist_key(self, c: SquareClassElement | Atom | str) -> str:
        if isinstance(c, SquareClassElement):
            return c.label()
        if isinstance(c, Atom):
            return c.id
        return c

    def twist_atom(self, atom_id: str, c) -> str:
        key = self.twist_key(c)
        if isinstance(c, SquareClassElement) and c.is_identity:
            return atom_id
        try:
            return self.twist_closure[(atom_id, key)]
        except KeyError:
            raise IncompleteTableError(
                f"no twist entry for atom {atom_id!r} by {key!r}"
            ) from None

    def _twisted_duality(self, duality: Optional[str], c) -> Optional[str]:
        # square-class twists tensor with an orthogonal 1-dim and preserve the
        # sign; twisting by a conjugate-dual atom multiplies the signs.
        if duality is None:
            return None
        if isinstance(c, SquareClassElement):
            return duality
        key = self.twist_key(c)
        if key not in self.atoms:
            return duality
        twister = self.atoms.get(key)
        if twister.duality is None:
            raise DomainError(f"twist atom {key!r} has no duality sign")
        if duality_context(twister.duality) != duality_context(duality):
            raise DomainError("twist atom lives in a different duality context")
        sign = tensor_sign(duality_sign(duality), twister.sign())
        if duality_context(duality) == CONTEXT_CONJUGATE:
            return CONJUGATE_ORTHOGONAL if sign == 1 else CONJUGATE_SYMPLECTIC
        return ORTHOGONAL if sign == 1 else SYMPLECTIC

    def twist(self, M: FormalRep, c) -> FormalRep:
        """Summand-wise image of M under the twist closure.

        Twisting by a 1-dimensional orthogonal representation preserves the
        duality sign and the determinant picks up chi_c^dim(M); twisting by a
        conjugate-dual character multiplies the duality signs.
        """
        return FormalRep.of(
            [(self.twist_atom(a, c), m) for a, m in M.summands],
            self._twisted_duality(M.declared_duality, c),
        )

    def epsilon_rep(self, M: FormalRep, psi: PsiClass) -> int:
        """eps(M, psi) from per-atom self values; hyperbolic pairs contribute
        det P(-1) per Prop-style evaluation."""
        sign = 1
        seen_pairs = set()
        for a, m in M.summands:
            atom = self.atoms.get(a)
            if atom.duality is not None:
                if m % 2 == 1:
                    sign *= self.eps_self_value(a, psi)
            else:
                partner = self.atoms.partner(atom)
                key = _pair_key(a, partner.id)
                if key in seen_pairs:
                    continue
                seen_pairs.add(key)
                if self.multiplicity_pair_ok(M, a, partner.id) % 2 == 1:
                    if self.context == CONTEXT_SELFDUAL:
                        sign *= atom.det.at_minus_one()
                    # conjugate hyperbolic pairs contribute +1
        return sign

    @staticmethod
    def multiplicity_pair_ok(M: FormalRep, id_a: str, id_b: str) -> int:
        ma, mb = M.multiplicity(id_a), M.multiplicity(id_b)
        if ma != mb:
            raise DomainError(
                f"paired summands {id_a!r}, {id_b!r} occur with unequal multiplicities"
            )
        return ma

    # -- validation ----------------------------------------------------------

    def _dual_id(self, atom_id: str) -> str:
        atom = self.atoms.get(atom_id)
        return atom_id if atom.duality is not None else self.atoms.partner(atom).id

    def validate(self, atom_ids: Optional[Sequence[str]] = None) -> ValidationReport:
        """Check axioms A1-A5 over the stored entries and self values."""
        violations = []
        selected = set(atom_ids) if atom_ids is not None else set(self.atoms.ids())

        by_pair: Dict[Tuple[str, str], Dict[Tuple[str, int], int]] = {}
        for (a, b, psikey), value in sorted(self.pair_values.items()):
            if a in selected and b in selected:
                by_pair.setdefault((a, b), {})[psikey] = value

        for (a, b), entries in by_pair.items():
            atom_a, atom_b = self.atoms.get(a), self.atoms.get(b)
            det = det_of_tensor(atom_a, atom_b, self.atoms)
            subject = f"pair ({a}, {b})"

            for psikey, value in entries.items():
                if value not in (1, -1):
                    axiom = "A2" if self.context == CONTEXT_SELFDUAL else "A5"
                    violations.append(
                        Violation(axiom, subject, f"value {value!r} is not a sign")
                    )

            # A1: entries at translated orbits must obey the translate rule.
            keys = sorted(entries)
            for i, key_i in enumerate(keys):
                for key_j in keys[i + 1 :]:
                    if key_i[0] != key_j[0]:
                        continue
                    group = self.translate_group()
                    shift = group.element(key_i[1] ^ key_j[1])
                    try:
                        factor = self._det_factor(det, shift)
                    except IncompleteTableError:
                        violations.append(
                            Violation(
                                "A1",
                                subject,
                                "translate factor is unavailable (missing restriction data)",
                            )
                        )
                        continue
                    if entries[key_j] != entries[key_i] * factor:
                        violations.append(
                            Violation(
                                "A1",
                                subject,
                                f"entries at {key_i} and {key_j} violate the "
                                "psi-translate rule",
                            )
                        )

            both_selfdual = atom_a.duality is not None and atom_b.duality is not None
            if self.context == CONTEXT_SELFDUAL and both_selfdual:
                # A2: values are signs, so eps(X)eps(X^dual) = det X(-1) forces
                # det(-1) = +1 on selfdual pairs.
                if det.at_minus_one() != 1:
                    violations.append(
                        Violation(
                            "A2",
                            subject,
                            "det(-1) of the tensor is -1, impossible for a sign-valued "
                            "epsilon",
                        )
                    )
            if self.context == CONTEXT_CONJUGATE and both_selfdual:
                if atom_a.sign() * atom_b.sign() == 1:
                    for psikey, value in entries.items():
                        if value != 1:
                            violations.append(
                                Violation(
                                    "A3",
                                    subject,
                                    f"conjugate-orthogonal tensor has epsilon {value} "
                                    f"at {psikey}, must be +1",
                                )
                            )

            # A4: hyperbolic pairs.
            dual_pair = _pair_key(self._dual_id(a), self._dual_id(b))
            if dual_pair != (a, b) and dual_pair >= (a, b):
                dual_entries = by_pair.get(dual_pair, {})
                target = (
                    det.at_minus_one() if self.context == CONTEXT_SELFDUAL else 1
                )
                for psikey, value in entries.items():
                    if psikey in dual_entries and value in (1, -1):
                        other = dual_entries[psikey]
                        if other in (1, -1) and value * other != target:
                            violations.append(
                                Violation(
                                    "A4",
                                    subject,
                                    f"hyperbolic product with {dual_pair} at {psikey} "
                                    f"is {value * other}, expected {target}",
                                )
                            )

        for atom_id in sorted(selected):
            atom = self.atoms.get(atom_id)
            if not atom.eps_self:
                continue
            subject = f"atom {atom_id}"
            for psikey, value in sorted(atom.eps_self.items()):
                if value not in (1, -1):
                    axiom = "A2" if self.context == CONTEXT_SELFDUAL else "A5"
                    violations.append(
                        Violation(axiom, subject, f"self value {value!r} is not a sign")
                    )
            keys = sorted(atom.eps_self)
            for i, key_i in enumerate(keys):
                for key_j in keys[i + 1 :]:
                    if key_i[0] != key_j[0]:
                        continue
                    shift = self.translate_group().element(key_i[1] ^ key_j[1])
                    try:
                        factor = self._det_factor(atom.det, shift)
                    except IncompleteTableError:
                        continue
                    expected = atom.eps_self[key_i] * factor
                    if atom.eps_self[key_j] != expected:
                        violations.append(
                            Violation(
                                "A1",
                                subject,
                                f"self values at {key_i} and {key_j} violate the "
                                "psi-translate rule",
                            )
                        )
            if self.context == CONTEXT_SELFDUAL and atom.duality is not None:
                if atom.det.at_minus_one() != 1:
                    violations.append(
                        Violation(
                            "A2",
                            subject,
                            "det(-1) is -1, impossible for a sign-valued self epsilon",
                        )
                    )
            if self.context == CONTEXT_CONJUGATE and atom.duality == CONJUGATE_ORTHOGONAL:
                for psikey, value in sorted(atom.eps_self.items()):
                    if value != 1:
                        violations.append(
                            Violation(
                                "A3",
                                subject,
                                f"conjugate-orthogonal self epsilon {value} at {psikey}",
                            )
                        )

        violations.extend(self._validate_twists(selected))
        return ValidationReport(violations)

    def _validate_twists(self, selected) -> list:
        violations = []
        group = self.field.square_classes
        for (atom_id, key), target_id in sorted(self.twist_closure.items()):
            if atom_id not in selected:
                continue
            subject = f"twist ({atom_id}, {key})"
            source = self.atoms.get(atom_id)
            target = self.atoms.get(target_id)
            if target.dim != source.dim:
                violations.append(
                    Violation("twist", subject, "twist changes the dimension")
                )
                continue
            expected_duality = source.duality
            if key in self.atoms and source.duality is not None:
                try:
                    expected_duality = self._twisted_duality(source.duality, key)
                except DomainError:
                    violations.append(
                        Violation("twist", subject, "twist atom has no usable duality")
                    )
                    continue
            if target.duality != expected_duality:
                violations.append(
                    Violation("twist", subject, "twist target has the wrong duality")
                )
            if key in self.atoms:
                twister = self.atoms.get(key).det
            else:
                try:
                    twister = group.character(group.element(key))
                except DomainError:
                    violations.append(
                        Violation("twist", subject, f"unknown twist key {key!r}")
                    )
                    continue
            if source.duality is None:
                # determinants of non-selfdual atoms are placeholders, only
                # trusted on unit classes; no det consistency to enforce
                continue
            expected = source.det * twister.power(source.dim)
            if expected.gen_values != target.det.gen_values:
                violations.append(
                    Violation(
                        "twist",
                        subject,
                        "target determinant differs from det(M).chi^dim(M)",
                    )
                )
        return violations


def validate_epsilon(
    table: EpsilonTable, atom_ids: Optional[Sequence[str]] = None
) -> ValidationReport:
    """Report every violated axiom among A1-A5 (and twist-closure checks)."""
    return table.validate(atom_ids)


def epsilon(M: FormalRep, N: FormalRep, psi: PsiClass, table: EpsilonTable) -> int:
    """eps(M (x) N, psi), extended bi-additively over summand pairs."""
    return table.epsilon(M, N, psi)


def twist(M: FormalRep, c, table: EpsilonTable) -> FormalRep:
    """The twist M(c), summand-wise under the table's twist closure."""
    return table.twist(M, c)
