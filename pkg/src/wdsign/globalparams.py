"""Global parameters, the diagonal map and the tempered multiplicity formulas.

A global parameter is a list of distinct cuspidal atoms, each carrying a
global root number eps(pi_i, 1/2) and, at finitely many places, a local
formal representation; all other places are unramified-generic with trivial
component group.  The multiplicity of a packet member eta = (x) eta_v is

    m_eta = < Delta*(eta), 1 >      (linear groups)
    m_eta = < Delta*(eta), chi >    (metaplectic, chi(a_i) = eps(pi_i, 1/2))

and since every character here is 1-dimensional the inner products are
indicators: m_eta = 1 iff prod_v eta_v(Delta_v(a_i)) matches for every i.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product as iter_product
from typing import List, Mapping, Sequence, Tuple

from .errors import DomainError
from .field import LocalFieldModel
from .components import BasisSummand, ComponentElement, ComponentGroup, component_group
from .reps import AtomSet, FormalRep, ORTHOGONAL, SYMPLECTIC
from .characters import CharacterOnA

ENUMERATION_CAP = 1 << 20


@dataclass(frozen=True)
class Place:
    label: str
    field: LocalFieldModel
    atoms: AtomSet


@dataclass(frozen=True)
class GlobalAtom:
    """A cuspidal atom: a summand of a global parameter.

    local maps place labels to the local parameter of this atom there;
    unlisted places are unramified-generic (trivial component group, zero
    diagonal image).
    """

    id: str
    dim: int
    sign: str
    eps_half: int
    local: Mapping[str, FormalRep] = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.eps_half not in (1, -1):
            raise DomainError("eps_half must be +1 or -1")


class GlobalParameter:
    def __init__(self, atoms: Sequence[GlobalAtom], places: Sequence[Place]):
        ids = [a.id for a in atoms]
        if len(set(ids)) != len(ids):
            raise DomainError("global atoms must be pairwise distinct")
        if len({p.label for p in places}) != len(places):
            raise DomainError("place labels must be distinct")
        self.atoms = tuple(atoms)
        self.places = tuple(places)
        self._by_label = {p.label: p for p in self.places}
        for atom in self.atoms:
            for label, rep in atom.local.items():
                if label not in self._by_label:
                    raise DomainError(f"atom {atom.id!r} references unknown place {label!r}")
                if rep.declared_duality != atom.sign:
                    raise DomainError(
                        f"local parameter of {atom.id!r} at {label!r} does not carry "
                        "the atom's duality sign"
                    )
                place_atoms = self._by_label[label].atoms
                rep.validate(place_atoms)
                if rep.dim(place_atoms) != atom.dim:
                    raise DomainError(
                        f"local parameter of {atom.id!r} at {label!r} has dimension "
                        f"{rep.dim(place_atoms)}, expected {atom.dim}"
                    )

    def place(self, label: str) -> Place:
        try:
            return self._by_label[label]
        except KeyError:
            raise DomainError(f"unknown place {label!r}") from None

    def local_parameter(self, label: str) -> FormalRep:
        """The full local parameter at a place: the sum over atoms."""
        place = self.place(label)
        rep = FormalRep.empty()
        for atom in self.atoms:
            if label in atom.local:
                rep = rep.direct_sum(atom.local[label])
        return rep

    def local_component_group(self, label: str) -> ComponentGroup:
        """A_phi_v; orthogonal parameters use A+, others the full group."""
        place = self.place(label)
        rep = self.local_parameter(label)
        if rep.declared_duality is None:
            return ComponentGroup.trivial()
        use_plus = rep.declared_duality == ORTHOGONAL
        return component_group(rep, place.atoms, use_plus=use_plus)


@dataclass(frozen=True)
class GlobalCharacterChoice:
    """Per-place characters eta_v on A_phi_v, trivial at unlisted places."""

    per_place: Mapping[str, CharacterOnA]

    def value_at(self, label: str, element: ComponentElement) -> int:
        char = self.per_place.get(label)
        if char is None:
            return 1
        return char.value_unchecked(element)

    def label_string(self, order: Sequence[str]) -> str:
        parts = []
        for label in order:
            char = self.per_place.get(label)
            if char is None:
                continue
            parts.append(
                "".join("+" if v == 1 else "-" for v in char.values_on_basis)
            )
        return "".join(parts)


def global_component_group(phi: GlobalParameter) -> ComponentGroup:
    """A_phi = prod_i (Z/2)_{pi_i}, one basis element per cuspidal atom."""
    records = [BasisSummand(atom.id, atom.dim, None) for atom in phi.atoms]
    return ComponentGroup(records)


def diagonal_image(phi: GlobalParameter, label: str, atom_id: str) -> ComponentElement:
    """The image in A_phi_v of the basis element of the atom pi_i.

    It is the class of the central -1 of the local constituent block: the sum
    of the same-type local basis elements occurring in pi_{i,v} with odd
    multiplicity (determinant parity of -1 in O(m_j)).
    """
    group = phi.local_component_group(label)
    atom = next((a for a in phi.atoms if a.id == atom_id), None)
    if atom is None:
        raise DomainError(f"unknown global atom {atom_id!r}")
    rep = atom.local.get(label)
    if rep is None:
        return group.zero
    bits = 0
    ids = group.basis_ids()
    for local_id, mult in rep.summands:
        if local_id in ids and mult % 2 == 1:
            bits ^= 1 << ids.index(local_id)
    return ComponentElement(group, bits)


def multiplicity(phi: GlobalParameter, eta: GlobalCharacterChoice) -> int:
    """m_eta = < Delta*(eta), 1 >: one iff eta pulls back trivially."""
    for atom in phi.atoms:
        sign = 1
        for place in phi.places:
            sign *= eta.value_at(place.label, diagonal_image(phi, place.label, atom.id))
        if sign != 1:
            return 0
    return 1


def metaplectic_multiplicity(phi: GlobalParameter, eta: GlobalCharacterChoice) -> int:
    """m_eta = < Delta*(eta), chi_phi > with chi_phi(a_i) = eps(pi_i, 1/2)."""
    for atom in phi.atoms:
        if atom.sign != SYMPLECTIC:
            raise DomainError(
                "the metaplectic multiplicity needs symplectic-sign atoms"
            )
        sign = 1
        for place in phi.places:
            sign *= eta.value_at(place.label, diagonal_image(phi, place.label, atom.id))
        if sign != atom.eps_half:
            return 0
    return 1


MODE_LINEAR = "linear"
MODE_METAPLECTIC = "metaplectic"


def enumerate_automorphic(
    phi: GlobalParameter, mode: str = MODE_LINEAR
) -> List[GlobalCharacterChoice]:
    """All eta supported on the declared places with multiplicity one.

    Characters are enumerated per place over the full dual of A_phi_v, with
    the all-plus character first; places with trivial component group are
    skipped.
    """
    if mode not in (MODE_LINEAR, MODE_METAPLECTIC):
        raise DomainError(f"unknown mode {mode!r}")
    counter = multiplicity if mode == MODE_LINEAR else metaplectic_multiplicity
    supports: List[Tuple[str, ComponentGroup]] = []
    total = 1
    for place in phi.places:
        group = phi.local_component_group(place.label)
        if group.rank > 0:
            supports.append((place.label, group))
            total <<= group.rank
    if total > ENUMERATION_CAP:
        raise DomainError("character lattice too large to enumerate")
    choices = []
    sign_vectors = [
        list(iter_product((1, -1), repeat=group.rank)) for _, group in supports
    ]
    for combo in iter_product(*sign_vectors):
        per_place = {
            label: CharacterOnA(group, values)
            for (label, group), values in zip(supports, combo)
        }
        eta = GlobalCharacterChoice(per_place)
        if counter(phi, eta) == 1:
            choices.append(eta)
    return choices


@dataclass(frozen=True)
class CoherenceResult:
    product: int
    coherent: bool
    derivative_case: bool

    def render(self) -> str:
        if self.coherent:
            return "coherent"
        return "incoherent (first-derivative case)"


def coherence(local_signs: Mapping[str, int]) -> CoherenceResult:
    """Coherent iff the product of the local signs is +1.

    A product of -1 flags the arithmetic first-derivative situation (the
    collection of local spaces arises from no global space); no further
    computation is attached to the flag.
    """
    product = 1
    for label, sign in local_signs.items():
        if sign not in (1, -1):
            raise DomainError(f"local sign at {label!r} must be +1 or -1")
        product *= sign
    coherent = product == 1
    return CoherenceResult(product, coherent, not coherent)
