"""Centralizers, component groups and the elementary characters eta, eta_c.

For a (conjugate-)selfdual representation the centralizer is a product of
orthogonal, symplectic and general linear groups, one factor per kind of
summand.  Its component group is an F2-vector space with basis the distinct
same-type irreducible summands; the subgroup A+ is cut out by the parity of
dim M^a.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

from .errors import DomainError
from .field import QuadraticCharacter, SquareClassElement, char_eval
from .reps import AtomSet, FormalRep, duality_context, flip_duality, CONTEXT_CONJUGATE


@dataclass(frozen=True)
class CentralizerFactor:
    kind: str  # "O", "Sp" or "GL"
    size: int
    label: str

    def render(self) -> str:
        return f"{self.kind}({self.size})"


@dataclass(frozen=True)
class CentralizerShape:
    factors: Tuple[CentralizerFactor, ...]

    def render(self) -> str:
        if not self.factors:
            return "1"
        return " x ".join(f.render() for f in self.factors)


@dataclass(frozen=True)
class BasisSummand:
    atom_id: str
    dim: int
    det: Optional[QuadraticCharacter]
    multiplicity: int = 1


class ComponentGroup:
    """An F2-vector space with basis labeled by same-type summands.

    constraint_blocks lists index sets on which valid elements must have even
    total dimension; a single block over all indices realizes A+.
    """

    def __init__(
        self,
        records: Sequence[BasisSummand],
        constraint_blocks: Sequence[Sequence[int]] = (),
    ):
        self.records = tuple(records)
        self.constraint_blocks = tuple(tuple(b) for b in constraint_blocks)
        ids = [r.atom_id for r in self.records]
        if len(set(ids)) != len(ids):
            raise DomainError("component group basis labels must be distinct")

    @classmethod
    def trivial(cls) -> "ComponentGroup":
        return cls(())

    @property
    def rank(self) -> int:
        return len(self.records)

    @property
    def order(self) -> int:
        return 1 << self.rank

    def basis_ids(self) -> Tuple[str, ...]:
        return tuple(r.atom_id for r in self.records)

    def element(self, support: int | Sequence[str]) -> "ComponentElement":
        if isinstance(support, int):
            if not 0 <= support < self.order:
                raise DomainError("support bitmask out of range")
            return ComponentElement(self, support)
        bits = 0
        ids = self.basis_ids()
        for atom_id in support:
            if atom_id not in ids:
                raise DomainError(f"{atom_id!r} is not a basis label")
            bits ^= 1 << ids.index(atom_id)
        return ComponentElement(self, bits)

    @property
    def zero(self) -> "ComponentElement":
        return ComponentElement(self, 0)

    def basis_element(self, i: int) -> "ComponentElement":
        return ComponentElement(self, 1 << i)

    def elements(self) -> Iterator["ComponentElement"]:
        for bits in range(self.order):
            yield ComponentElement(self, bits)

    def valid(self, a: "ComponentElement") -> bool:
        for block in self.constraint_blocks:
            total = sum(self.records[i].dim for i in block if (a.bits >> i) & 1)
            if total % 2 != 0:
                return False
        return True

    def valid_elements(self) -> Iterator["ComponentElement"]:
        for a in self.elements():
            if self.valid(a):
                yield a

    @property
    def valid_order(self) -> int:
        return sum(1 for _ in self.valid_elements())

    def eigen_dim(self, a: "ComponentElement") -> int:
        return sum(r.dim for i, r in enumerate(self.records) if (a.bits >> i) & 1)

    def eta(self, a: "ComponentElement") -> int:
        """eta(a) = (-1)^dim M^a."""
        self._check(a)
        return -1 if self.eigen_dim(a) % 2 else 1

    def eta_c(self, c: SquareClassElement, a: "ComponentElement") -> int:
        """eta_c(a) = (det M^a)(c)."""
        self._check(a)
        sign = 1
        for i, r in enumerate(self.records):
            if (a.bits >> i) & 1:
                if r.det is None:
                    raise DomainError(
                        f"basis summand {r.atom_id!r} carries no determinant data"
                    )
                sign *= char_eval(r.det, c)
        return sign

    def minus_one(self) -> "ComponentElement":
        """Sum of the basis elements with odd-dimensional summand."""
        bits = 0
        for i, r in enumerate(self.records):
            if r.dim % 2 == 1:
                bits |= 1 << i
        return ComponentElement(self, bits)

    def product(self, other: "ComponentGroup") -> "ComponentGroup":
        shift = self.rank
        blocks = list(self.constraint_blocks) + [
            tuple(i + shift for i in block) for block in other.constraint_blocks
        ]
        records = list(self.records)
        taken = {r.atom_id for r in records}
        for rec in other.records:
            atom_id = rec.atom_id
            while atom_id in taken:
                atom_id += "'"
            taken.add(atom_id)
            records.append(BasisSummand(atom_id, rec.dim, rec.det, rec.multiplicity))
        return ComponentGroup(tuple(records), blocks)

    def compatible(self, other: "ComponentGroup") -> bool:
        """Structurally the same group: equal labeled basis and constraints."""
        return (
            tuple((r.atom_id, r.dim) for r in self.records)
            == tuple((r.atom_id, r.dim) for r in other.records)
            and self.constraint_blocks == other.constraint_blocks
        )

    def _check(self, a: "ComponentElement") -> None:
        if a.group is not self and not self.compatible(a.group):
            raise DomainError("component element belongs to a different group")

    def render(self) -> str:
        if self.rank == 0:
            return "1"
        name = f"(Z/2)^{self.rank}" if self.rank > 1 else "Z/2"
        if self.constraint_blocks:
            return f"{name}+ of order {self.valid_order}"
        return name

    def __repr__(self) -> str:
        return f"ComponentGroup({list(self.basis_ids())})"


@dataclass(frozen=True)
class ComponentElement:
    group: ComponentGroup
    bits: int

    def __add__(self, other: "ComponentElement") -> "ComponentElement":
        if other.group is not self.group and not self.group.compatible(other.group):
            raise DomainError("cannot add elements of different component groups")
        return ComponentElement(self.group, self.bits ^ other.bits)

    def support(self) -> Tuple[str, ...]:
        ids = self.group.basis_ids()
        return tuple(ids[i] for i in range(self.group.rank) if (self.bits >> i) & 1)

    @property
    def is_zero(self) -> bool:
        return self.bits == 0

    def render(self) -> str:
        return "0" if self.is_zero else "+".join(self.support())

    def __repr__(self) -> str:
        return f"<a = {self.render()}>"


def centralizer(M: FormalRep, atoms: AtomSet) -> CentralizerShape:
    """C = prod O(m_i) x prod Sp(2n_i) x prod GL(p_i) per summand kind."""
    duality = M.require_duality()
    M.validate(atoms)
    opposite = flip_duality(duality)
    factors = []
    seen_pairs = set()
    for a, m in M.summands:
        atom = atoms.get(a)
        if atom.duality == duality:
            factors.append(CentralizerFactor("O", m, a))
        elif atom.duality == opposite:
            factors.append(CentralizerFactor("Sp", m, a))
        else:
            partner = atoms.partner(atom)
            key = tuple(sorted((a, partner.id)))
            if key in seen_pairs:
                continue
            seen_pairs.add(key)
            factors.append(CentralizerFactor("GL", m, f"{key[0]}+{key[1]}"))
    return CentralizerShape(tuple(factors))


def component_group(M: FormalRep, atoms: AtomSet, use_plus: bool = False) -> ComponentGroup:
    """A_M = (Z/2)^k with basis the distinct same-type summands.

    use_plus cuts out the kernel of a -> dim M^a mod 2 and is only available
    for selfdual M; conjugate-dual parameters use the full component group.
    """
    duality = M.require_duality()
    M.validate(atoms)
    if use_plus and duality_context(duality) == CONTEXT_CONJUGATE:
        raise DomainError("A+ is not defined in the conjugate-dual case")
    records = []
    for a, m in M.summands:
        atom = atoms.get(a)
        if atom.duality == duality:
            records.append(BasisSummand(a, atom.dim, atom.det, m))
    blocks = (tuple(range(len(records))),) if use_plus else ()
    return ComponentGroup(records, blocks)


def eigenspace(M: FormalRep, atoms: AtomSet, a: ComponentElement) -> FormalRep:
    """M^a: one copy of each supported same-type summand, same duality as M."""
    return FormalRep.of([(atom_id, 1) for atom_id in a.support()], M.declared_duality)


def eta(group: ComponentGroup, a: ComponentElement) -> int:
    return group.eta(a)


def eta_c(group: ComponentGroup, c: SquareClassElement, a: ComponentElement) -> int:
    return group.eta_c(c, a)
