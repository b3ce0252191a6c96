"""Square-class groups of local fields, Hilbert pairings and quadratic characters.

A local field of odd residue characteristic enters the engine only through the
finite F2-vector space k*/k*^2 together with the Hilbert symbol, which is a
perfect symmetric bilinear pairing into {+1, -1}.  Quadratic characters are
elements of the dual space.  Additive characters appear as abstract orbit
labels (PsiClass) carrying a square-class torsor action psi -> psi_a.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product
from typing import Iterator, Optional, Sequence

from .errors import DomainError

KIND_PADIC_ODD = "p-adic-odd"
KIND_REAL = "real"
KIND_COMPLEX = "complex"
KIND_CUSTOM = "custom"

INVOLUTION_TRIVIAL = "trivial"
INVOLUTION_INERT = "inert"
INVOLUTION_RAMIFIED = "ramified"
INVOLUTION_SPLIT = "split"

_QUADRATIC_INVOLUTIONS = (INVOLUTION_INERT, INVOLUTION_RAMIFIED)


@dataclass(frozen=True)
class SquareClassElement:
    """An element of a SquareClassGroup, stored as an F2 exponent bitmask."""

    group: "SquareClassGroup"
    bits: int

    def __mul__(self, other: "SquareClassElement") -> "SquareClassElement":
        if other.group is not self.group:
            raise DomainError("cannot multiply square classes from different groups")
        return SquareClassElement(self.group, self.bits ^ other.bits)

    @property
    def is_identity(self) -> bool:
        return self.bits == 0

    def label(self) -> str:
        if self.bits == 0:
            return "1"
        parts = [
            g
            for i, g in enumerate(self.group.generator_labels)
            if (self.bits >> i) & 1
        ]
        return "*".join(parts)

    def __repr__(self) -> str:
        return f"<class {self.label()}>"


def _f2_rank(rows: Sequence[int], n_cols: int) -> int:
    """Rank of a bit-matrix over F2 (rows as ints, column i = bit i)."""
    work = list(rows)
    rank = 0
    row = 0
    for col in range(n_cols):
        pivot = None
        for r in range(row, len(work)):
            if (work[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        for r in range(len(work)):
            if r != row and ((work[r] >> col) & 1):
                work[r] ^= work[row]
        rank += 1
        row += 1
    return rank


class SquareClassGroup:
    """A finite elementary abelian 2-group with a perfect +-1-valued pairing.

    Generators are named; elements are F2 exponent vectors over the
    generators.  The pairing is given on generators and extended
    bilinearly, so pairing(identity, x) = +1 automatically.
    """

    def __init__(
        self,
        generator_labels: Sequence[str],
        pairing_on_generators: Sequence[Sequence[int]],
        minus_one: str | None = None,
    ):
        self.generator_labels = tuple(generator_labels)
        self.rank = len(self.generator_labels)
        if len(set(self.generator_labels)) != self.rank:
            raise DomainError("generator labels must be distinct")
        matrix = tuple(tuple(row) for row in pairing_on_generators)
        if len(matrix) != self.rank or any(len(r) != self.rank for r in matrix):
            raise DomainError("pairing matrix shape must match the generator count")
        for i in range(self.rank):
            for j in range(self.rank):
                if matrix[i][j] not in (1, -1):
                    raise DomainError("pairing values must be +1 or -1")
                if matrix[i][j] != matrix[j][i]:
                    raise DomainError("pairing must be symmetric")
        self._matrix = matrix
        # Perfect pairing <=> the exponent matrix has full rank over F2.
        rows = [
            sum((1 << j) for j in range(self.rank) if matrix[i][j] == -1)
            for i in range(self.rank)
        ]
        if _f2_rank(rows, self.rank) != self.rank:
            raise DomainError("pairing is degenerate")
        if minus_one is None:
            self.minus_one = self.identity
        else:
            self.minus_one = self.element(minus_one)

    @property
    def identity(self) -> SquareClassElement:
        return SquareClassElement(self, 0)

    @property
    def order(self) -> int:
        return 1 << self.rank

    def element(self, spec: str | int | SquareClassElement) -> SquareClassElement:
        if isinstance(spec, SquareClassElement):
            if spec.group is not self:
                raise DomainError("element belongs to a different square-class group")
            return spec
        if isinstance(spec, int):
            if not 0 <= spec < self.order:
                raise DomainError(f"bitmask {spec} out of range for rank {self.rank}")
            return SquareClassElement(self, spec)
        bits = 0
        if spec not in ("1", ""):
            for part in spec.split("*"):
                if part == "-1" and "-1" not in self.generator_labels:
                    return self.minus_one
                if part not in self.generator_labels:
                    raise DomainError(f"unknown square class {part!r}")
                bits ^= 1 << self.generator_labels.index(part)
        return SquareClassElement(self, bits)

    def elements(self) -> Iterator[SquareClassElement]:
        for bits in range(self.order):
            yield SquareClassElement(self, bits)

    def pairing(self, a: SquareClassElement, b: SquareClassElement) -> int:
        a = self.element(a)
        b = self.element(b)
        sign = 1
        for i in range(self.rank):
            if not (a.bits >> i) & 1:
                continue
            for j in range(self.rank):
                if (b.bits >> j) & 1:
                    sign *= self._matrix[i][j]
        return sign

    def pairing_matrix(self) -> tuple[tuple[int, ...], ...]:
        return self._matrix

    def character(
        self, d: str | int | SquareClassElement, restriction_nontrivial: bool | None = None
    ) -> "QuadraticCharacter":
        """The character chi_d = pairing(., d)."""
        d = self.element(d)
        values = tuple(
            self.pairing(SquareClassElement(self, 1 << i), d) for i in range(self.rank)
        )
        return QuadraticCharacter(self, values, restriction_nontrivial)

    def characters(self) -> Iterator["QuadraticCharacter"]:
        for values in iter_product((1, -1), repeat=self.rank):
            yield QuadraticCharacter(self, values)

    def __repr__(self) -> str:
        return f"SquareClassGroup({list(self.generator_labels)})"


@dataclass(frozen=True)
class QuadraticCharacter:
    """A {+1,-1}-valued multiplicative character of a square-class group.

    In conjugate-dual contexts the character additionally records whether its
    restriction to the index-two subgroup k0* (modulo norms) is trivial; that
    bit is all the engine ever needs of the restriction.
    """

    group: SquareClassGroup
    gen_values: tuple[int, ...]
    restriction_nontrivial: Optional[bool] = None

    def __post_init__(self):
        if len(self.gen_values) != self.group.rank:
            raise DomainError("character values must match the generator count")
        if any(v not in (1, -1) for v in self.gen_values):
            raise DomainError("character values must be +1 or -1")

    @classmethod
    def trivial(
        cls, group: SquareClassGroup, restriction_nontrivial: bool | None = None
    ) -> "QuadraticCharacter":
        return cls(group, (1,) * group.rank, restriction_nontrivial)

    @property
    def is_trivial(self) -> bool:
        return all(v == 1 for v in self.gen_values)

    def value(self, x: SquareClassElement) -> int:
        if x.group is not self.group:
            raise DomainError("element is outside the character's domain")
        sign = 1
        for i in range(self.group.rank):
            if (x.bits >> i) & 1:
                sign *= self.gen_values[i]
        return sign

    def __call__(self, x: SquareClassElement) -> int:
        return self.value(x)

    def __mul__(self, other: "QuadraticCharacter") -> "QuadraticCharacter":
        if other.group is not self.group:
            raise DomainError("cannot multiply characters on different groups")
        values = tuple(a * b for a, b in zip(self.gen_values, other.gen_values))
        if self.restriction_nontrivial is None or other.restriction_nontrivial is None:
            rest = None
        else:
            rest = self.restriction_nontrivial != other.restriction_nontrivial
        return QuadraticCharacter(self.group, values, rest)

    def power(self, n: int) -> "QuadraticCharacter":
        if n % 2 == 0:
            rest = None if self.restriction_nontrivial is None else False
            return QuadraticCharacter.trivial(self.group, rest)
        return self

    def at_minus_one(self) -> int:
        return self.value(self.group.minus_one)

    def norm_restriction_sign(self) -> int:
        """Value at the nontrivial class of k0*/N(k*); needs the restriction bit."""
        if self.restriction_nontrivial is None:
            raise DomainError("character carries no restriction data for k0*")
        return -1 if self.restriction_nontrivial else 1

    def to_class(self) -> SquareClassElement:
        """The unique d with self = pairing(., d) (the pairing is perfect)."""
        for d in self.group.elements():
            if all(
                self.group.pairing(SquareClassElement(self.group, 1 << i), d)
                == self.gen_values[i]
                for i in range(self.group.rank)
            ):
                return d
        raise DomainError("character is not of the form (., d)")  # unreachable

    def __repr__(self) -> str:
        vals = ",".join("+1" if v == 1 else "-1" for v in self.gen_values)
        return f"<char [{vals}]>"


def char_eval(chi: QuadraticCharacter, x: SquareClassElement) -> int:
    """Evaluate a quadratic character; multiplicative in x by construction."""
    return chi.value(x)


@dataclass(frozen=True)
class PsiClass:
    """An orbit of additive characters, as a torsor point psi_a = psi(a ..).

    translate composes associatively: translating by a then b is translating
    by a*b, and offsets are normalized so equal orbits compare equal.
    """

    orbit_label: str
    shift: Optional[SquareClassElement] = None

    def __post_init__(self):
        if self.shift is not None and self.shift.is_identity:
            object.__setattr__(self, "shift", None)

    def translate(self, a: SquareClassElement) -> "PsiClass":
        if self.shift is None:
            return PsiClass(self.orbit_label, a)
        return PsiClass(self.orbit_label, self.shift * a)

    def offset_bits(self) -> int:
        return 0 if self.shift is None else self.shift.bits

    def key(self) -> tuple[str, int]:
        return (self.orbit_label, self.offset_bits())

    def render(self) -> str:
        if self.shift is None:
            return self.orbit_label
        return f"{self.orbit_label}[{self.shift.label()}]"

    def __repr__(self) -> str:
        return f"<psi {self.render()}>"


class LocalFieldModel:
    """The square-class data of a local field, with optional involution.

    For a quadratic field involution the model also carries the order-two
    group k0*/N(k*) whose nontrivial class translates the psi0 orbits.  In
    split mode (k = k0 x k0) all Vogan packets are singletons and no Hilbert
    pairing is ever consulted.
    """

    def __init__(
        self,
        kind: str,
        square_classes: SquareClassGroup,
        involution: str = INVOLUTION_TRIVIAL,
        q_mod_4: int | None = None,
    ):
        if kind not in (KIND_PADIC_ODD, KIND_REAL, KIND_COMPLEX, KIND_CUSTOM):
            raise DomainError(f"unknown field kind {kind!r}")
        if involution not in (
            INVOLUTION_TRIVIAL,
            INVOLUTION_INERT,
            INVOLUTION_RAMIFIED,
            INVOLUTION_SPLIT,
        ):
            raise DomainError(f"unknown involution {involution!r}")
        self.kind = kind
        self.square_classes = square_classes
        self.involution = involution
        self.q_mod_4 = q_mod_4
        if involution in _QUADRATIC_INVOLUTIONS:
            # k0*/N(k*) has order two; no pairing on it is ever used.
            self.norm_classes: SquareClassGroup | None = SquareClassGroup(
                ("t",), ((-1,),)
            )
        elif involution == INVOLUTION_SPLIT:
            self.norm_classes = SquareClassGroup((), ())
        else:
            self.norm_classes = None

    @property
    def has_conjugation(self) -> bool:
        return self.involution in _QUADRATIC_INVOLUTIONS

    @property
    def singleton_packets(self) -> bool:
        return self.involution == INVOLUTION_SPLIT

    @property
    def rank(self) -> int:
        return self.square_classes.rank

    def pairing(self, a, b) -> int:
        if self.involution == INVOLUTION_SPLIT:
            raise DomainError("no Hilbert pairing in split mode")
        return self.square_classes.pairing(
            self.square_classes.element(a), self.square_classes.element(b)
        )

    def norm_translate(self) -> SquareClassElement:
        """The nontrivial class of k0*/N(k*)."""
        if self.norm_classes is None or self.norm_classes.rank == 0:
            raise DomainError("field model carries no quadratic involution")
        return self.norm_classes.element("t")

    def __repr__(self) -> str:
        extra = f", q mod 4 = {self.q_mod_4}" if self.q_mod_4 else ""
        return f"LocalFieldModel({self.kind}, {self.involution}{extra})"


def make_padic_odd(q_mod_4: int, involution: str = INVOLUTION_TRIVIAL) -> LocalFieldModel:
    """Square classes {1, u, pi, u*pi} of a p-adic field with odd residue field.

    u is a non-square unit, pi a uniformizer; (u,u) = +1, (u,pi) = -1 and
    (pi,pi) = +1 iff q = 1 mod 4, in which case -1 is a square.
    """
    if q_mod_4 not in (1, 3):
        raise DomainError("q_mod_4 must be 1 or 3")
    pp = 1 if q_mod_4 == 1 else -1
    group = SquareClassGroup(
        ("u", "pi"),
        ((1, -1), (-1, pp)),
        minus_one="1" if q_mod_4 == 1 else "u",
    )
    return LocalFieldModel(KIND_PADIC_ODD, group, involution, q_mod_4=q_mod_4)


def make_real(involution: str = INVOLUTION_TRIVIAL) -> LocalFieldModel:
    """Square classes {1, -1} of the real field; (-1,-1) = -1."""
    group = SquareClassGroup(("-1",), ((-1,),), minus_one="-1")
    return LocalFieldModel(KIND_REAL, group, involution)


def make_complex() -> LocalFieldModel:
    """The complex field: a rank-zero square-class group."""
    return LocalFieldModel(KIND_COMPLEX, SquareClassGroup((), ()))


def make_split(kind: str = KIND_PADIC_ODD, q_mod_4: int | None = 1) -> LocalFieldModel:
    """The split quadratic etale algebra k = k0 x k0.

    Carries a rank-zero conjugate square-class group; downstream packets are
    singletons and no Hilbert pairing is consulted.
    """
    return LocalFieldModel(kind, SquareClassGroup((), ()), INVOLUTION_SPLIT, q_mod_4=q_mod_4)


def make_custom(
    generator_labels: Sequence[str],
    pairing_on_generators: Sequence[Sequence[int]],
    minus_one: str,
    involution: str = INVOLUTION_TRIVIAL,
) -> LocalFieldModel:
    """An extensible constructor: explicit pairing matrix, validated against
    the axioms (symmetric, +-1-valued, perfect)."""
    group = SquareClassGroup(generator_labels, pairing_on_generators, minus_one)
    return LocalFieldModel(KIND_CUSTOM, group, involution)
