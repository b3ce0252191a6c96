"""UTF-8 JSON document schema: field models, atoms, tables, parameters, cases,
global parameters and queries.

The schema is fail-closed: unknown section or field names are rejected so
typos in mathematical data cannot pass silently.  Every id must be declared
before it is referenced.  Version 1 only.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from typing import Any, Dict, List, Mapping, Optional, Tuple

from .errors import DocumentError, DomainError
from .field import (
    INVOLUTION_TRIVIAL,
    LocalFieldModel,
    PsiClass,
    QuadraticCharacter,
    make_complex,
    make_custom,
    make_padic_odd,
    make_real,
    make_split,
)
from .reps import Atom, AtomSet, EpsilonTable, FormalRep
from .characters import ALL_CASES, CaseDescriptor
from .globalparams import GlobalAtom, GlobalParameter, Place

SUPPORTED_QUERIES = (
    "classify",
    "component-group",
    "distinguished",
    "check-psi-consistency",
    "check-axioms",
    "metaplectic-conjugate",
    "global-multiplicity",
    "enumerate-automorphic",
    "coherence",
    "unramified",
)

_SECTIONS = (
    "version",
    "field_models",
    "atoms",
    "epsilon_tables",
    "local_parameters",
    "cases",
    "global_parameters",
    "queries",
)


def _check_keys(obj: Mapping[str, Any], allowed, where: str) -> None:
    if not isinstance(obj, dict):
        raise DocumentError(f"{where}: expected an object")
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise DocumentError(f"{where}: unknown fields {unknown}")


def _need(obj: Mapping[str, Any], key: str, where: str):
    if key not in obj:
        raise DocumentError(f"{where}: missing required field {key!r}")
    return obj[key]


def _sign(value, where: str) -> int:
    if value not in (1, -1):
        raise DocumentError(f"{where}: expected +1 or -1, got {value!r}")
    return value


@dataclass
class CaseEntry:
    descriptor: CaseDescriptor
    table_id: str
    m_id: str
    n_id: str
    twist_class: Optional[str] = None


@dataclass
class ParsedDocument:
    digest: str
    fields: Dict[str, LocalFieldModel] = dc_field(default_factory=dict)
    atoms: Dict[str, Tuple[Atom, str]] = dc_field(default_factory=dict)
    tables: Dict[str, EpsilonTable] = dc_field(default_factory=dict)
    parameters: Dict[str, Tuple[FormalRep, str]] = dc_field(default_factory=dict)
    cases: Dict[str, CaseEntry] = dc_field(default_factory=dict)
    globals_: Dict[str, GlobalParameter] = dc_field(default_factory=dict)
    queries: List[Dict[str, Any]] = dc_field(default_factory=list)

    def table(self, table_id: str) -> EpsilonTable:
        if table_id not in self.tables:
            raise DocumentError(f"unknown epsilon table {table_id!r}")
        return self.tables[table_id]

    def parameter(self, param_id: str) -> Tuple[FormalRep, EpsilonTable]:
        if param_id not in self.parameters:
            raise DocumentError(f"unknown local parameter {param_id!r}")
        rep, table_id = self.parameters[param_id]
        return rep, self.table(table_id)

    def global_parameter(self, phi_id: str) -> GlobalParameter:
        if phi_id not in self.globals_:
            raise DocumentError(f"unknown global parameter {phi_id!r}")
        return self.globals_[phi_id]


def _parse_field_model(entry, where: str) -> LocalFieldModel:
    _check_keys(
        entry,
        ("id", "kind", "q_mod_4", "involution", "generators", "pairing", "minus_one"),
        where,
    )
    kind = _need(entry, "kind", where)
    involution = entry.get("involution", INVOLUTION_TRIVIAL)
    try:
        if kind == "p-adic-odd":
            return make_padic_odd(_need(entry, "q_mod_4", where), involution)
        if kind == "real":
            return make_real(involution)
        if kind == "complex":
            return make_complex()
        if kind == "split":
            return make_split(q_mod_4=entry.get("q_mod_4"))
        if kind == "custom":
            return make_custom(
                _need(entry, "generators", where),
                _need(entry, "pairing", where),
                _need(entry, "minus_one", where),
                involution,
            )
    except DomainError as exc:
        raise DocumentError(f"{where}: {exc}") from None
    raise DocumentError(f"{where}: unknown field kind {kind!r}")


def _parse_det(entry, field: LocalFieldModel, where: str) -> QuadraticCharacter:
    _check_keys(entry, ("class", "on_generators", "trivial", "restriction"), where)
    group = field.square_classes
    restriction = entry.get("restriction")
    if restriction not in (None, "trivial", "nontrivial"):
        raise DocumentError(f"{where}: restriction must be 'trivial' or 'nontrivial'")
    rest_bit = None if restriction is None else restriction == "nontrivial"
    try:
        if entry.get("trivial"):
            return QuadraticCharacter.trivial(group, rest_bit)
        if "class" in entry:
            return group.character(group.element(entry["class"]), rest_bit)
        if "on_generators" in entry:
            spec = entry["on_generators"]
            _check_keys(spec, group.generator_labels, f"{where}.on_generators")
            values = tuple(
                _sign(spec.get(g, 1), where) for g in group.generator_labels
            )
            return QuadraticCharacter(group, values, rest_bit)
    except DomainError as exc:
        raise DocumentError(f"{where}: {exc}") from None
    raise DocumentError(f"{where}: determinant needs 'class', 'on_generators' or 'trivial'")


def _parse_psi(spec, field: LocalFieldModel, where: str) -> PsiClass:
    if not isinstance(spec, str) or not spec:
        raise DocumentError(f"{where}: psi must be a non-empty string")
    if "[" in spec:
        if not spec.endswith("]"):
            raise DocumentError(f"{where}: malformed psi {spec!r}")
        label, shift_label = spec[:-1].split("[", 1)
        if field.norm_classes is not None and shift_label == "t":
            shift = field.norm_classes.element("t")
        else:
            try:
                shift = field.square_classes.element(shift_label)
            except DomainError as exc:
                raise DocumentError(f"{where}: {exc}") from None
        return PsiClass(label, shift)
    return PsiClass(spec)


def _parse_atom(entry, fields, where: str) -> Tuple[Atom, str]:
    _check_keys(
        entry,
        ("id", "field", "dim", "duality", "dual_partner", "det", "eps_self"),
        where,
    )
    atom_id = _need(entry, "id", where)
    field_id = _need(entry, "field", where)
    if field_id not in fields:
        raise DocumentError(f"{where}: unknown field model {field_id!r}")
    field = fields[field_id]
    det = _parse_det(_need(entry, "det", where), field, f"{where}.det")
    eps_self = {}
    for i, pair in enumerate(entry.get("eps_self", [])):
        _check_keys(pair, ("psi", "value"), f"{where}.eps_self[{i}]")
        psi = _parse_psi(_need(pair, "psi", where), field, f"{where}.eps_self[{i}]")
        eps_self[psi.key()] = _sign(_need(pair, "value", where), where)
    try:
        atom = Atom(
            atom_id,
            _need(entry, "dim", where),
            entry.get("duality"),
            det,
            entry.get("dual_partner"),
            eps_self,
        )
    except DomainError as exc:
        raise DocumentError(f"{where}: {exc}") from None
    return atom, field_id


def _parse_table(entry, doc: ParsedDocument, where: str) -> EpsilonTable:
    _check_keys(
        entry,
        ("id", "field", "context", "base_psi", "atoms", "pairs", "twists"),
        where,
    )
    field_id = _need(entry, "field", where)
    if field_id not in doc.fields:
        raise DocumentError(f"{where}: unknown field model {field_id!r}")
    field = doc.fields[field_id]
    atom_set = AtomSet()
    for atom_id in _need(entry, "atoms", where):
        if atom_id not in doc.atoms:
            raise DocumentError(f"{where}: unknown atom {atom_id!r}")
        atom, atom_field = doc.atoms[atom_id]
        if atom_field != field_id:
            raise DocumentError(
                f"{where}: atom {atom_id!r} lives over field {atom_field!r}, "
                f"not {field_id!r}"
            )
        atom_set.add(atom)
    base_psi = _parse_psi(_need(entry, "base_psi", where), field, where)
    pair_values = {}
    for i, pair in enumerate(entry.get("pairs", [])):
        pwhere = f"{where}.pairs[{i}]"
        _check_keys(pair, ("a", "b", "psi", "value"), pwhere)
        a, b = _need(pair, "a", pwhere), _need(pair, "b", pwhere)
        for x in (a, b):
            if x not in atom_set:
                raise DocumentError(f"{pwhere}: atom {x!r} is not in the table")
        psi = _parse_psi(pair.get("psi", entry["base_psi"]), field, pwhere)
        pair_values[(a, b, psi.key())] = _sign(_need(pair, "value", pwhere), pwhere)
    twists = {}
    for i, tw in enumerate(entry.get("twists", [])):
        twhere = f"{where}.twists[{i}]"
        _check_keys(tw, ("atom", "by", "to"), twhere)
        source, to = _need(tw, "atom", twhere), _need(tw, "to", twhere)
        for x in (source, to):
            if x not in atom_set:
                raise DocumentError(f"{twhere}: atom {x!r} is not in the table")
        twists[(source, _need(tw, "by", twhere))] = to
    try:
        return EpsilonTable(
            field, _need(entry, "context", where), base_psi, atom_set, pair_values, twists
        )
    except DomainError as exc:
        raise DocumentError(f"{where}: {exc}") from None


def _parse_rep(entry, atoms: AtomSet, where: str) -> FormalRep:
    _check_keys(entry, ("duality", "summands"), where)
    summands = []
    for i, pair in enumerate(_need(entry, "summands", where)):
        if isinstance(pair, str):
            summands.append((pair, 1))
            continue
        if not isinstance(pair, list) or len(pair) != 2:
            raise DocumentError(f"{where}.summands[{i}]: expected [atom, multiplicity]")
        summands.append((pair[0], pair[1]))
    for atom_id, mult in summands:
        if atom_id not in atoms:
            raise DocumentError(f"{where}: unknown atom {atom_id!r}")
        if not isinstance(mult, int) or mult < 1:
            raise DocumentError(f"{where}: multiplicity of {atom_id!r} must be >= 1")
    try:
        rep = FormalRep.of(summands, entry.get("duality"))
        if rep.declared_duality is not None:
            rep.validate(atoms)
        return rep
    except DomainError as exc:
        raise DocumentError(f"{where}: {exc}") from None


def _parse_case(entry, doc: ParsedDocument, where: str) -> CaseEntry:
    _check_keys(
        entry,
        (
            "id",
            "kind",
            "table",
            "m",
            "n",
            "psi",
            "psi0",
            "mu",
            "discriminant_data",
            "trivial_atom",
            "twist_class",
        ),
        where,
    )
    table_id = _need(entry, "table", where)
    table = doc.table(table_id)
    kind = _need(entry, "kind", where)
    if kind not in ALL_CASES:
        raise DocumentError(f"{where}: unknown case kind {kind!r}")
    psi = entry.get("psi")
    psi0 = entry.get("psi0")
    try:
        descriptor = CaseDescriptor(
            kind,
            psi=_parse_psi(psi, table.field, where) if psi else None,
            psi0=_parse_psi(psi0, table.field, where) if psi0 else None,
            mu=entry.get("mu"),
            discriminant_data=entry.get("discriminant_data"),
            trivial_atom=entry.get("trivial_atom"),
        )
    except DomainError as exc:
        raise DocumentError(f"{where}: {exc}") from None
    for param_key in ("m", "n"):
        param_id = _need(entry, param_key, where)
        if param_id not in doc.parameters:
            raise DocumentError(f"{where}: unknown local parameter {param_id!r}")
        if doc.parameters[param_id][1] != table_id:
            raise DocumentError(
                f"{where}: parameter {param_id!r} belongs to a different table"
            )
    return CaseEntry(
        descriptor, table_id, entry["m"], entry["n"], entry.get("twist_class")
    )


def _parse_global(entry, doc: ParsedDocument, where: str) -> GlobalParameter:
    _check_keys(entry, ("id", "places", "atoms"), where)
    places = []
    for i, pl in enumerate(_need(entry, "places", where)):
        pwhere = f"{where}.places[{i}]"
        _check_keys(pl, ("label", "table"), pwhere)
        table = doc.table(_need(pl, "table", pwhere))
        places.append(Place(_need(pl, "label", pwhere), table.field, table.atoms))
    place_by_label = {p.label: p for p in places}
    atoms = []
    for i, ga in enumerate(_need(entry, "atoms", where)):
        gwhere = f"{where}.atoms[{i}]"
        _check_keys(ga, ("id", "dim", "duality", "eps_half", "local"), gwhere)
        local = {}
        for label, rep_entry in ga.get("local", {}).items():
            if label not in place_by_label:
                raise DocumentError(f"{gwhere}: unknown place {label!r}")
            rep = _parse_rep(rep_entry, place_by_label[label].atoms, f"{gwhere}.local[{label}]")
            local[label] = rep
        try:
            atoms.append(
                GlobalAtom(
                    _need(ga, "id", gwhere),
                    _need(ga, "dim", gwhere),
                    _need(ga, "duality", gwhere),
                    _sign(_need(ga, "eps_half", gwhere), gwhere),
                    local,
                )
            )
        except DomainError as exc:
            raise DocumentError(f"{gwhere}: {exc}") from None
    try:
        return GlobalParameter(atoms, places)
    except DomainError as exc:
        raise DocumentError(f"{where}: {exc}") from None


_QUERY_KEYS = {
    "classify": ("query", "target", "metaplectic", "disc"),
    "component-group": ("query", "target", "plus"),
    "distinguished": ("query", "target"),
    "check-psi-consistency": ("query", "target", "twist_class"),
    "check-axioms": ("query", "target"),
    "metaplectic-conjugate": ("query", "target", "chi", "twist_class"),
    "global-multiplicity": ("query", "target", "mode", "eta"),
    "enumerate-automorphic": ("query", "target", "mode"),
    "coherence": ("query", "signs"),
    "unramified": ("query", "field", "pairs", "m", "n"),
}


def _parse_query(entry, doc: ParsedDocument, where: str) -> Dict[str, Any]:
    name = _need(entry, "query", where)
    if name not in SUPPORTED_QUERIES:
        raise DocumentError(f"{where}: unknown query {name!r}")
    _check_keys(entry, _QUERY_KEYS[name], where)
    return dict(entry)


def parse_document(raw: bytes | str | Mapping[str, Any]) -> ParsedDocument:
    """Parse and validate a version-1 document; raises DocumentError."""
    if isinstance(raw, (bytes, str)):
        payload = raw if isinstance(raw, bytes) else raw.encode("utf-8")
        digest = hashlib.sha256(payload).hexdigest()
        try:
            data = json.loads(payload)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from None
    else:
        data = raw
        canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
        digest = hashlib.sha256(canonical.encode("utf-8")).hexdigest()
    _check_keys(data, _SECTIONS, "document")
    if _need(data, "version", "document") != 1:
        raise DocumentError("unsupported document version (expected 1)")

    doc = ParsedDocument(digest=digest)

    def _entries(section: str):
        entries = data.get(section, [])
        if not isinstance(entries, list):
            raise DocumentError(f"document.{section}: expected a list")
        return entries

    for i, entry in enumerate(_entries("field_models")):
        where = f"field_models[{i}]"
        model = _parse_field_model(entry, where)
        model_id = _need(entry, "id", where)
        if model_id in doc.fields:
            raise DocumentError(f"{where}: duplicate id {model_id!r}")
        doc.fields[model_id] = model

    for i, entry in enumerate(_entries("atoms")):
        where = f"atoms[{i}]"
        atom, field_id = _parse_atom(entry, doc.fields, where)
        if atom.id in doc.atoms:
            raise DocumentError(f"{where}: duplicate id {atom.id!r}")
        doc.atoms[atom.id] = (atom, field_id)

    for i, entry in enumerate(_entries("epsilon_tables")):
        where = f"epsilon_tables[{i}]"
        table_id = _need(entry, "id", where)
        if table_id in doc.tables:
            raise DocumentError(f"{where}: duplicate id {table_id!r}")
        doc.tables[table_id] = _parse_table(entry, doc, where)

    for i, entry in enumerate(_entries("local_parameters")):
        where = f"local_parameters[{i}]"
        _check_keys(entry, ("id", "table", "duality", "summands"), where)
        param_id = _need(entry, "id", where)
        if param_id in doc.parameters:
            raise DocumentError(f"{where}: duplicate id {param_id!r}")
        table_id = _need(entry, "table", where)
        table = doc.table(table_id)
        rep = _parse_rep(
            {"duality": entry.get("duality"), "summands": entry["summands"]},
            table.atoms,
            where,
        )
        doc.parameters[param_id] = (rep, table_id)

    for i, entry in enumerate(_entries("cases")):
        where = f"cases[{i}]"
        case_id = _need(entry, "id", where)
        if case_id in doc.cases:
            raise DocumentError(f"{where}: duplicate id {case_id!r}")
        doc.cases[case_id] = _parse_case(entry, doc, where)

    for i, entry in enumerate(_entries("global_parameters")):
        where = f"global_parameters[{i}]"
        phi_id = _need(entry, "id", where)
        if phi_id in doc.globals_:
            raise DocumentError(f"{where}: duplicate id {phi_id!r}")
        doc.globals_[phi_id] = _parse_global(entry, doc, where)

    for i, entry in enumerate(_entries("queries")):
        doc.queries.append(_parse_query(entry, doc, f"queries[{i}]"))

    return doc
