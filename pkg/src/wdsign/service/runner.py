"""Query dispatch: one entry point shared by the CLI and the HTTP service.

Reports are deterministic: all collections follow document declaration order,
signs render as "+1"/"-1" and characters as basis-value vectors.  JSON
reports embed the input digest.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from ..errors import DocumentError, DomainError
from ..documents import ParsedDocument, SUPPORTED_QUERIES
from ..characters import (
    CASE_HERMITIAN,
    CASE_METAPLECTIC,
    CharacterOnA,
    distinguished,
    hermitian_psi_change_check,
    metaplectic_conjugate,
    metaplectic_psi_prop_check,
    pure_inner_form_of,
)
from ..classify import UnramifiedRep, classify, unramified_classify
from ..components import component_group
from ..globalparams import (
    GlobalCharacterChoice,
    coherence,
    enumerate_automorphic,
    metaplectic_multiplicity,
    multiplicity,
)
from ..reps import SYMPLECTIC

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INCOMPLETE = 3


def _sign_str(value: int) -> str:
    return "+1" if value == 1 else "-1"


def _char_json(char: CharacterOnA) -> Dict[str, Any]:
    return {
        "basis": list(char.domain.basis_ids()),
        "values": [_sign_str(v) for v in char.values_on_basis],
    }


def _twist_element(table, label: str):
    if label is None:
        raise DocumentError("a twist_class is required for this query")
    if label in table.atoms:
        return table.atoms.get(label)
    return table.field.square_classes.element(label)


def _query_entries(doc: ParsedDocument, name: str) -> List[Dict[str, Any]]:
    return [q for q in doc.queries if q["query"] == name]


def run_query(doc: ParsedDocument, query: str, mode: Optional[str] = None) -> Dict[str, Any]:
    """Execute one query against a parsed document and build its report."""
    if query not in SUPPORTED_QUERIES:
        raise DocumentError(f"unknown query {query!r}")
    handler = _HANDLERS[query]
    results = handler(doc, _query_entries(doc, query), mode)
    report = {"query": query, "input_digest": doc.digest, "results": results}
    if mode is not None:
        report["mode"] = mode
    return report


def render_text(report: Dict[str, Any]) -> str:
    lines = []
    for result in report["results"]:
        lines.extend(result["text"])
    return "\n".join(lines)


def _classify(doc, entries, mode):
    if not entries:
        entries = [{"query": "classify", "target": t} for t in doc.parameters]
    results = []
    for entry in entries:
        rep, table = doc.parameter(entry["target"])
        case = classify(
            rep,
            table.field,
            table.atoms,
            metaplectic=bool(entry.get("metaplectic")),
            expected_disc=entry.get("disc"),
        )
        line = f"{entry['target']}: {case.render()}"
        extra = {}
        if case.ambiguous:
            line += " (two parameters share this representation)"
            extra["ambiguous"] = True
        if case.disc is not None:
            disc = case.disc.to_class().label()
            line += f" disc={disc}"
            extra["disc"] = disc
        results.append(
            {
                "target": entry["target"],
                "group": case.render(),
                "family": case.family,
                **extra,
                "text": [line],
            }
        )
    return results


def _component_group(doc, entries, mode):
    if not entries:
        entries = [{"query": "component-group", "target": t} for t in doc.parameters]
    results = []
    for entry in entries:
        rep, table = doc.parameter(entry["target"])
        use_plus = bool(entry.get("plus"))
        group = component_group(rep, table.atoms, use_plus=use_plus)
        name = "A+" if use_plus else "A"
        line = (
            f"{entry['target']}: {name} = {group.render()}, "
            f"basis [{', '.join(group.basis_ids())}]"
        )
        results.append(
            {
                "target": entry["target"],
                "group": group.render(),
                "order": group.valid_order if use_plus else group.order,
                "basis": list(group.basis_ids()),
                "plus": use_plus,
                "text": [line],
            }
        )
    return results


def _distinguished(doc, entries, mode):
    if not entries:
        entries = [{"query": "distinguished", "target": c} for c in doc.cases]
    results = []
    for entry in entries:
        case = doc.cases.get(entry["target"])
        if case is None:
            raise DocumentError(f"unknown case {entry['target']!r}")
        table = doc.table(case.table_id)
        m, _ = doc.parameters[case.m_id]
        n, _ = doc.parameters[case.n_id]
        char = distinguished(case.descriptor, m, n, table)
        form = pure_inner_form_of(char)
        line = f"{entry['target']}: {char.render()} [{form}]"
        results.append(
            {
                "target": entry["target"],
                "character": _char_json(char),
                "pure_inner_form": form,
                "text": [line],
            }
        )
    return results


def _check_psi(doc, entries, mode):
    if not entries:
        entries = [
            {"query": "check-psi-consistency", "target": c}
            for c, ce in doc.cases.items()
            if ce.descriptor.kind in (CASE_HERMITIAN, CASE_METAPLECTIC)
        ]
    results = []
    for entry in entries:
        case = doc.cases.get(entry["target"])
        if case is None:
            raise DocumentError(f"unknown case {entry['target']!r}")
        table = doc.table(case.table_id)
        m, _ = doc.parameters[case.m_id]
        n, _ = doc.parameters[case.n_id]
        kind = case.descriptor.kind
        if kind == CASE_HERMITIAN:
            report = hermitian_psi_change_check(m, n, case.descriptor.psi0, table)
        elif kind == CASE_METAPLECTIC:
            twist_class = entry.get("twist_class") or case.twist_class
            c = _twist_element(table, twist_class)
            report = metaplectic_psi_prop_check(
                m, n, c, table, trivial_atom=case.descriptor.trivial_atom
            )
        else:
            raise DocumentError(
                f"case {entry['target']!r}: psi-consistency checks cover the "
                "hermitian and metaplectic cases"
            )
        status = "OK" if report.ok else report.render()
        results.append(
            {
                "target": entry["target"],
                "ok": report.ok,
                "violations": [v.render() for v in report.violations],
                "text": [f"{entry['target']}: {status}"],
            }
        )
    return results


def _check_axioms(doc, entries, mode):
    if not entries:
        entries = [{"query": "check-axioms", "target": t} for t in doc.tables]
    results = []
    for entry in entries:
        table = doc.table(entry["target"])
        report = table.validate()
        lines = [f"{entry['target']}: {'OK' if report.ok else 'violations found'}"]
        lines.extend(f"  {v.render()}" for v in report.violations)
        results.append(
            {
                "target": entry["target"],
                "ok": report.ok,
                "violations": [v.render() for v in report.violations],
                "axioms_violated": list(report.axioms_violated()),
                "text": lines,
            }
        )
    return results


def _metaplectic_conjugate(doc, entries, mode):
    if not entries:
        entries = [
            {"query": "metaplectic-conjugate", "target": t}
            for t, (rep, table_id) in doc.parameters.items()
            if rep.declared_duality == SYMPLECTIC
        ]
    results = []
    for entry in entries:
        rep, table = doc.parameter(entry["target"])
        group = component_group(rep, table.atoms)
        chi_values = entry.get("chi")
        if chi_values is None:
            chi = CharacterOnA.trivial(group)
        else:
            if len(chi_values) != group.rank:
                raise DocumentError(
                    f"chi for {entry['target']!r} must have {group.rank} values"
                )
            chi = CharacterOnA(group, tuple(chi_values))
        c = _twist_element(table, entry.get("twist_class", "u"))
        twisted, new_chi = metaplectic_conjugate(rep, chi, c, table)
        line = (
            f"{entry['target']}: M(c) = {twisted.render()}, chi' = {new_chi.render()}"
        )
        results.append(
            {
                "target": entry["target"],
                "twisted": twisted.render(),
                "character": _char_json(new_chi),
                "text": [line],
            }
        )
    return results


def _eta_from_entry(phi, eta_spec) -> GlobalCharacterChoice:
    per_place = {}
    for label, values in (eta_spec or {}).items():
        group = phi.local_component_group(label)
        if len(values) != group.rank:
            raise DocumentError(
                f"eta at place {label!r} must have {group.rank} values"
            )
        per_place[label] = CharacterOnA(group, tuple(values))
    return GlobalCharacterChoice(per_place)


def _global_multiplicity(doc, entries, mode):
    if not entries:
        entries = [
            {"query": "global-multiplicity", "target": p} for p in doc.globals_
        ]
    results = []
    for entry in entries:
        phi = doc.global_parameter(entry["target"])
        query_mode = entry.get("mode") or mode or "linear"
        eta = _eta_from_entry(phi, entry.get("eta"))
        counter = multiplicity if query_mode == "linear" else metaplectic_multiplicity
        value = counter(phi, eta)
        label = eta.label_string([p.label for p in phi.places]) or "(trivial)"
        line = f"{entry['target']}: m({label}) = {value} [{query_mode}]"
        results.append(
            {
                "target": entry["target"],
                "mode": query_mode,
                "eta": label,
                "multiplicity": value,
                "text": [line],
            }
        )
    return results


def _enumerate(doc, entries, mode):
    if not entries:
        entries = [
            {"query": "enumerate-automorphic", "target": p} for p in doc.globals_
        ]
    results = []
    for entry in entries:
        phi = doc.global_parameter(entry["target"])
        query_mode = entry.get("mode") or mode or "linear"
        choices = enumerate_automorphic(phi, query_mode)
        order = [p.label for p in phi.places]
        labels = [c.label_string(order) or "(trivial)" for c in choices]
        lines = [
            f"{entry['target']}: {len(labels)} automorphic characters [{query_mode}]"
        ]
        lines.extend(f"  {label}" for label in labels)
        results.append(
            {
                "target": entry["target"],
                "mode": query_mode,
                "count": len(labels),
                "labels": labels,
                "text": lines,
            }
        )
    return results


def _coherence(doc, entries, mode):
    if not entries:
        raise DocumentError("the coherence query needs a 'signs' entry in queries")
    results = []
    for i, entry in enumerate(entries):
        signs = entry.get("signs")
        if not isinstance(signs, dict):
            raise DocumentError("coherence query needs a signs object")
        try:
            verdict = coherence(signs)
        except DomainError as exc:
            raise DocumentError(str(exc)) from None
        line = f"coherence: {verdict.render()} (product {_sign_str(verdict.product)})"
        results.append(
            {
                "target": f"coherence[{i}]",
                "coherent": verdict.coherent,
                "product": _sign_str(verdict.product),
                "derivative_case": verdict.derivative_case,
                "text": [line],
            }
        )
    return results


def _unramified(doc, entries, mode):
    if not entries:
        raise DocumentError(
            "the unramified query needs entries with field, pairs, m, n"
        )
    results = []
    for entry in entries:
        field_id = entry.get("field")
        if field_id not in doc.fields:
            raise DocumentError(f"unknown field model {field_id!r}")
        try:
            u = UnramifiedRep(tuple(entry.get("pairs", [])), entry.get("m", 0), entry.get("n", 0))
            options = unramified_classify(u, doc.fields[field_id])
        except DomainError as exc:
            raise DocumentError(str(exc)) from None
        parts = [f"{duality}: {group.render()}" for duality, group in options]
        line = (
            f"unramified(pairs={len(u.pairs)}, m={u.m}, n={u.n}): "
            + ("; ".join(parts) if parts else "no selfdual or conjugate-dual structure")
        )
        results.append(
            {
                "target": f"unramified(m={u.m}, n={u.n})",
                "options": [
                    {"duality": duality, "component_group": group.render()}
                    for duality, group in options
                ],
                "text": [line],
            }
        )
    return results


_HANDLERS = {
    "classify": _classify,
    "component-group": _component_group,
    "distinguished": _distinguished,
    "check-psi-consistency": _check_psi,
    "check-axioms": _check_axioms,
    "metaplectic-conjugate": _metaplectic_conjugate,
    "global-multiplicity": _global_multiplicity,
    "enumerate-automorphic": _enumerate,
    "coherence": _coherence,
    "unramified": _unramified,
}
