"""Document generation: JSON, structured text, and template rendering.

All generators are gated on a valid specification: any Error-severity
diagnostic refuses generation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .model import (
    Actor,
    DataEntity,
    Diagnostic,
    FunctionalRequirement,
    LinguisticLanguageDecl,
    LinguisticRuleDecl,
    Stakeholder,
    Term,
    UseCase,
)
from .printer import print_pattern
from .template import TemplateDocument, parse_template, render
from .workspace import ResolvedModel


@dataclass
class Refusal:
    error_count: int
    first_messages: list[str]

    def __str__(self):
        lines = [f"specification has {self.error_count} error(s); generation refused"]
        lines += ["  - " + m.splitlines()[0] for m in self.first_messages]
        return "\n".join(lines)


def ensure_valid(rm: ResolvedModel, diags: list[Diagnostic]) -> Optional[Refusal]:
    """None when generation may proceed; a Refusal when errors exist."""
    errors = [d for d in diags if d.severity == "Error"]
    if not errors:
        return None
    return Refusal(len(errors), [d.message for d in errors[:3]])


# --- JSON -------------------------------------------------------------------

def _common(elem) -> dict:
    out = {"id": elem.id, "name": elem.name, "nameAlias": elem.name_alias}
    if elem.description is not None:
        out["description"] = elem.description
    return out


def _ref(rm: ResolvedModel, elem, field: str, ref_id):
    if ref_id is None:
        return None
    target = rm.binding(elem, field)
    if target is None:
        return {"id": ref_id}
    return {"id": target.id, "name": target.name_alias}


def build_json_doc(rm: ResolvedModel) -> dict:
    elements = {
        "dataEntities": [],
        "actors": [],
        "useCases": [],
        "terms": [],
        "stakeholders": [],
        "functionalRequirements": [],
        "linguisticRules": [],
    }
    for elem in rm.effective_elements:
        if isinstance(elem, DataEntity):
            entry = _common(elem)
            entry["type"] = {"type": elem.entity_type}
            entry["attributes"] = [
                {
                    "id": a.id,
                    "name": a.name,
                    "dataType": a.data_type,
                    "constraints": list(a.constraints),
                    **({"defaultValue": a.default_value} if a.default_value is not None else {}),
                }
                for a in elem.attributes
            ]
            if elem.is_a:
                entry["isA"] = elem.is_a
            if elem.part_of:
                entry["partOf"] = elem.part_of
            elements["dataEntities"].append(entry)
        elif isinstance(elem, Actor):
            entry = _common(elem)
            entry["type"] = {"type": elem.actor_type}
            if elem.is_a:
                entry["isA"] = elem.is_a
            elements["actors"].append(entry)
        elif isinstance(elem, UseCase):
            entry = _common(elem)
            entry["type"] = {"type": elem.uc_type}
            if elem.primary_actor:
                entry["primaryActor"] = _ref(rm, elem, "primary_actor", elem.primary_actor)
            if elem.data_entity:
                entry["dataEntity"] = _ref(rm, elem, "data_entity", elem.data_entity)
            entry["actions"] = list(elem.actions)
            entry["extensionPoints"] = list(elem.extension_points)
            if elem.extends_target:
                entry["extends"] = {
                    "useCase": elem.extends_target,
                    "extensionPoint": elem.extends_point,
                }
            if elem.precondition is not None:
                entry["precondition"] = elem.precondition
            elements["useCases"].append(entry)
        elif isinstance(elem, Term):
            entry = _common(elem)
            entry["type"] = {"type": elem.pos_category}
            entry["synonyms"] = list(elem.synonyms)
            elements["terms"].append(entry)
        elif isinstance(elem, Stakeholder):
            entry = _common(elem)
            entry["type"] = {"type": elem.stakeholder_type}
            if elem.stakeholder_subtype:
                entry["type"]["subtype"] = elem.stakeholder_subtype
            elements["stakeholders"].append(entry)
        elif isinstance(elem, FunctionalRequirement):
            entry = _common(elem)
            entry["type"] = {"type": elem.fr_type}
            elements["functionalRequirements"].append(entry)
        elif isinstance(elem, LinguisticRuleDecl):
            entry = _common(elem)
            entry["type"] = {"type": elem.rule_kind}
            entry["property"] = {"targetKind": elem.target_kind, "fragment": elem.fragment}
            if elem.pattern is not None:
                entry["pattern"] = print_pattern(elem.pattern)
            entry["severity"] = elem.severity
            elements["linguisticRules"].append(entry)
        elif isinstance(elem, LinguisticLanguageDecl):
            pass  # surfaced as the top-level language field

    systems = {}
    if rm.system_id is not None:
        systems[rm.system_id] = {"elements": len(rm.effective_elements)}
    return {"language": rm.model.language, "systems": systems, "elements": elements}


def generate_json(rm: ResolvedModel) -> str:
    return json.dumps(build_json_doc(rm), indent=2, ensure_ascii=False) + "\n"


# --- structured text -----------------------------------------------------------

def _text_fields(rm: ResolvedModel, elem) -> list[tuple[str, str]]:
    fields: list[tuple[str, str]] = []
    if isinstance(elem, DataEntity):
        fields.append(("type", elem.entity_type))
        if elem.attributes:
            fields.append(
                ("attributes", ", ".join(f"{a.name} ({a.data_type})" for a in elem.attributes))
            )
        if elem.is_a:
            fields.append(("isA", elem.is_a))
        if elem.part_of:
            fields.append(("partOf", elem.part_of))
    elif isinstance(elem, Actor):
        fields.append(("type", elem.actor_type))
        if elem.is_a:
            fields.append(("isA", elem.is_a))
    elif isinstance(elem, UseCase):
        fields.append(("type", elem.uc_type))
        if elem.primary_actor:
            target = rm.binding(elem, "primary_actor")
            fields.append(("primaryActor", target.name_alias if target else elem.primary_actor))
        if elem.data_entity:
            target = rm.binding(elem, "data_entity")
            fields.append(("dataEntity", target.name_alias if target else elem.data_entity))
        if elem.actions:
            fields.append(("actions", ", ".join(elem.actions)))
        if elem.extension_points:
            fields.append(("extensionPoints", ", ".join(elem.extension_points)))
        if elem.extends_target:
            fields.append(("extends", f"{elem.extends_target} on {elem.extends_point}"))
        if elem.precondition is not None:
            fields.append(("precondition", elem.precondition))
    elif isinstance(elem, Term):
        fields.append(("type", elem.pos_category))
        if elem.synonyms:
            fields.append(("synonyms", ", ".join(elem.synonyms)))
    elif isinstance(elem, Stakeholder):
        t = elem.stakeholder_type
        if elem.stakeholder_subtype:
            t += "." + elem.stakeholder_subtype
        fields.append(("type", t))
    elif isinstance(elem, FunctionalRequirement):
        fields.append(("type", elem.fr_type))
    elif isinstance(elem, LinguisticRuleDecl):
        fields.append(("type", elem.rule_kind))
        fields.append(("property", f"{elem.target_kind}.{elem.fragment}"))
        if elem.pattern is not None:
            fields.append(("pattern", print_pattern(elem.pattern)))
        fields.append(("severity", elem.severity))
    elif isinstance(elem, LinguisticLanguageDecl):
        fields.append(("language", elem.language))
    if elem.description is not None:
        fields.append(("description", elem.description))
    return fields


def generate_text(rm: ResolvedModel) -> str:
    blocks = []
    for elem in rm.effective_elements:
        lines = [f"== {elem.kind}: {elem.name_alias} ({elem.id}) =="]
        lines += [f"{key}: {value}" for key, value in _text_fields(rm, elem)]
        blocks.append("\n".join(lines))
    if not blocks:
        return ""
    return "\n\n".join(blocks) + "\n"


# --- templates -------------------------------------------------------------------

def template_context(rm: ResolvedModel) -> dict:
    doc = build_json_doc(rm)
    # Element arrays are reachable both as elements.x and directly as x.
    root = dict(doc)
    root.update(doc["elements"])
    return root


def render_template(tpl: TemplateDocument | str, rm: ResolvedModel, strict: bool = True) -> str:
    if isinstance(tpl, str):
        tpl = parse_template(tpl)
    return render(tpl, template_context(rm), strict=strict)
