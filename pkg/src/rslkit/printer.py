"""Canonical text rendering of models and elements.

parse(print_model(m)) is structurally equal to m; this backs the
element-creating quick fixes and the round-trip tests.
"""

from __future__ import annotations

from .model import (
    Actor,
    AltPart,
    DataEntity,
    Element,
    FragmentRefPart,
    FunctionalRequirement,
    IncludeDecl,
    LinguisticLanguageDecl,
    LinguisticRuleDecl,
    LitPart,
    Model,
    PatternExpr,
    PosPart,
    Stakeholder,
    Term,
    UseCase,
)


def quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def print_pattern(pattern: PatternExpr) -> str:
    def atom(part):
        if isinstance(part, PosPart):
            return part.category
        if isinstance(part, LitPart):
            return quote(part.text)
        if isinstance(part, FragmentRefPart):
            return f"{part.element_kind}.{part.fragment}"
        raise TypeError(part)

    rendered = []
    for part in pattern.parts:
        if isinstance(part, AltPart):
            rendered.append("(" + " | ".join(atom(o) for o in part.options) + ")")
        else:
            rendered.append(atom(part))
    return " + ".join(rendered)


def print_element(elem: Element) -> str:
    head = elem.kind + " " + elem.id
    if elem.name is not None:
        head += " " + quote(elem.name)
    body: list[str] = []

    if isinstance(elem, DataEntity):
        head += " : " + elem.entity_type
        for a in elem.attributes:
            line = f"attribute {a.id} {quote(a.name)} : {a.data_type}"
            opts = []
            if a.constraints:
                opts.append("constraints (" + ", ".join(a.constraints) + ")")
            if a.default_value is not None:
                opts.append("defaultValue " + quote(a.default_value))
            if opts:
                line += " [" + " ".join(opts) + "]"
            body.append(line)
        if elem.is_a:
            body.append("isA " + elem.is_a)
        if elem.part_of:
            body.append("partOf " + elem.part_of)
    elif isinstance(elem, Actor):
        head += " : " + elem.actor_type
        if elem.is_a:
            body.append("isA " + elem.is_a)
    elif isinstance(elem, UseCase):
        head += " : " + elem.uc_type
        if elem.primary_actor:
            body.append("primaryActor " + elem.primary_actor)
        if elem.data_entity:
            body.append("dataEntity " + elem.data_entity)
        if elem.actions:
            body.append("actions " + ", ".join(elem.actions))
        if elem.extension_points:
            body.append("extensionPoints " + ", ".join(elem.extension_points))
        if elem.extends_target:
            body.append(f"extends {elem.extends_target} onExtensionPoint {elem.extends_point}")
        if elem.precondition is not None:
            body.append("precondition " + quote(elem.precondition))
    elif isinstance(elem, Term):
        head += " : " + elem.pos_category
        if elem.synonyms:
            body.append("synonyms " + ", ".join(quote(s) for s in elem.synonyms))
    elif isinstance(elem, LinguisticRuleDecl):
        head += " : Syntax"
        body.append(f"property {elem.target_kind}.{elem.fragment}")
        if elem.pattern is not None:
            body.append("pattern " + print_pattern(elem.pattern))
        body.append("severity " + elem.severity)
    elif isinstance(elem, LinguisticLanguageDecl):
        head += " : " + elem.language
    elif isinstance(elem, Stakeholder):
        head += " : " + elem.stakeholder_type
        if elem.stakeholder_subtype:
            head += "." + elem.stakeholder_subtype
    elif isinstance(elem, FunctionalRequirement):
        head += " : " + elem.fr_type

    if elem.description is not None:
        body.append("description " + quote(elem.description))

    if not body:
        return head
    return head + " [\n" + "\n".join("  " + line for line in body) + "\n]"


def print_include(inc: IncludeDecl) -> str:
    if inc.mode == "Include":
        return f"Include {inc.element_kind} fromSystem {inc.from_system} element {inc.element_id}"
    return f"{inc.mode} fromSystem {inc.from_system}"


def print_model(model: Model) -> str:
    chunks = [print_include(inc) for inc in model.includes]
    chunks += [print_element(e) for e in model.elements]
    if not chunks:
        return ""
    return "\n\n".join(chunks) + "\n"
