"""Multi-file workspace: reference binding and include resolution.

Include/IncludeAll copy elements into a document's effective list;
Import only makes another system's names visible for reference binding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import parser
from .model import (
    Actor,
    DataEntity,
    Diagnostic,
    Element,
    IncludeDecl,
    LinguisticLanguageDecl,
    Model,
    QuickFix,
    SourceSpan,
    TextEdit,
    UseCase,
)
from .printer import print_element

MAX_INCLUDE_DEPTH = 16


@dataclass
class Workspace:
    systems: dict = field(default_factory=dict)  # system id -> Model
    parse_diagnostics: dict = field(default_factory=dict)  # system id -> [Diagnostic]
    io_errors: list = field(default_factory=list)  # (system id, path, message)

    def system_of(self, model: Model) -> Optional[str]:
        for name, m in self.systems.items():
            if m is model:
                return name
        return None


def load_workspace(files: list[tuple[str, str]]) -> Workspace:
    """Parse every (systemId, path) pair; I/O failures are recorded, not raised."""
    ws = Workspace()
    for system_id, path in files:
        try:
            with open(path, encoding="utf-8") as f:
                source = f.read()
        except OSError as exc:
            ws.io_errors.append((system_id, path, str(exc)))
            continue
        add_system(ws, system_id, source, str(path))
    return ws


def add_system(ws: Workspace, system_id: str, source: str, file: str) -> Model:
    model, diags = parser.parse(source, file)
    ws.systems[system_id] = model
    ws.parse_diagnostics[system_id] = diags
    return model


@dataclass
class ResolvedModel:
    model: Model
    system_id: Optional[str]
    effective_elements: list
    diagnostics: list
    bindings: dict = field(default_factory=dict)  # (id(element), field) -> element

    @property
    def file(self) -> str:
        return self.model.file

    def binding(self, elem: Element, ref_field: str) -> Optional[Element]:
        return self.bindings.get((id(elem), ref_field))

    def index(self) -> dict:
        idx = {}
        for e in self.effective_elements:
            idx.setdefault((e.kind, e.id), e)
        return idx


def _included_elements(
    ws: Workspace,
    system_id: str,
    depth: int,
    visiting: tuple,
    diags: list,
    at_span: SourceSpan,
) -> list:
    """Transitive effective element list of a system (excluding language decls)."""
    if system_id in visiting:
        diags.append(
            Diagnostic("Error", "RSL-R004", f"Circular include involving system '{system_id}'", at_span)
        )
        return []
    if depth > MAX_INCLUDE_DEPTH:
        diags.append(
            Diagnostic("Error", "RSL-R004", f"Include nesting deeper than {MAX_INCLUDE_DEPTH}", at_span)
        )
        return []
    model = ws.systems.get(system_id)
    if model is None:
        return []
    out = [e for e in model.elements if not isinstance(e, LinguisticLanguageDecl)]
    for inc in model.includes:
        if inc.mode == "Import":
            continue
        pulled = _resolve_include(ws, inc, depth + 1, visiting + (system_id,), diags)
        if pulled is not None:
            out.extend(pulled)
    return out


def _resolve_include(
    ws: Workspace, inc: IncludeDecl, depth: int, visiting: tuple, diags: list
) -> Optional[list]:
    if inc.from_system not in ws.systems:
        diags.append(
            Diagnostic("Error", "RSL-R002", f"Unknown system '{inc.from_system}'", inc.span)
        )
        return None
    pool = _included_elements(ws, inc.from_system, depth, visiting, diags, inc.span)
    if inc.mode == "IncludeAll":
        return pool
    matches = [e for e in pool if e.kind == inc.element_kind and e.id == inc.element_id]
    if not matches:
        diags.append(
            Diagnostic(
                "Error",
                "RSL-R003",
                f"Unknown element '{inc.element_id}' of kind '{inc.element_kind}' in system '{inc.from_system}'",
                inc.span,
            )
        )
        return None
    return matches[:1]


def resolve_include_elements(ws: Workspace, inc: IncludeDecl, own_system: Optional[str] = None):
    """Elements an include would pull in, or None when unresolvable."""
    diags: list = []
    visiting = (own_system,) if own_system else ()
    pulled = _resolve_include(ws, inc, 1, visiting, diags)
    if any(d.code in ("RSL-R002", "RSL-R003", "RSL-R004") for d in diags):
        return None
    return pulled


def resolve(model: Model, ws: Workspace) -> ResolvedModel:
    """Realize includes and bind every internal reference."""
    system_id = ws.system_of(model)
    diags: list = []
    included: list = []
    imported_pools: list[list] = []
    visiting = (system_id,) if system_id else ()

    for inc in model.includes:
        if inc.mode == "Import":
            if inc.from_system not in ws.systems:
                diags.append(
                    Diagnostic("Error", "RSL-R002", f"Unknown system '{inc.from_system}'", inc.span)
                )
                continue
            imported_pools.append(
                _included_elements(ws, inc.from_system, 1, visiting, diags, inc.span)
            )
            continue
        pulled = _resolve_include(ws, inc, 1, visiting, diags)
        if pulled:
            included.extend(pulled)

    # Includes conventionally head a document, so pulled elements precede
    # the document's own; inlining an include then preserves this order.
    effective = included + list(model.elements)

    rm = ResolvedModel(model, system_id, effective, diags)
    index = rm.index()

    def lookup(kind: str, ref_id: str) -> Optional[Element]:
        hit = index.get((kind, ref_id))
        if hit is not None:
            return hit
        for pool in imported_pools:
            for e in pool:
                if e.kind == kind and e.id == ref_id:
                    return e
        return None

    def bind(elem: Element, ref_field: str, kind: str, ref_id: Optional[str], span):
        if ref_id is None:
            return
        target = lookup(kind, ref_id)
        if target is None:
            diags.append(
                Diagnostic(
                    "Error",
                    "RSL-R001",
                    f"Unresolved reference: no {kind} with id '{ref_id}'",
                    span or elem.span,
                )
            )
            return
        rm.bindings[(id(elem), ref_field)] = target

    for elem in effective:
        if isinstance(elem, Actor):
            bind(elem, "is_a", "Actor", elem.is_a, elem.is_a_span)
        elif isinstance(elem, DataEntity):
            bind(elem, "is_a", "DataEntity", elem.is_a, elem.is_a_span)
            bind(elem, "part_of", "DataEntity", elem.part_of, elem.part_of_span)
        elif isinstance(elem, UseCase):
            bind(elem, "primary_actor", "Actor", elem.primary_actor, elem.primary_actor_span)
            bind(elem, "data_entity", "DataEntity", elem.data_entity, elem.data_entity_span)
            if elem.extends_target is not None:
                target = lookup("UseCase", elem.extends_target)
                if target is None:
                    diags.append(
                        Diagnostic(
                            "Error",
                            "RSL-R001",
                            f"Unresolved reference: no UseCase with id '{elem.extends_target}'",
                            elem.extends_span or elem.span,
                        )
                    )
                else:
                    rm.bindings[(id(elem), "extends_target")] = target
                    if elem.extends_point not in target.extension_points:
                        diags.append(
                            Diagnostic(
                                "Error",
                                "RSL-R001",
                                f"Use case '{elem.extends_target}' declares no extension point '{elem.extends_point}'",
                                elem.extends_span or elem.span,
                            )
                        )
    model.resolved = True
    return rm


def inline_include_fix(inc: IncludeDecl, ws: Workspace, own_system: Optional[str] = None) -> Optional[Diagnostic]:
    """Info diagnostic offering to replace an include with the elements it pulls."""
    pulled = resolve_include_elements(ws, inc, own_system)
    if not pulled:
        return None
    if inc.mode == "Include":
        title = f"Replace this include specification by the {inc.element_kind} element specification itself."
    else:
        title = "Replace this include specification by the included element specifications themselves."
    text = "\n\n".join(print_element(e) for e in pulled)
    fix = QuickFix(title, (TextEdit(inc.span, text),))
    return Diagnostic(
        "Info",
        "RSL-I001",
        title,
        inc.span,
        fixes=(fix,),
    )
