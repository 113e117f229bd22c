"""Customized semantic checks and the check scheduler.

Three checks beyond the grammar: unique element IDs, glossary-term
consistency, and acyclic is-a/part-of hierarchies. run_all_checks merges
their output with parse, resolution, linguistic and include diagnostics
into one deterministically ordered list.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .lexicon import Lexicon, analyze, builtin_lexicon
from .model import (
    Actor,
    DataEntity,
    Diagnostic,
    LinguisticRuleDecl,
    QuickFix,
    SourceSpan,
    Term,
    TextEdit,
)
from .rules import check_linguistic_rules
from .workspace import ResolvedModel, Workspace, inline_include_fix


# --- duplicate IDs ----------------------------------------------------------

def check_unique_ids(rm: ResolvedModel) -> list[Diagnostic]:
    groups: dict[str, list] = {}
    for elem in rm.effective_elements:
        groups.setdefault(elem.id, []).append(elem)
    diags = []
    for elem_id, group in groups.items():
        if len(group) < 2:
            continue
        for n, elem in enumerate(group, start=1):
            span = elem.id_span or elem.span
            related = tuple(
                (other.id_span or other.span, f"'{elem_id}' is also defined here")
                for other in group
                if other is not elem
            )
            fixes = ()
            if n >= 2 and elem.id_span is not None:
                new_id = f"{elem_id}_{n}"
                fixes = (
                    QuickFix(f"Rename to '{new_id}'", (TextEdit(elem.id_span, new_id),)),
                )
            diags.append(
                Diagnostic(
                    "Error",
                    "RSL-V001",
                    f"Duplicate element ID '{elem_id}'",
                    span,
                    related=related,
                    fixes=fixes,
                )
            )
    return diags


# --- glossary ----------------------------------------------------------------

@dataclass
class GlossaryIndex:
    entries: dict = field(default_factory=dict)  # lower synonym -> (main word, Term)
    diagnostics: list = field(default_factory=list)


def build_glossary(rm: ResolvedModel) -> GlossaryIndex:
    idx = GlossaryIndex()
    terms = [e for e in rm.effective_elements if isinstance(e, Term)]
    mains = {t.name.lower(): t for t in terms if t.name}
    for term in terms:
        if not term.name:
            continue
        for syn in term.synonyms:
            key = syn.lower()
            if key in mains and mains[key] is not term:
                idx.diagnostics.append(
                    Diagnostic(
                        "Error",
                        "RSL-C002",
                        f"Synonym '{syn}' of term '{term.id}' is the main word of term '{mains[key].id}'",
                        term.span,
                    )
                )
                continue
            existing = idx.entries.get(key)
            if existing is not None and existing[0].lower() != term.name.lower():
                idx.diagnostics.append(
                    Diagnostic(
                        "Error",
                        "RSL-C001",
                        f"Synonym '{syn}' maps to both '{existing[0]}' and '{term.name}'",
                        term.span,
                    )
                )
                continue
            idx.entries.setdefault(key, (term.name, term))
    return idx


def _fragment_file_span(elem, fragment: str, value: str) -> Optional[SourceSpan]:
    """Content span of a fragment, only when token offsets map 1:1 to the file."""
    span = elem.fragment_span(fragment)
    if span is None or span.length != len(value):
        return None  # escapes shifted the mapping; no precise edits
    return span


def check_glossary(
    rm: ResolvedModel, lex: Lexicon, glossary: Optional[GlossaryIndex] = None, scan_ids: bool = False
) -> list[Diagnostic]:
    glossary = glossary or build_glossary(rm)
    diags = []
    fragments = ["name", "description"] + (["id"] if scan_ids else [])
    for elem in rm.effective_elements:
        for fragment in fragments:
            value = elem.fragment_value(fragment)
            if not value:
                continue
            base = _fragment_file_span(elem, fragment, value)
            for token in analyze(value, lex):
                hit = glossary.entries.get(token.surface.lower()) or glossary.entries.get(token.lemma)
                if hit is None:
                    continue
                main, _term = hit
                replacement = main
                if token.capitalized and replacement:
                    replacement = replacement[0].upper() + replacement[1:]
                message = f"Replace the word '{token.surface}' by the main word '{main}'"
                if base is not None:
                    span = SourceSpan(
                        base.file,
                        base.start_line,
                        base.start_col + token.start,
                        base.start_line,
                        base.start_col + token.end,
                        base.offset + token.start,
                        token.end - token.start,
                    )
                    fixes = (QuickFix(message, (TextEdit(span, replacement),)),)
                else:
                    span = elem.fragment_span(fragment) or elem.span
                    fixes = ()
                diags.append(Diagnostic("Warning", "RSL-V002", message, span, fixes=fixes))
    return diags


# --- hierarchy cycles ---------------------------------------------------------

def strongly_connected_components(graph: dict) -> list[list]:
    """Iterative Tarjan over an adjacency dict {node: [successor, ...]}."""
    index_of: dict = {}
    lowlink: dict = {}
    on_stack: set = set()
    stack: list = []
    sccs: list[list] = []
    counter = [0]

    for root in graph:
        if root in index_of:
            continue
        work = [(root, iter(graph.get(root, ())))]
        index_of[root] = lowlink[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for succ in it:
                if succ not in graph:
                    continue
                if succ not in index_of:
                    index_of[succ] = lowlink[succ] = counter[0]
                    counter[0] += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(graph.get(succ, ()))))
                    advanced = True
                    break
                if succ in on_stack:
                    lowlink[node] = min(lowlink[node], index_of[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index_of[node]:
                scc = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    scc.append(w)
                    if w == node:
                        break
                sccs.append(scc)
    return sccs


def cycle_nodes(graph: dict) -> set:
    """Nodes lying on at least one directed cycle."""
    flagged = set()
    for scc in strongly_connected_components(graph):
        if len(scc) > 1:
            flagged.update(scc)
    for node, succs in graph.items():
        if node in succs:
            flagged.add(node)
    return flagged


def check_hierarchy_cycles(rm: ResolvedModel) -> list[Diagnostic]:
    diags = []
    relations = []  # (kind, relation field, span field)
    relations.append(("Actor", "is_a", "is_a_span"))
    relations.append(("DataEntity", "is_a", "is_a_span"))
    relations.append(("DataEntity", "part_of", "part_of_span"))

    order = {id(e): i for i, e in enumerate(rm.effective_elements)}
    for kind, rel, span_field in relations:
        nodes = [e for e in rm.effective_elements if e.kind == kind]
        graph = {id(e): [] for e in nodes}
        by_key = {id(e): e for e in nodes}
        for e in nodes:
            target = rm.binding(e, rel)
            if target is not None and id(target) in graph:
                graph[id(e)].append(id(target))
        for key in sorted(cycle_nodes(graph), key=lambda k: order[k]):
            elem = by_key[key]
            span = getattr(elem, span_field, None) or elem.span
            target_id = getattr(elem, rel)
            keyword = "isA" if rel == "is_a" else "partOf"
            fixes = ()
            if span is not None and getattr(elem, span_field, None) is not None:
                fixes = (
                    QuickFix(
                        f"Remove '{keyword} {target_id}' to break the cycle",
                        (TextEdit(span, ""),),
                    ),
                )
            diags.append(
                Diagnostic(
                    "Error",
                    "RSL-V003",
                    f"Cycle in hierarchy of {kind} '{elem.id}'",
                    span,
                    fixes=fixes,
                )
            )
    return diags


# --- scheduler ----------------------------------------------------------------

def pick_lexicon(language: str, overrides: Optional[dict] = None) -> Optional[Lexicon]:
    if overrides and language in overrides:
        return overrides[language]
    return builtin_lexicon(language)


def run_all_checks(
    rm: ResolvedModel,
    ws: Optional[Workspace] = None,
    lexicons: Optional[dict] = None,
) -> list[Diagnostic]:
    """Full pipeline: parse + resolution + custom + linguistic + includes."""
    diags: list[Diagnostic] = []
    if ws is not None and rm.system_id is not None:
        diags.extend(ws.parse_diagnostics.get(rm.system_id, ()))
    diags.extend(rm.diagnostics)
    diags.extend(check_unique_ids(rm))

    language = rm.model.language
    lex = pick_lexicon(language, lexicons)
    glossary = build_glossary(rm)
    diags.extend(glossary.diagnostics)
    if lex is None:
        diags.append(
            Diagnostic(
                "Error",
                "RSL-C004",
                f"No lexicon available for language '{language}'; linguistic rules skipped",
                (rm.model.language_decl.span if rm.model.language_decl else None) or _model_span(rm),
            )
        )
        glossary_lex = Lexicon(language=language)
    else:
        glossary_lex = lex
    diags.extend(check_glossary(rm, glossary_lex, glossary))
    diags.extend(check_hierarchy_cycles(rm))

    if lex is not None:
        rules = [e for e in rm.effective_elements if isinstance(e, LinguisticRuleDecl)]
        diags.extend(check_linguistic_rules(rm, rules, lex))

    if ws is not None:
        for inc in rm.model.includes:
            if inc.mode == "Import":
                continue
            info = inline_include_fix(inc, ws, rm.system_id)
            if info is not None:
                diags.append(info)

    return finalize(diags)


def _model_span(rm: ResolvedModel) -> SourceSpan:
    return rm.model.end_span or SourceSpan(rm.file, 1, 1, 1, 1, 0, 0)


def finalize(diags: list[Diagnostic]) -> list[Diagnostic]:
    """Deterministic order by (file, offset, code); exact duplicates collapsed."""
    seen = set()
    out = []
    for d in sorted(diags, key=Diagnostic.sort_key):
        key = (d.code, d.span, d.message)
        if key in seen:
            continue
        seen.add(key)
        out.append(d)
    return out
