"""Batch command line: check, fix, gen.

Exit codes: 0 no errors, 1 error diagnostics present (or generation
refused), 2 usage or I/O failure.
"""

from __future__ import annotations

import argparse
import difflib
import json
import sys
from pathlib import Path

from .checks import run_all_checks
from .docgen import ensure_valid, generate_json, generate_text, render_template
from .lexicon import load_lexicon
from .model import Diagnostic, OverlappingEdits, TextEdit, apply_edits
from .template import ExpressionTypeError, TemplateSyntaxError, UnresolvedTags, parse_template
from .workspace import Workspace, add_system, resolve

AUTO_FIX_CODES = {"RSL-V001", "RSL-V002", "RSL-V003", "RSL-I001"}


class UsageError(Exception):
    pass


def parse_mapping(pairs: list[str], what: str) -> dict:
    out = {}
    for pair in pairs or ():
        name, sep, value = pair.partition("=")
        if not sep or not name or not value:
            raise UsageError(f"bad {what} mapping '{pair}' (expected name=value)")
        out[name] = value
    return out


def read_manifest(path: str) -> dict:
    mapping = {}
    base = Path(path).parent
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read manifest: {exc}")
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, rel = line.partition("=")
        if not sep:
            raise UsageError(f"bad manifest line '{line}'")
        mapping[name.strip()] = str(base / rel.strip())
    return mapping


def build_workspace(paths: list[str], args, sources: dict | None = None):
    """Returns (workspace, [(systemId, path)] target documents)."""
    mapping = {}
    if getattr(args, "manifest", None):
        mapping.update(read_manifest(args.manifest))
    mapping.update(parse_mapping(getattr(args, "system", None), "--system"))
    path_to_name = {str(Path(p)): name for name, p in mapping.items()}

    ws = Workspace()
    targets = []

    def system_name(path: str) -> str:
        return path_to_name.get(str(Path(path)), Path(path).stem)

    seen = set()
    for path in paths:
        name = system_name(path)
        if name in seen:
            continue
        seen.add(name)
        text = (sources or {}).get(str(Path(path)))
        if text is None:
            try:
                text = Path(path).read_text(encoding="utf-8")
            except OSError as exc:
                raise UsageError(f"cannot read '{path}': {exc}")
        add_system(ws, name, text, str(path))
        targets.append((name, str(Path(path))))
    for name, path in mapping.items():
        if name in seen:
            continue
        seen.add(name)
        text = (sources or {}).get(str(Path(path)))
        if text is None:
            try:
                text = Path(path).read_text(encoding="utf-8")
            except OSError as exc:
                raise UsageError(f"cannot read '{path}': {exc}")
        add_system(ws, name, text, str(Path(path)))
    return ws, targets


def load_lexicon_overrides(args) -> dict:
    overrides = {}
    for lang, path in parse_mapping(getattr(args, "lexicon", None), "--lexicon").items():
        suffix_path = path + ".rules" if Path(path + ".rules").exists() else None
        try:
            overrides[lang] = load_lexicon(path, suffix_path, language=lang)
        except OSError as exc:
            raise UsageError(f"cannot read lexicon '{path}': {exc}")
    return overrides


def check_all(ws: Workspace, targets, lexicons) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    for name, _path in targets:
        rm = resolve(ws.systems[name], ws)
        diags.extend(run_all_checks(rm, ws, lexicons))
    return diags


# --- reporting -------------------------------------------------------------------

def span_range(span) -> dict:
    return {
        "start": {"line": span.start_line, "col": span.start_col},
        "end": {"line": span.end_line, "col": span.end_col},
    }


def report_json(diags: list[Diagnostic], target_paths: list[str]) -> str:
    by_file: dict[str, list] = {p: [] for p in target_paths}
    for d in diags:
        by_file.setdefault(d.span.file, []).append(d)
    files = []
    for path in sorted(by_file):
        files.append(
            {
                "path": path,
                "diagnostics": [
                    {
                        "code": d.code,
                        "severity": d.severity,
                        "message": d.message,
                        "range": span_range(d.span),
                        "fixes": [
                            {
                                "title": f.title,
                                "edits": [
                                    {"range": span_range(e.span), "newText": e.new_text}
                                    for e in f.edits
                                ],
                            }
                            for f in d.fixes
                        ],
                    }
                    for d in by_file[path]
                ],
            }
        )
    return json.dumps({"version": 1, "files": files}, indent=2) + "\n"


def report_human(diags: list[Diagnostic]) -> str:
    lines = []
    for d in diags:
        s = d.span
        first, *rest = d.message.splitlines()
        lines.append(f"{s.file}:{s.start_line}:{s.start_col}: {d.severity.lower()} {d.code}: {first}")
        lines += ["    " + r for r in rest]
        for f in d.fixes:
            lines.append(f"    fix: {f.title}")
    errors = sum(1 for d in diags if d.severity == "Error")
    warnings = sum(1 for d in diags if d.severity == "Warning")
    lines.append(f"{len(diags)} diagnostic(s): {errors} error(s), {warnings} warning(s)")
    return "\n".join(lines) + "\n"


def exit_code(diags: list[Diagnostic]) -> int:
    return 1 if any(d.severity == "Error" for d in diags) else 0


# --- commands ---------------------------------------------------------------------

def cmd_check(args) -> int:
    ws, targets = build_workspace(args.paths, args)
    lexicons = load_lexicon_overrides(args)
    diags = check_all(ws, targets, lexicons)
    if args.format == "json":
        sys.stdout.write(report_json(diags, [p for _, p in targets]))
    else:
        sys.stdout.write(report_human(diags))
    return exit_code(diags)


def collect_fix_edits(diags: list[Diagnostic], create_missing: bool):
    """Per-file edit lists; identical edits collapse, overlaps are skipped."""
    wanted = set(AUTO_FIX_CODES) | ({"RSL-L001"} if create_missing else set())
    per_file: dict[str, list] = {}
    notices: list[str] = []
    seen = set()
    for d in diags:
        if d.code not in wanted or not d.fixes:
            continue
        fix = d.fixes[0]
        for edit in fix.edits:
            key = (edit.span.file, edit.span.offset, edit.span.length, edit.new_text)
            if key in seen:
                continue
            chosen = per_file.setdefault(edit.span.file, [])
            clash = next((e for e in chosen if e.span.overlaps(edit.span)), None)
            if clash is not None:
                notices.append(
                    f"skipped conflicting fix '{fix.title}' at {edit.span.file}:{edit.span.start_line} (re-run fix)"
                )
                continue
            seen.add(key)
            chosen.append(edit)
    # Distinct insertions at one offset (e.g. several created elements
    # appended at end of file) merge into a single edit, in order.
    for path, edits in per_file.items():
        inserts: dict[int, list] = {}
        rest = []
        for e in edits:
            if e.span.length == 0:
                inserts.setdefault(e.span.offset, []).append(e)
            else:
                rest.append(e)
        for offset, group in inserts.items():
            if len(group) == 1:
                rest.append(group[0])
            else:
                rest.append(TextEdit(group[0].span, "".join(e.new_text for e in group)))
        per_file[path] = rest
    return per_file, notices


def cmd_fix(args) -> int:
    ws, targets = build_workspace(args.paths, args)
    lexicons = load_lexicon_overrides(args)
    diags = check_all(ws, targets, lexicons)
    per_file, notices = collect_fix_edits(diags, args.create_missing)
    for notice in notices:
        print(notice)

    member_files = {m.file for m in ws.systems.values()}
    new_sources: dict[str, str] = {}
    for path, edits in sorted(per_file.items()):
        if path not in member_files:
            print(f"skipped fixes for non-workspace file {path}")
            continue
        old = Path(path).read_text(encoding="utf-8")
        try:
            new = apply_edits(old, edits)
        except OverlappingEdits as exc:
            print(f"skipped fixes for {path}: {exc}")
            continue
        if new != old:
            new_sources[str(Path(path))] = new

    if args.apply:
        for path, text in new_sources.items():
            Path(path).write_text(text, encoding="utf-8")
    else:
        for path, text in sorted(new_sources.items()):
            old = Path(path).read_text(encoding="utf-8")
            diff = difflib.unified_diff(
                old.splitlines(keepends=True),
                text.splitlines(keepends=True),
                fromfile=path,
                tofile=path + " (fixed)",
            )
            sys.stdout.write("".join(diff))

    # Exit status reflects the post-fix state for both modes.
    ws2, targets2 = build_workspace(args.paths, args, sources=new_sources)
    post = check_all(ws2, targets2, lexicons)
    if not new_sources and not notices:
        print("no applicable fixes")
    elif args.apply:
        print(f"applied fixes to {len(new_sources)} file(s)")
    return exit_code(post)


def cmd_gen(args) -> int:
    ws, targets = build_workspace(args.paths, args)
    lexicons = load_lexicon_overrides(args)
    if not targets:
        raise UsageError("gen needs an input document")
    name, _path = targets[0]
    rm = resolve(ws.systems[name], ws)
    diags = run_all_checks(rm, ws, lexicons)
    refusal = ensure_valid(rm, diags)
    if refusal is not None:
        sys.stdout.write(report_human([d for d in diags if d.severity == "Error"]))
        print(str(refusal))
        return 1

    if args.kind == "json":
        output = generate_json(rm)
    elif args.kind == "text":
        output = generate_text(rm)
    else:
        if not args.template:
            raise UsageError("gen template needs --template")
        try:
            tpl_text = Path(args.template).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read template: {exc}")
        try:
            output = render_template(parse_template(tpl_text), rm, strict=not args.lenient)
        except (TemplateSyntaxError, UnresolvedTags, ExpressionTypeError) as exc:
            print(f"template error: {exc}", file=sys.stderr)
            return 1

    try:
        Path(args.output).write_text(output, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write output: {exc}")
    print(f"wrote {args.output}")
    return 0


# --- entry point -------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rslkit", description="Requirements-language toolchain")
    sub = ap.add_subparsers(dest="command", required=True)

    def shared(p):
        p.add_argument("paths", nargs="+", help="input documents (.rsl)")
        p.add_argument("--system", action="append", metavar="NAME=PATH", help="map a system id to a file")
        p.add_argument("--manifest", help="workspace manifest (systemId=path lines)")
        p.add_argument("--lexicon", action="append", metavar="LANG=PATH", help="lexicon override")

    p = sub.add_parser("check", help="validate documents")
    shared(p)
    p.add_argument("--format", choices=["human", "json"], default="human")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fix", help="apply or preview quick fixes")
    shared(p)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--apply", action="store_true", help="rewrite files")
    mode.add_argument("--dry-run", action="store_true", help="preview diffs only")
    p.add_argument("--create-missing", action="store_true", help="also apply create-element fixes")
    p.set_defaults(func=cmd_fix)

    p = sub.add_parser("gen", help="generate documents from a valid specification")
    p.add_argument("kind", choices=["json", "text", "template"])
    shared(p)
    p.add_argument("--template", help="template file (for kind=template)")
    p.add_argument("-o", "--output", required=True, help="output file")
    p.add_argument("--lenient", action="store_true", help="render unresolved tags as empty")
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
