"""Shared helpers for the test suite."""

from pathlib import Path

from rslkit.checks import run_all_checks
from rslkit.workspace import Workspace, add_system, resolve

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def check_source(source: str, file: str = "<test>", extra: dict | None = None):
    """Parse one document (plus optional named sibling systems) and run all checks.

    Returns (resolved_model, diagnostics).
    """
    ws = Workspace()
    model = add_system(ws, "Main", source, file)
    for name, text in (extra or {}).items():
        add_system(ws, name, text, f"<{name}>")
    rm = resolve(model, ws)
    return rm, run_all_checks(rm, ws)


def check_fixture(name: str, extra_fixtures: dict | None = None):
    extra = {
        sys_name: fixture_text(fname) for sys_name, fname in (extra_fixtures or {}).items()
    }
    return check_source(fixture_text(name), file=fixture_path(name), extra=extra)


def by_code(diags, code: str):
    return [d for d in diags if d.code == code]
