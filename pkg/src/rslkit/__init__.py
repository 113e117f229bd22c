"""Toolchain for a controlled requirements-specification language:
parsing, semantic and linguistic validation with quick fixes, and
document generation (JSON, structured text, templates)."""

from .model import (
    Diagnostic,
    Model,
    OverlappingEdits,
    QuickFix,
    SourceSpan,
    TextEdit,
    apply_edits,
)
from .parser import parse
from .printer import print_element, print_model
from .workspace import ResolvedModel, Workspace, load_workspace, resolve

__all__ = [
    "Diagnostic",
    "Model",
    "OverlappingEdits",
    "QuickFix",
    "ResolvedModel",
    "SourceSpan",
    "TextEdit",
    "Workspace",
    "apply_edits",
    "load_workspace",
    "parse",
    "print_element",
    "print_model",
    "resolve",
]

__version__ = "0.1.0"
