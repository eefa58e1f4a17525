"""Textual architecture description language: parse, lower, serialize."""

from __future__ import annotations

from pathlib import Path

from ..diagnostics import Diagnostic
from ..model import ArchitectureModel
from .ast import Decl, ModelAst, Ref
from .lowering import lower
from .parser import parse, tokenize
from .serializer import serialize


def load(text: str | bytes, source_name: str = "<input>"
         ) -> tuple[ArchitectureModel, list[Diagnostic]]:
    """Parse and lower in one step; diagnostics from both stages, in order."""
    ast, diagnostics = parse(text, source_name)
    model, lowering_diagnostics = lower(ast)
    return model, diagnostics + lowering_diagnostics


def load_file(path: str | Path) -> tuple[ArchitectureModel, list[Diagnostic]]:
    path = Path(path)
    return load(path.read_bytes(), str(path))


__all__ = ["Decl", "ModelAst", "Ref", "load", "load_file", "lower", "parse",
           "serialize", "tokenize"]
