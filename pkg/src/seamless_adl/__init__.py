"""Layered architecture descriptions with explicit links between layers.

Parse the text format, validate that every connecting element is
decomposed into the next layer, and trace elements across layers.
"""

from .adl import load, load_file, lower, parse, serialize
from .diagnostics import Diagnostic, Severity, SourceLocation
from .metamodel import (ElementKind, Layer, LinkKind, Seam, ViewFnCategory, allowed_link,
                        layer_of, seam_catalog)
from .model import (ArchitectureModel, Element, Link, ModelBuilder, UnknownElementError,
                    build_model, structurally_equal)
from .tracer import TraceOptions, TraceResult, coverage, impact, trace, trace_matrix
from .validator import RuleConfig, gap_report, rule_catalog, validate

__version__ = "0.1.0"

__all__ = [
    "ArchitectureModel", "Diagnostic", "Element", "ElementKind", "Layer", "Link", "LinkKind",
    "ModelBuilder", "RuleConfig", "Seam", "Severity", "SourceLocation", "TraceOptions",
    "TraceResult", "UnknownElementError", "ViewFnCategory", "allowed_link", "build_model",
    "coverage", "gap_report", "impact", "layer_of", "load", "load_file", "lower", "parse",
    "rule_catalog", "seam_catalog", "serialize", "structurally_equal", "trace", "trace_matrix",
    "validate",
]
