"""Rule catalog and validation of frozen models.

Each rule looks for one kind of defect: a connecting element that was never
decomposed into the next layer (a technological gap), an element nothing
upstream asks for (excess functionality), or a structural defect.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator

from .diagnostics import Diagnostic, Severity
from .metamodel import ElementKind, Layer, LinkKind, Seam, layer_of, seam_catalog
from .model import ArchitectureModel
from .tracer import TraceOptions, reachable_from, seam_coverage

K = ElementKind
L = LinkKind

# Link set used to decide whether an element is justified by some process.
ORPHAN_TRACE = TraceOptions("full")


@dataclass(frozen=True)
class Rule:
    code: str
    severity: Severity
    description: str
    anchor: str
    check: Callable[[ArchitectureModel], Iterator[tuple[tuple[str, ...], str]]] = field(
        repr=False, compare=False)


class RuleConfigError(ValueError):
    pass


@dataclass
class RuleConfig:
    """Per-rule overrides.  ``None`` switches a rule off."""

    overrides: dict[str, Severity | None] = field(default_factory=dict)

    def __post_init__(self) -> None:
        unknown = sorted(set(self.overrides) - set(RULES))
        if unknown:
            raise RuleConfigError(f"unknown rule code(s): {', '.join(unknown)}")

    def enabled(self, code: str) -> bool:
        return self.overrides.get(code, RULES[code].severity) is not None

    def severity(self, code: str) -> Severity:
        return self.overrides.get(code) or RULES[code].severity

    @property
    def codes(self) -> list[str]:
        return list(RULES)

    @classmethod
    def parse(cls, text: str, source: str = "<config>") -> "RuleConfig":
        """Read ``rule <CODE> off|error|warning|info`` lines; ``#`` starts a comment."""
        overrides: dict[str, Severity | None] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3 or parts[0] != "rule":
                raise RuleConfigError(f"{source}:{lineno}: expected 'rule <CODE> <level>'")
            _, code, level = parts
            if code not in RULES:
                raise RuleConfigError(f"{source}:{lineno}: unknown rule code {code}")
            if level == "off":
                overrides[code] = None
            else:
                try:
                    overrides[code] = Severity(level)
                except ValueError:
                    raise RuleConfigError(
                        f"{source}:{lineno}: level must be off, error, warning or info") from None
        return cls(overrides)

    @classmethod
    def load(cls, path: str | Path) -> "RuleConfig":
        path = Path(path)
        return cls.parse(path.read_text(encoding="utf-8"), str(path))


# -- rules -------------------------------------------------------------------


def _leaf_functions(model):
    for pid in model.elements_of_kind(K.BUSINESS_PROCESS):
        if not model.out_neighbors(pid, L.DECOMPOSES):
            yield (pid,), f"business process {pid} is not decomposed into business functions"
    for fid in model.elements_of_kind(K.BUSINESS_FUNCTION):
        if not model.out_neighbors(fid, L.DECOMPOSES):
            yield (fid,), (f"business function {fid} is not decomposed into "
                           "business functions or operations")


def _decomposition_cycles(model):
    nodes = [eid for eid, el in model.elements.items()
             if el.kind in (K.BUSINESS_PROCESS, K.BUSINESS_FUNCTION, K.BUSINESS_OPERATION)]
    reach: dict[str, set[str]] = {}
    for eid in nodes:
        seen: set[str] = set()
        stack = list(model.out_neighbors(eid, L.DECOMPOSES))
        while stack:
            cur = stack.pop()
            if cur not in seen:
                seen.add(cur)
                stack.extend(model.out_neighbors(cur, L.DECOMPOSES))
        reach[eid] = seen
    reported: set[str] = set()
    for eid in nodes:
        if eid in reported or eid not in reach[eid]:
            continue
        members = sorted(other for other in reach[eid] if eid in reach[other])
        reported.update(members)
        yield tuple(members), "decomposition cycle: " + " -> ".join(members + [members[0]])


def _operations_without_service(model):
    for oid in model.elements_of_kind(K.BUSINESS_OPERATION):
        if model.element(oid).automated and not model.out_neighbors(oid, L.HAS_SERVICE):
            yield (oid,), f"automated business operation {oid} has no operational service"


def _services_without_functions(model):
    for sid in model.elements_of_kind(K.OPERATIONAL_SERVICE):
        if not model.out_neighbors(sid, L.CONTAINS_AUTOFN):
            yield (sid,), f"operational service {sid} lists no automated functions"


def _seam_gaps(index: int, message: str):
    def check(model):
        seam = seam_catalog()[index - 1]
        for eid in seam_coverage(model, seam).unrealized:
            yield (eid,), message.format(eid=eid)
    return check


def _functions_without_dialog(model):
    for aid in model.elements_of_kind(K.AUTOMATED_FUNCTION):
        if model.out_neighbors(aid, L.IMPLEMENTS):
            continue
        for sid in model.in_neighbors(aid, L.CONTAINS_AUTOFN):
            siblings = model.out_neighbors(sid, L.CONTAINS_AUTOFN)
            if any(model.out_neighbors(other, L.IMPLEMENTS) for other in siblings):
                yield (aid,), (f"automated function {aid} is not implemented by any dialog "
                               f"while other functions of service {sid} are")
                break


def _dialogs_without_view_functions(model):
    for did in model.elements_of_kind(K.DIALOG):
        if not model.out_neighbors(did, L.HAS_VIEWFN):
            yield (did,), f"dialog {did} defines no view functions"


def _dialogs_without_io(model):
    for did in model.elements_of_kind(K.DIALOG):
        missing = [name for kind, name in ((L.INPUT, "source resource"),
                                           (L.OUTPUT, "target product"))
                   if not model.out_neighbors(did, kind)]
        if missing:
            yield (did,), f"dialog {did} has no {' and no '.join(missing)}"


def _user_dialogs_without_form(model):
    for did in model.elements_of_kind(K.DIALOG):
        if (model.element(did).attributes.get("agent") == "user"
                and not model.out_neighbors(did, L.HAS_FORM)):
            yield (did,), f"dialog {did} has a user agent but no form"


def _modules_without_component(model):
    for mid in model.elements_of_kind(K.SOFTWARE_MODULE):
        if not model.in_neighbors(mid, L.OWNS_MODULE):
            yield (mid,), f"software module {mid} belongs to no functional component"


def _modules_with_several_components(model):
    for mid in model.elements_of_kind(K.SOFTWARE_MODULE):
        owners = model.in_neighbors(mid, L.OWNS_MODULE)
        if len(owners) > 1:
            yield (mid, *owners), f"software module {mid} is owned by {', '.join(owners)}"


def _methods_without_class(model):
    for mid in model.elements_of_kind(K.CLASS_METHOD):
        owners = model.in_neighbors(mid, L.OWNS_METHOD)
        if len(owners) != 1:
            detail = "no class" if not owners else f"{len(owners)} classes ({', '.join(owners)})"
            yield (mid,), f"class method {mid} belongs to {detail}"


def _orphans(model):
    roots = model.elements_of_kind(K.BUSINESS_PROCESS)
    justified = reachable_from(model, roots, ORPHAN_TRACE)
    for eid, element in model.elements.items():
        if layer_of(element.kind) is not Layer.BUSINESS and eid not in justified:
            yield (eid,), (f"{element.kind.value} {eid} cannot be traced back to any "
                           "business process")


def _empty_model(model):
    if not model.elements_of_kind(K.BUSINESS_PROCESS):
        yield (), "model declares no business process"


_CATALOG = [
    Rule("R-BF-LEAF", Severity.ERROR,
         "business function (or process) with no decomposition",
         "business decomposition ends in business operations", _leaf_functions),
    Rule("R-DECOMP-CYCLE", Severity.ERROR, "cycle among DECOMPOSES links",
         "decomposition is hierarchical", _decomposition_cycles),
    Rule("R-OP-NOSVC", Severity.ERROR, "automated business operation without operational service",
         "a service is formed for each automated business operation",
         _operations_without_service),
    Rule("R-SVC-NOAF", Severity.WARNING, "operational service without automated functions",
         "a service describes automated functions", _services_without_functions),
    Rule("R-SVC-NODLG", Severity.ERROR, "operational service not decomposed into dialogs",
         "seam 1: service -> dialogs",
         _seam_gaps(1, "operational service {eid} is not decomposed into any dialog")),
    Rule("R-AF-NODLG", Severity.WARNING,
         "automated function without dialog while its siblings have one",
         "every automated function is carried out by a dialog", _functions_without_dialog),
    Rule("R-DLG-NOVF", Severity.ERROR, "dialog without view functions",
         "view functions are defined in the dialog", _dialogs_without_view_functions),
    Rule("R-DLG-NOIO", Severity.WARNING, "dialog missing its source resource or target product",
         "a dialog turns a resource into a product", _dialogs_without_io),
    Rule("R-DLG-NOFORM", Severity.WARNING, "user dialog without form",
         "a form is needed when the agent is a user", _user_dialogs_without_form),
    Rule("R-VF-NOMOD", Severity.ERROR, "view function not decomposed into software modules",
         "seam 2: view function -> modules",
         _seam_gaps(2, "view function {eid} is not decomposed into any software module")),
    Rule("R-MOD-NOCOMP", Severity.ERROR, "software module without owning component",
         "modules are structural parts of components", _modules_without_component),
    Rule("R-MOD-MULTICOMP", Severity.ERROR, "software module owned by several components",
         "modules are structural parts of one component", _modules_with_several_components),
    Rule("R-MOD-NOMETH", Severity.ERROR, "software module not decomposed into class methods",
         "seam 3: module -> class methods",
         _seam_gaps(3, "software module {eid} is not decomposed into any class method")),
    Rule("R-METH-NOCLASS", Severity.ERROR, "class method not owned by exactly one class",
         "methods belong to classes of the data model", _methods_without_class),
    Rule("R-COMP-NONODE", Severity.ERROR, "functional component not deployed on any node",
         "seam 4: component -> hardware",
         _seam_gaps(4, "functional component {eid} is not deployed on any hardware node")),
    Rule("R-ORPHAN", Severity.WARNING, "element not traceable to any business process",
         "no excessive functionality", _orphans),
    Rule("W-EMPTY-MODEL", Severity.WARNING, "model has no business process",
         "artifact plumbing", _empty_model),
]

RULES: dict[str, Rule] = {rule.code: rule for rule in _CATALOG}

# Gap rule for each seam, in seam order.
SEAM_RULES = ("R-SVC-NODLG", "R-VF-NOMOD", "R-MOD-NOMETH", "R-COMP-NONODE")


def rule_catalog() -> list[Rule]:
    return list(_CATALOG)


DEFAULT_CONFIG = RuleConfig()


def _run_rule(model: ArchitectureModel, rule: Rule, config: RuleConfig) -> list[Diagnostic]:
    findings = []
    severity = config.severity(rule.code)
    for subjects, message in rule.check(model):
        location = model.element(subjects[0]).location if subjects else None
        findings.append(Diagnostic(rule.code, severity, subjects, message, location))
    return findings


def validate(model: ArchitectureModel, config: RuleConfig = DEFAULT_CONFIG) -> list[Diagnostic]:
    """All enabled rules' findings, sorted by rule code then subject ids."""
    findings = []
    for rule in _CATALOG:
        if config.enabled(rule.code):
            findings.extend(_run_rule(model, rule, config))
    findings.sort(key=Diagnostic.sort_key)
    return findings


@dataclass(frozen=True)
class SeamGap:
    seam: Seam
    diagnostics: tuple[Diagnostic, ...]
    coverage: float
    numerator: int
    denominator: int


def gap_report(model: ArchitectureModel, config: RuleConfig = DEFAULT_CONFIG) -> dict[str, SeamGap]:
    """Per-seam gap diagnostics and coverage ratio, keyed ``seam1`` .. ``seam4``."""
    report = {}
    for seam, code in zip(seam_catalog(), SEAM_RULES):
        diags = _run_rule(model, RULES[code], config) if config.enabled(code) else []
        diags.sort(key=Diagnostic.sort_key)
        cov = seam_coverage(model, seam)
        report[seam.token] = SeamGap(seam, tuple(diags), cov.ratio, cov.numerator, cov.denominator)
    return report

