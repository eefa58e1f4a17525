"""Element kinds, link kinds, layers and the seams between them.

Everything here is constant data.  Other modules ask this one whether a
relation is legal (:func:`allowed_link`), which layer a kind lives in
(:func:`layer_of`) and which elements connect two adjacent layers
(:func:`seam_catalog`).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Layer(Enum):
    BUSINESS = "Business"
    FUNCTIONAL = "Functional"
    COMPONENT = "Component"
    DATA = "Data"
    TECHNOLOGY = "Technology"

    @property
    def rank(self) -> int:
        return _LAYER_ORDER.index(self)


_LAYER_ORDER = list(Layer)


class ElementKind(Enum):
    BUSINESS_PROCESS = "BusinessProcess"
    BUSINESS_FUNCTION = "BusinessFunction"
    BUSINESS_OPERATION = "BusinessOperation"
    AUTOMATED_FUNCTION = "AutomatedFunction"
    OPERATIONAL_SERVICE = "OperationalService"
    DIALOG = "Dialog"
    VIEW_FUNCTION = "ViewFunction"
    DIALOG_FORM = "DialogForm"
    INFORMATION_OBJECT = "InformationObject"
    SOFTWARE_MODULE = "SoftwareModule"
    FUNCTIONAL_COMPONENT = "FunctionalComponent"
    EXTERNAL_SYSTEM = "ExternalSystem"
    ENTITY_CLASS = "EntityClass"
    CLASS_METHOD = "ClassMethod"
    HARDWARE_NODE = "HardwareNode"

    @classmethod
    def parse(cls, token: str) -> "ElementKind":
        """Look a kind up by its value (``"ViewFunction"``) or member name."""
        for kind in cls:
            if token in (kind.value, kind.name):
                return kind
        raise ValueError(f"unknown element kind {token!r}")


class LinkKind(Enum):
    DECOMPOSES = "DECOMPOSES"
    HAS_SERVICE = "HAS_SERVICE"
    CONTAINS_AUTOFN = "CONTAINS_AUTOFN"
    SVC_DIALOG = "SVC_DIALOG"
    IMPLEMENTS = "IMPLEMENTS"
    HAS_VIEWFN = "HAS_VIEWFN"
    INPUT = "INPUT"
    OUTPUT = "OUTPUT"
    HAS_FORM = "HAS_FORM"
    VF_MODULE = "VF_MODULE"
    OWNS_MODULE = "OWNS_MODULE"
    MOD_METHOD = "MOD_METHOD"
    OWNS_METHOD = "OWNS_METHOD"
    HOSTS_CLASS = "HOSTS_CLASS"
    DEPLOYS = "DEPLOYS"


class ViewFnCategory(Enum):
    PRECONDITION = "precondition"
    DATA_IO = "io"
    CONTROL = "control"
    ERROR_REACTION = "error"
    POSTCONDITION = "postcondition"


K = ElementKind
L = LinkKind

_LAYERS: dict[ElementKind, Layer] = {
    K.BUSINESS_PROCESS: Layer.BUSINESS,
    K.BUSINESS_FUNCTION: Layer.BUSINESS,
    K.BUSINESS_OPERATION: Layer.BUSINESS,
    K.AUTOMATED_FUNCTION: Layer.BUSINESS,
    K.OPERATIONAL_SERVICE: Layer.BUSINESS,
    K.DIALOG: Layer.FUNCTIONAL,
    K.VIEW_FUNCTION: Layer.FUNCTIONAL,
    K.DIALOG_FORM: Layer.FUNCTIONAL,
    K.INFORMATION_OBJECT: Layer.FUNCTIONAL,
    K.SOFTWARE_MODULE: Layer.COMPONENT,
    K.FUNCTIONAL_COMPONENT: Layer.COMPONENT,
    K.EXTERNAL_SYSTEM: Layer.COMPONENT,
    K.ENTITY_CLASS: Layer.DATA,
    K.CLASS_METHOD: Layer.DATA,
    K.HARDWARE_NODE: Layer.TECHNOLOGY,
}

# The complete relation table: link kind -> legal (source kind, target kind).
RELATIONS: dict[LinkKind, frozenset[tuple[ElementKind, ElementKind]]] = {
    L.DECOMPOSES: frozenset({
        (K.BUSINESS_PROCESS, K.BUSINESS_FUNCTION),
        (K.BUSINESS_FUNCTION, K.BUSINESS_FUNCTION),
        (K.BUSINESS_FUNCTION, K.BUSINESS_OPERATION),
    }),
    L.HAS_SERVICE: frozenset({(K.BUSINESS_OPERATION, K.OPERATIONAL_SERVICE)}),
    L.CONTAINS_AUTOFN: frozenset({(K.OPERATIONAL_SERVICE, K.AUTOMATED_FUNCTION)}),
    L.SVC_DIALOG: frozenset({(K.OPERATIONAL_SERVICE, K.DIALOG)}),
    L.IMPLEMENTS: frozenset({(K.AUTOMATED_FUNCTION, K.DIALOG)}),
    L.HAS_VIEWFN: frozenset({(K.DIALOG, K.VIEW_FUNCTION)}),
    L.INPUT: frozenset({(K.DIALOG, K.INFORMATION_OBJECT)}),
    L.OUTPUT: frozenset({(K.DIALOG, K.INFORMATION_OBJECT)}),
    L.HAS_FORM: frozenset({(K.DIALOG, K.DIALOG_FORM)}),
    L.VF_MODULE: frozenset({(K.VIEW_FUNCTION, K.SOFTWARE_MODULE)}),
    L.OWNS_MODULE: frozenset({
        (K.FUNCTIONAL_COMPONENT, K.SOFTWARE_MODULE),
        (K.EXTERNAL_SYSTEM, K.SOFTWARE_MODULE),
    }),
    L.MOD_METHOD: frozenset({(K.SOFTWARE_MODULE, K.CLASS_METHOD)}),
    L.OWNS_METHOD: frozenset({(K.ENTITY_CLASS, K.CLASS_METHOD)}),
    L.HOSTS_CLASS: frozenset({(K.FUNCTIONAL_COMPONENT, K.ENTITY_CLASS)}),
    L.DEPLOYS: frozenset({
        (K.HARDWARE_NODE, K.FUNCTIONAL_COMPONENT),
        (K.HARDWARE_NODE, K.EXTERNAL_SYSTEM),
    }),
}

# Ownership and deployment links point from container to part; tracing
# "where does this live" walks them the other way.
OWNERSHIP_LINKS = frozenset({L.OWNS_MODULE, L.OWNS_METHOD, L.HOSTS_CLASS, L.DEPLOYS})


def layer_of(kind: ElementKind) -> Layer:
    return _LAYERS[kind]


def allowed_link(src: ElementKind, link: LinkKind, dst: ElementKind) -> bool:
    return (src, dst) in RELATIONS[link]


def legal_link_kinds(src: ElementKind, dst: ElementKind) -> list[LinkKind]:
    """All link kinds admitting ``src -> dst``, in declaration order."""
    return [link for link in LinkKind if allowed_link(src, link, dst)]


@dataclass(frozen=True)
class Seam:
    """A boundary between two layers, bridged by one kind of connecting element.

    ``realization_link`` is the link kind whose presence on a connecting
    element means the element has been decomposed into the next layer.
    """

    index: int
    name: str
    connecting_kind: ElementKind
    realization_link: LinkKind
    upstream_layer: Layer
    downstream_layer: Layer

    @property
    def token(self) -> str:
        return f"seam{self.index}"


_SEAMS = (
    Seam(1, "operational_service", K.OPERATIONAL_SERVICE, L.SVC_DIALOG,
         Layer.BUSINESS, Layer.FUNCTIONAL),
    Seam(2, "view_function", K.VIEW_FUNCTION, L.VF_MODULE,
         Layer.FUNCTIONAL, Layer.COMPONENT),
    Seam(3, "software_module", K.SOFTWARE_MODULE, L.MOD_METHOD,
         Layer.COMPONENT, Layer.DATA),
    Seam(4, "hardware_node", K.HARDWARE_NODE, L.DEPLOYS,
         Layer.COMPONENT, Layer.TECHNOLOGY),
)


def seam_catalog() -> list[Seam]:
    return list(_SEAMS)


def find_seam(token: str) -> Seam:
    """Resolve ``seam2``, ``2`` or ``view_function`` to a seam."""
    for seam in _SEAMS:
        if token in (seam.token, str(seam.index), seam.name):
            return seam
    raise ValueError(f"unknown seam {token!r}")


SEAM_LINKS = frozenset(seam.realization_link for seam in _SEAMS)
