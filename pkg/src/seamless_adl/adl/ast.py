from __future__ import annotations

from dataclasses import dataclass, field

from ..diagnostics import SourceLocation

# Keywords that open a top-level declaration.
TOP_LEVEL = ("process", "dialog", "component", "external_system", "class", "node", "bind")


@dataclass(frozen=True)
class Ref:
    id: str
    location: SourceLocation


@dataclass
class Decl:
    """A block, an element-declaring entry or a plain statement.

    ``keyword`` selects the meaning of the other fields:

    * blocks (``process``, ``function``, ``operation``, ``service``,
      ``dialog``, ``component``, ``external_system``, ``class``, ``node``)
      use ``name``, ``id`` and ``children``;
    * entries (``auto_fn``, ``view_fn``, ``input``, ``output``, ``form``,
      ``module``, ``method``) use ``name`` and ``id``, plus ``value`` for
      a view function's category;
    * ``performer``, ``requirements`` and ``agent`` carry ``value``;
    * ``implements``, ``deploys``, ``hosted_by`` and ``bind`` carry
      ``refs`` (for ``bind`` the first ref is the source).
    """

    keyword: str
    location: SourceLocation
    name: str | None = None
    id: str | None = None
    id_location: SourceLocation | None = None
    value: str | None = None
    flags: tuple[str, ...] = ()
    refs: list[Ref] = field(default_factory=list)
    children: list["Decl"] = field(default_factory=list)

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class ModelAst:
    source_name: str
    declarations: list[Decl] = field(default_factory=list)

    def count(self, keyword: str) -> int:
        return sum(1 for decl in self.declarations if decl.keyword == keyword)

    def walk(self):
        for decl in self.declarations:
            yield from decl.walk()
