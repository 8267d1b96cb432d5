import logging
from typing import Any, Dict, Optional

from . import io
from .error_utils import PotentialError, VarSpaceMismatch
from .laurent import RationalFunction
from .quiver import DimVector, Potential, Quiver, TorusWeighting, unit_torus
from .shuffle import (
    FramedModuleElement,
    ShuffleElement,
    module_action,
    shuffle_mul,
    unit,
    zeta,
)


class Workspace:
    """A quiver with its torus weighting, optional potential and a store of named elements.

    Stored elements are kept as canonical JSON text and always belong to the
    workspace's quiver and torus.  The store is a library API for callers that
    chain several products in one process; each CLI invocation starts from a
    fresh workspace and never uses it.
    """

    def __init__(self, quiver: Quiver, torus: Optional[TorusWeighting] = None,
                 potential: Optional[Potential] = None):
        self.quiver = quiver
        self.torus = (torus or unit_torus(quiver)).validate_against(quiver)
        if potential is not None and potential.quiver != quiver:
            raise PotentialError("potential is defined on a different quiver")
        self.potential = potential
        self.elements: Dict[str, str] = {}

    @classmethod
    def from_bundle(cls, bundle: Any, torus: Any = None, path: str = "quiver") -> "Workspace":
        """Builds a workspace from a quiver bundle; a separate torus overrides the bundle's own."""
        quiver, bundled_torus, potential = io.parse_bundle(bundle, path)
        if torus is not None:
            bundled_torus = io.parse_torus(torus, quiver)
        workspace = cls(quiver, bundled_torus, potential)
        logging.info(f"Workspace with {quiver.n_vertices} vertices, {len(quiver.edges)} edges, "
                     f"torus rank {workspace.torus.rank}")
        return workspace

    def require_potential(self) -> Potential:
        if self.potential is None:
            raise PotentialError("the quiver bundle has no potential")
        return self.potential

    def parse_element(self, obj: Any, path: str = "element") -> ShuffleElement:
        return io.parse_element(obj, self.quiver, self.torus, path)

    def parse_module(self, obj: Any, framing: DimVector, path: str = "module") -> FramedModuleElement:
        return io.parse_module_element(obj, self.quiver, self.torus, framing, path)

    def store(self, name: str, element: ShuffleElement) -> str:
        """Keeps ``element`` under ``name`` and returns its canonical JSON text."""
        if (element.quiver, element.torus) != (self.quiver, self.torus):
            raise VarSpaceMismatch(f"element {name!r} belongs to another quiver or torus")
        text = io.dumps(io.serialize_element(element))
        self.elements[name] = text
        return text

    def load(self, name: str) -> ShuffleElement:
        try:
            text = self.elements[name]
        except KeyError:
            raise VarSpaceMismatch(f"no stored element named {name!r}") from None
        return self.parse_element(io.loads(text, name), name)

    def unit(self) -> ShuffleElement:
        return unit(self.quiver, self.torus)

    def multiply(self, lhs: Any, rhs: Any) -> ShuffleElement:
        f = self.parse_element(lhs, "lhs")
        g = self.parse_element(rhs, "rhs")
        logging.info(f"Multiplying degrees {list(f.dim)} and {list(g.dim)}")
        return shuffle_mul(f, g)

    def act(self, lhs: Any, module: Any, framing: DimVector) -> FramedModuleElement:
        f = self.parse_element(lhs, "lhs")
        m = self.parse_module(module, framing, "rhs")
        logging.info(f"Acting with degree {list(f.dim)} on module degree {list(m.dim)}")
        return module_action(f, m)

    def zeta(self, source: str, target: str) -> RationalFunction:
        return zeta(self.quiver, self.torus, source, target)
