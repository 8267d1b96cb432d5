"""Canonical JSON for every domain value.

Output is ``json.dumps(sort_keys=True, separators=(",", ":"))`` plus a newline.
Laurent coefficients are decimal strings and stability values are ``"p/q"``
strings; exponents, dimensions and weights stay JSON integers.
"""
import json
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from .error_utils import KhaError, SchemaError
from .kclass import Certificate, Cocharacter, WeightList
from .laurent import LaurentPoly, RationalFunction, VarSpace
from .quiver import (
    DimVector,
    Edge,
    NoncommPathPoly,
    Potential,
    PotentialTerm,
    Quiver,
    StabilityCondition,
    TorusWeighting,
)
from .shuffle import FramedModuleElement, ShuffleElement, element_space, framed_space
from .validation import FRAMING_VERTEX


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def loads(text: str, path: str = "") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(path or "$", f"invalid JSON: {e.msg} at line {e.lineno} column {e.colno}") from None


def _join(path: str, key) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else str(key)


def _require(obj: Mapping, key: str, path: str) -> Any:
    if key not in obj:
        raise SchemaError(_join(path, key), "missing required key")
    return obj[key]


def _object(value: Any, path: str) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise SchemaError(path, f"expected an object, got {type(value).__name__}")
    return value


def _list(value: Any, path: str) -> List[Any]:
    if not isinstance(value, list):
        raise SchemaError(path, f"expected a list, got {type(value).__name__}")
    return value


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, f"expected an integer, got {value!r}")
    return value


def _str(value: Any, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise SchemaError(path, f"expected a nonempty string, got {value!r}")
    return value


def _int_list(value: Any, path: str) -> Tuple[int, ...]:
    return tuple(_int(x, _join(path, k)) for k, x in enumerate(_list(value, path)))


def _decimal(value: Any, path: str) -> int:
    if not isinstance(value, str):
        raise SchemaError(path, f"expected a decimal string, got {value!r}")
    try:
        return int(value, 10)
    except ValueError:
        raise SchemaError(path, f"not a decimal integer: {value!r}") from None


def _wrap(path: str, error: KhaError) -> SchemaError:
    if isinstance(error, SchemaError):
        return error
    return SchemaError(path, str(error))


def format_rational(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def parse_rational(value: Any, path: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise SchemaError(path, f"expected an integer or a \"p/q\" string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            pass
    raise SchemaError(path, f"not an exact rational: {value!r}")


# Quivers, potentials and tori


def serialize_quiver(quiver: Quiver) -> Dict[str, Any]:
    return {
        "vertices": list(quiver.vertices),
        "edges": [{"id": e.id, "src": e.src, "tgt": e.tgt} for e in quiver.edges],
    }


def parse_quiver(obj: Any, path: str = "quiver") -> Quiver:
    obj = _object(obj, path)
    vertices_path = _join(path, "vertices")
    vertices = tuple(_str(v, _join(vertices_path, k))
                     for k, v in enumerate(_list(_require(obj, "vertices", path), vertices_path)))
    edges_path = _join(path, "edges")
    edges = []
    for k, item in enumerate(_list(obj.get("edges", []), edges_path)):
        where = _join(edges_path, k)
        item = _object(item, where)
        edges.append(Edge(_str(_require(item, "id", where), _join(where, "id")),
                          _str(_require(item, "src", where), _join(where, "src")),
                          _str(_require(item, "tgt", where), _join(where, "tgt"))))
    try:
        return Quiver(vertices, tuple(edges))
    except KhaError as e:
        raise _wrap(path, e) from None


def serialize_torus(torus: TorusWeighting) -> Dict[str, Any]:
    return {"rank": torus.rank, "weights": {e: list(w) for e, w in torus.weights}}


def parse_torus(obj: Any, quiver: Optional[Quiver] = None, path: str = "torus") -> TorusWeighting:
    obj = _object(obj, path)
    rank = _int(_require(obj, "rank", path), _join(path, "rank"))
    weights_path = _join(path, "weights")
    raw = _object(obj.get("weights", {}), weights_path)
    weights = []
    for edge_id, vector in raw.items():
        where = _join(weights_path, edge_id)
        if quiver is not None and not quiver.has_edge(edge_id):
            raise SchemaError(where, f"unknown edge id {edge_id!r}")
        vector = _int_list(vector, where)
        if len(vector) != rank:
            raise SchemaError(where, f"weight has length {len(vector)}, expected {rank}")
        weights.append((edge_id, vector))
    try:
        return TorusWeighting(rank, tuple(weights))
    except KhaError as e:
        raise _wrap(path, e) from None


def serialize_potential(potential: Potential) -> List[Dict[str, Any]]:
    return [{"coeff": t.coeff, "cycle": list(t.cycle)} for t in potential.terms]


def parse_potential(obj: Any, quiver: Quiver, path: str = "potential") -> Potential:
    terms = []
    for k, item in enumerate(_list(obj, path)):
        where = _join(path, k)
        item = _object(item, where)
        coeff = _int(_require(item, "coeff", where), _join(where, "coeff"))
        cycle_path = _join(where, "cycle")
        cycle = tuple(_str(e, _join(cycle_path, j))
                      for j, e in enumerate(_list(_require(item, "cycle", where), cycle_path)))
        try:
            Potential(quiver, (PotentialTerm(coeff, cycle),))
        except KhaError as e:
            raise SchemaError(cycle_path, str(e)) from None
        terms.append(PotentialTerm(coeff, cycle))
    return Potential(quiver, tuple(terms))


def serialize_bundle(quiver: Quiver, torus: Optional[TorusWeighting] = None,
                     potential: Optional[Potential] = None) -> Dict[str, Any]:
    """A quiver together with its optional torus weighting and potential."""
    payload = serialize_quiver(quiver)
    if torus is not None:
        payload["torus"] = serialize_torus(torus)
    if potential is not None:
        payload["potential"] = serialize_potential(potential)
    return payload


def parse_bundle(obj: Any, path: str = "quiver") -> Tuple[Quiver, Optional[TorusWeighting], Optional[Potential]]:
    obj = _object(obj, path)
    quiver = parse_quiver(obj, path)
    torus = parse_torus(obj["torus"], quiver, _join(path, "torus")) if "torus" in obj else None
    potential = parse_potential(obj["potential"], quiver, _join(path, "potential")) if "potential" in obj else None
    return quiver, torus, potential


def serialize_path_poly(poly: NoncommPathPoly) -> Dict[str, Any]:
    return {
        "source": poly.source,
        "target": poly.target,
        "terms": [{"coeff": c, "path": list(p)} for c, p in poly.terms],
    }


def parse_path_poly(obj: Any, quiver: Quiver, path: str = "relation") -> NoncommPathPoly:
    obj = _object(obj, path)
    source = _str(_require(obj, "source", path), _join(path, "source"))
    target = _str(_require(obj, "target", path), _join(path, "target"))
    terms_path = _join(path, "terms")
    terms = []
    for k, item in enumerate(_list(obj.get("terms", []), terms_path)):
        where = _join(terms_path, k)
        item = _object(item, where)
        edges_path = _join(where, "path")
        terms.append((_int(_require(item, "coeff", where), _join(where, "coeff")),
                      tuple(_str(e, _join(edges_path, j))
                            for j, e in enumerate(_list(_require(item, "path", where), edges_path)))))
    try:
        return NoncommPathPoly.build(quiver, source, target, terms)
    except KhaError as e:
        raise _wrap(path, e) from None


# Dimension vectors and stability


def serialize_dim(d: DimVector) -> List[int]:
    return list(d.entries)


def parse_dim(obj: Any, quiver: Optional[Quiver] = None, path: str = "dim") -> DimVector:
    """A list in vertex order, or an object keyed by vertex id when a quiver is known."""
    if isinstance(obj, dict):
        if quiver is None:
            raise SchemaError(path, "vertex-keyed dimension vectors need a quiver")
        for vertex in obj:
            if vertex not in quiver.vertices:
                raise SchemaError(_join(path, vertex), f"unknown vertex id {vertex!r}")
        entries = tuple(_int(obj.get(v, 0), _join(path, v)) for v in quiver.vertices)
    else:
        entries = _int_list(obj, path)
        if quiver is not None and len(entries) != quiver.n_vertices:
            raise SchemaError(path, f"has {len(entries)} entries for {quiver.n_vertices} vertices")
    try:
        return DimVector(entries)
    except KhaError as e:
        raise _wrap(path, e) from None


def serialize_stability(theta: StabilityCondition) -> List[str]:
    return [format_rational(v) for v in theta.values]


def parse_stability(obj: Any, quiver: Optional[Quiver] = None, path: str = "theta") -> StabilityCondition:
    values = tuple(parse_rational(v, _join(path, k)) for k, v in enumerate(_list(obj, path)))
    if quiver is not None and len(values) != quiver.n_vertices:
        raise SchemaError(path, f"has {len(values)} entries for {quiver.n_vertices} vertices")
    return StabilityCondition(values)


# Laurent polynomials and elements


def serialize_space(space: VarSpace) -> Dict[str, Any]:
    return {"q": space.q_rank, "z": {v: c for v, c in zip(space.vertices, space.counts)}}


def parse_space(obj: Any, vertex_order: Optional[Sequence[str]] = None, path: str = "vars") -> VarSpace:
    obj = _object(obj, path)
    rank = _int(obj.get("q", 0), _join(path, "q"))
    z_path = _join(path, "z")
    counts = _object(obj.get("z", {}), z_path)
    if vertex_order is None:
        vertex_order = sorted(counts)
    for vertex in counts:
        if vertex not in vertex_order:
            raise SchemaError(_join(z_path, vertex), f"unknown vertex id {vertex!r}")
    entries = tuple(_int(counts.get(v, 0), _join(z_path, v)) for v in vertex_order)
    try:
        return VarSpace(rank, tuple(vertex_order), entries)
    except KhaError as e:
        raise _wrap(path, e) from None


def serialize_laurent(p: LaurentPoly) -> Dict[str, Any]:
    space = p.space
    r = space.q_rank
    terms = []
    for exps, coeff in p.terms:
        z = {}
        for vertex, count, offset in zip(space.vertices, space.counts, space.offsets):
            if count:
                z[vertex] = list(exps[offset:offset + count])
        terms.append({"coeff": str(coeff), "q": list(exps[:r]), "z": z})
    return {"vars": serialize_space(space), "terms": terms}


def parse_laurent(obj: Any, vertex_order: Optional[Sequence[str]] = None, path: str = "element") -> LaurentPoly:
    obj = _object(obj, path)
    space = parse_space(_require(obj, "vars", path), vertex_order, _join(path, "vars"))
    terms_path = _join(path, "terms")
    terms: Dict[Tuple[int, ...], int] = {}
    for k, item in enumerate(_list(obj.get("terms", []), terms_path)):
        where = _join(terms_path, k)
        item = _object(item, where)
        coeff = _decimal(_require(item, "coeff", where), _join(where, "coeff"))
        q = _int_list(item.get("q", [0] * space.q_rank), _join(where, "q"))
        if len(q) != space.q_rank:
            raise SchemaError(_join(where, "q"), f"has length {len(q)}, expected {space.q_rank}")
        z_path = _join(where, "z")
        z = _object(item.get("z", {}), z_path)
        exps = list(q)
        for vertex, count in zip(space.vertices, space.counts):
            block = _int_list(z.get(vertex, [0] * count), _join(z_path, vertex))
            if len(block) != count:
                raise SchemaError(_join(z_path, vertex), f"has length {len(block)}, expected {count}")
            exps.extend(block)
        for vertex in z:
            if vertex not in space.vertices:
                raise SchemaError(_join(z_path, vertex), f"unknown vertex id {vertex!r}")
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coeff
    return LaurentPoly(space, terms)


def serialize_rational(value: RationalFunction) -> Dict[str, Any]:
    return {"numerator": serialize_laurent(value.numerator),
            "denominator": serialize_laurent(value.denominator)}


def parse_rational_function(obj: Any, vertex_order: Optional[Sequence[str]] = None,
                            path: str = "rational") -> RationalFunction:
    obj = _object(obj, path)
    numerator = parse_laurent(_require(obj, "numerator", path), vertex_order, _join(path, "numerator"))
    denominator = parse_laurent(_require(obj, "denominator", path), vertex_order, _join(path, "denominator"))
    try:
        return RationalFunction(numerator, [denominator])
    except KhaError as e:
        raise _wrap(path, e) from None


def serialize_element(element: ShuffleElement) -> Dict[str, Any]:
    return serialize_laurent(element.payload)


def parse_element(obj: Any, quiver: Quiver, torus: TorusWeighting, path: str = "element") -> ShuffleElement:
    payload = parse_laurent(obj, quiver.vertices, path)
    if payload.space.q_rank != torus.rank:
        raise SchemaError(_join(path, "vars.q"), f"torus rank is {torus.rank}, element has {payload.space.q_rank}")
    try:
        d = DimVector(payload.space.counts)
        return ShuffleElement(quiver, torus, d, payload.embed(element_space(quiver, torus, d)))
    except KhaError as e:
        raise _wrap(path, e) from None


def parse_module_element(obj: Any, quiver: Quiver, torus: TorusWeighting, framing: DimVector,
                         path: str = "module") -> FramedModuleElement:
    payload = parse_laurent(obj, (FRAMING_VERTEX,) + quiver.vertices, path)
    if payload.space.q_rank != torus.rank:
        raise SchemaError(_join(path, "vars.q"), f"torus rank is {torus.rank}, element has {payload.space.q_rank}")
    if payload.space.counts[0] != 1:
        raise SchemaError(_join(path, "vars.z"), f"framing vertex {FRAMING_VERTEX!r} must have exactly one variable")
    try:
        d = DimVector(payload.space.counts[1:])
        return FramedModuleElement(quiver, torus, framing, d, payload.embed(framed_space(quiver, torus, d)))
    except KhaError as e:
        raise _wrap(path, e) from None


def serialize_module_element(element: FramedModuleElement) -> Dict[str, Any]:
    return serialize_laurent(element.payload)


# Weights


def serialize_weights(weights: WeightList) -> Dict[str, Any]:
    return {"vars": serialize_space(weights.space), "weights": [list(w) for w in weights]}


def parse_weights(obj: Any, path: str = "weights") -> WeightList:
    obj = _object(obj, path)
    space = parse_space(obj.get("vars", {"q": obj.get("rank", 0)}), None, _join(path, "vars"))
    weights_path = _join(path, "weights")
    weights = []
    for k, item in enumerate(_list(_require(obj, "weights", path), weights_path)):
        vector = _int_list(item, _join(weights_path, k))
        if len(vector) != space.n_vars:
            raise SchemaError(_join(weights_path, k), f"has length {len(vector)}, expected {space.n_vars}")
        weights.append(vector)
    return WeightList(space, tuple(weights))


def serialize_cocharacter(lam: Cocharacter) -> List[int]:
    return list(lam.values)


def parse_cocharacter(obj: Any, n: Optional[int] = None, path: str = "lambda") -> Cocharacter:
    if isinstance(obj, dict):
        obj = _require(obj, "lambda", path)
        path = _join(path, "lambda")
    values = _int_list(obj, path)
    if n is not None and len(values) != n:
        raise SchemaError(path, f"has length {len(values)}, expected {n}")
    return Cocharacter(values)


def serialize_certificate(certificate: Certificate) -> Dict[str, Any]:
    return {"v": certificate.v, "sign": certificate.sign, "monomial": list(certificate.exponents)}


def parse_certificate(obj: Any, path: str = "certificate") -> Certificate:
    obj = _object(obj, path)
    sign = _int(_require(obj, "sign", path), _join(path, "sign"))
    if sign not in (1, -1):
        raise SchemaError(_join(path, "sign"), f"sign must be 1 or -1, got {sign}")
    return Certificate(_int(_require(obj, "v", path), _join(path, "v")), sign,
                       _int_list(_require(obj, "monomial", path), _join(path, "monomial")))
