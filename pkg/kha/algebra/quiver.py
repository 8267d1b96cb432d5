"""Quivers, dimension vectors, King stability and the quiver constructions.

Paths and cycles are stored in traversal order: the target of edge k is the
source of edge k+1.  The composition word ``omega e_bar e`` is therefore the
traversal ``[e, e_bar, omega]``.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .error_utils import PotentialError, QuiverError, StabilityError
from .validation import (
    ASSUMPTION_A_WEIGHT,
    FRAMING_VERTEX,
    TYPE_A_EDGE_PREFIX,
    bar_id,
    frame_id,
    omega_id,
    require_dimension_entries,
    require_positive_epsilon,
    require_unique,
)


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    tgt: str

    @property
    def is_loop(self) -> bool:
        return self.src == self.tgt


@dataclass(frozen=True)
class Quiver:
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        known = require_unique(self.vertices, "vertex")
        require_unique((e.id for e in self.edges), "edge")
        for e in self.edges:
            if e.src not in known or e.tgt not in known:
                raise QuiverError(f"edge {e.id!r} joins undeclared vertices {e.src!r} -> {e.tgt!r}")

    @cached_property
    def _edge_index(self) -> Dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _vertex_index(self) -> Dict[str, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edge_index[edge_id]
        except KeyError:
            raise QuiverError(f"unknown edge id {edge_id!r}") from None

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._edge_index

    def vertex_index(self, vertex: str) -> int:
        try:
            return self._vertex_index[vertex]
        except KeyError:
            raise QuiverError(f"unknown vertex id {vertex!r}") from None

    def edges_between(self, src: str, tgt: str) -> Tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.src == src and e.tgt == tgt)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class DimVector:
    """Per-vertex dimensions, aligned with the vertex order of a quiver."""

    entries: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        require_dimension_entries(self.entries)

    @classmethod
    def zero(cls, n: int) -> "DimVector":
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, i: int) -> "DimVector":
        """The vector eps_i (0-based vertex position)."""
        return cls(tuple(int(k == i) for k in range(n)))

    @classmethod
    def root(cls, n: int, a: int, b: int) -> "DimVector":
        """The type-A root eps_a + ... + eps_b (0-based, inclusive)."""
        if not 0 <= a <= b < n:
            raise QuiverError(f"root interval [{a}, {b}] outside 0..{n - 1}")
        return cls(tuple(int(a <= k <= b) for k in range(n)))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, k: int) -> int:
        return self.entries[k]

    def _check_length(self, other: "DimVector") -> None:
        if len(self) != len(other):
            raise QuiverError(f"dimension vectors of different lengths {len(self)} and {len(other)}")

    def __add__(self, other: "DimVector") -> "DimVector":
        self._check_length(other)
        return DimVector(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: "DimVector") -> "DimVector":
        self._check_length(other)
        return DimVector(tuple(a - b for a, b in zip(self, other)))

    def scaled(self, k: int) -> "DimVector":
        return DimVector(tuple(k * a for a in self))

    @property
    def total(self) -> int:
        return sum(self.entries)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def sub_vectors(self) -> Iterator["DimVector"]:
        """Every e with 0 <= e <= self, in lexicographic order."""
        for entries in product(*(range(a + 1) for a in self.entries)):
            yield DimVector(entries)


def all_dimension_vectors(n: int, total_bound: int) -> Iterator[DimVector]:
    """Nonzero dimension vectors of length n with total at most total_bound."""
    for entries in product(range(total_bound + 1), repeat=n):
        if 0 < sum(entries) <= total_bound:
            yield DimVector(entries)


def _exact(value) -> Fraction:
    if isinstance(value, float):
        raise StabilityError(f"floating point stability value {value!r} is not exact")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise StabilityError(f"not an exact rational: {value!r}") from None


@dataclass(frozen=True)
class StabilityCondition:
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(_exact(v) for v in self.values))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> Fraction:
        return self.values[k]

    @classmethod
    def constant(cls, n: int, c) -> "StabilityCondition":
        return cls((c,) * n)


def slope(theta: StabilityCondition, d: DimVector) -> Fraction:
    if len(theta) != len(d):
        raise StabilityError(f"stability has {len(theta)} entries but dimension vector has {len(d)}")
    if d.is_zero():
        raise StabilityError("slope undefined for zero vector")
    return sum((t * a for t, a in zip(theta.values, d)), Fraction(0)) / d.total


def default_epsilon(total_bound: int) -> Fraction:
    """Framing perturbation 1/(2(N+1)) valid for all d with total at most N."""
    if total_bound < 0:
        raise StabilityError(f"dimension bound must be nonnegative, got {total_bound}")
    return Fraction(1, 2 * (total_bound + 1))


def extend_stability(theta: StabilityCondition, mu, eps) -> StabilityCondition:
    """theta^f = (mu + eps; theta), the framing vertex first."""
    mu, eps = _exact(mu), _exact(eps)
    require_positive_epsilon(eps)
    return StabilityCondition((mu + eps,) + theta.values)


def slope_monoid(theta: StabilityCondition, mu, total_bound: int) -> List[DimVector]:
    """Nonzero dimension vectors of slope mu with total at most total_bound."""
    mu = _exact(mu)
    return [d for d in all_dimension_vectors(len(theta), total_bound) if slope(theta, d) == mu]


def _check_path(quiver: Quiver, path: Sequence[str], where: str) -> Tuple[Edge, ...]:
    edges = []
    for position, edge_id in enumerate(path):
        if not quiver.has_edge(edge_id):
            raise PotentialError(f"{where}: unknown edge id {edge_id!r} at position {position}")
        edges.append(quiver.edge(edge_id))
    for position, (left, right) in enumerate(zip(edges, edges[1:])):
        if left.tgt != right.src:
            raise PotentialError(
                f"{where}: edges {left.id!r} and {right.id!r} at positions {position}, {position + 1} "
                f"are not composable ({left.tgt!r} != {right.src!r})")
    return tuple(edges)


@dataclass(frozen=True)
class PotentialTerm:
    coeff: int
    cycle: Tuple[str, ...]


@dataclass(frozen=True)
class Potential:
    """A linear combination of cycles; the empty term list is the zero potential."""

    quiver: Quiver
    terms: Tuple[PotentialTerm, ...] = ()

    def __post_init__(self):
        terms = tuple(t if isinstance(t, PotentialTerm) else PotentialTerm(int(t[0]), tuple(t[1]))
                      for t in self.terms)
        object.__setattr__(self, "terms", terms)
        for k, term in enumerate(terms):
            where = f"potential term {k}"
            if not term.cycle:
                raise PotentialError(f"{where}: cycle must be nonempty")
            edges = _check_path(self.quiver, term.cycle, where)
            if edges[-1].tgt != edges[0].src:
                raise PotentialError(
                    f"{where}: cycle is not closed ({edges[-1].tgt!r} != {edges[0].src!r})")

    def is_zero(self) -> bool:
        return not self.terms


@dataclass(frozen=True)
class NoncommPathPoly:
    """Integer combination of paths from ``source`` to ``target``.

    Terms are kept combined, nonzero and sorted by path.
    """

    source: str
    target: str
    terms: Tuple[Tuple[int, Tuple[str, ...]], ...] = ()

    @classmethod
    def build(cls, quiver: Quiver, source: str, target: str,
              terms: Iterable[Tuple[int, Sequence[str]]]) -> "NoncommPathPoly":
        quiver.vertex_index(source)
        quiver.vertex_index(target)
        combined: Dict[Tuple[str, ...], int] = {}
        for coeff, path in terms:
            path = tuple(path)
            combined[path] = combined.get(path, 0) + coeff
        for path in combined:
            where = f"path {list(path)}"
            edges = _check_path(quiver, path, where)
            start, end = (edges[0].src, edges[-1].tgt) if edges else (source, source)
            if (start, end) != (source, target):
                raise PotentialError(f"{where} runs {start!r} -> {end!r}, expected {source!r} -> {target!r}")
        ordered = tuple((c, p) for p, c in sorted(combined.items()) if c)
        return cls(source, target, ordered)

    def is_zero(self) -> bool:
        return not self.terms


@dataclass(frozen=True)
class TorusWeighting:
    """Integer weight vectors in Z^rank per edge; unlisted edges have weight zero."""

    rank: int
    weights: Tuple[Tuple[str, Tuple[int, ...]], ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise QuiverError(f"torus rank must be nonnegative, got {self.rank}")
        items = self.weights.items() if isinstance(self.weights, Mapping) else self.weights
        normalized = tuple(sorted((str(e), tuple(int(x) for x in w)) for e, w in items))
        require_unique((e for e, _ in normalized), "torus edge")
        for edge_id, w in normalized:
            if len(w) != self.rank:
                raise QuiverError(f"torus weight of edge {edge_id!r} has length {len(w)}, expected {self.rank}")
        object.__setattr__(self, "weights", normalized)

    @cached_property
    def _table(self) -> Dict[str, Tuple[int, ...]]:
        return dict(self.weights)

    def weight(self, edge_id: str) -> Tuple[int, ...]:
        return self._table.get(edge_id, (0,) * self.rank)

    def validate_against(self, quiver: Quiver) -> "TorusWeighting":
        for edge_id, _ in self.weights:
            if not quiver.has_edge(edge_id):
                raise QuiverError(f"torus weighting names unknown edge id {edge_id!r}")
        return self


def jordan_quiver() -> Quiver:
    return Quiver(("1",), (Edge("f", "1", "1"),))


def type_a_quiver(n: int) -> Quiver:
    """Vertices 1..n with one edge i -> i+1."""
    if n < 1:
        raise QuiverError(f"type A quiver needs at least one vertex, got {n}")
    vertices = tuple(str(i) for i in range(1, n + 1))
    edges = tuple(Edge(f"{TYPE_A_EDGE_PREFIX}{i}", str(i), str(i + 1)) for i in range(1, n))
    return Quiver(vertices, edges)


def is_type_a(quiver: Quiver) -> bool:
    n = quiver.n_vertices
    if len(quiver.edges) != n - 1:
        return False
    expected = {(quiver.vertices[k], quiver.vertices[k + 1]) for k in range(n - 1)}
    return {(e.src, e.tgt) for e in quiver.edges} == expected


def double_quiver(quiver: Quiver) -> Quiver:
    reversed_edges = tuple(Edge(bar_id(e.id), e.tgt, e.src) for e in quiver.edges)
    return Quiver(quiver.vertices, quiver.edges + reversed_edges)


def tripled_quiver(quiver: Quiver) -> Tuple[Quiver, Potential]:
    """Double quiver plus a loop omega_i per vertex, with its canonical potential.

    Each edge e contributes ``omega_{s(e)} e e_bar`` and ``-omega_{t(e)} e_bar e``,
    which are the two composable halves of ``omega [e_bar, e]``.
    """
    doubled = double_quiver(quiver)
    loops = tuple(Edge(omega_id(v), v, v) for v in quiver.vertices)
    tripled = Quiver(quiver.vertices, doubled.edges + loops)
    terms = []
    for e in quiver.edges:
        terms.append(PotentialTerm(1, (omega_id(e.src), e.id, bar_id(e.id))))
        terms.append(PotentialTerm(-1, (omega_id(e.tgt), bar_id(e.id), e.id)))
    return tripled, Potential(tripled, tuple(terms))


def framed_quiver(quiver: Quiver, framing: DimVector) -> Quiver:
    if len(framing) != quiver.n_vertices:
        raise QuiverError(f"framing has {len(framing)} entries for {quiver.n_vertices} vertices")
    if FRAMING_VERTEX in quiver.vertices:
        raise QuiverError(f"quiver already has a vertex named {FRAMING_VERTEX!r}")
    frames = tuple(Edge(frame_id(v, k), FRAMING_VERTEX, v)
                   for v, count in zip(quiver.vertices, framing)
                   for k in range(1, count + 1))
    return Quiver((FRAMING_VERTEX,) + quiver.vertices, quiver.edges + frames)


def cyclic_derivative(potential: Potential, edge_id: str) -> NoncommPathPoly:
    quiver = potential.quiver
    edge = quiver.edge(edge_id)
    terms = []
    for term in potential.terms:
        cycle = term.cycle
        for j, e in enumerate(cycle):
            if e == edge_id:
                terms.append((term.coeff, cycle[j + 1:] + cycle[:j]))
    return NoncommPathPoly.build(quiver, edge.tgt, edge.src, terms)


def jacobi_relations(potential: Potential) -> Dict[str, NoncommPathPoly]:
    """Generators of the Jacobi ideal, one cyclic derivative per edge."""
    return {e.id: cyclic_derivative(potential, e.id) for e in potential.quiver.edges}


def preprojective_relation(quiver: Quiver, vertex: str) -> NoncommPathPoly:
    """The preprojective relation at ``vertex`` as a path polynomial on the double quiver."""
    quiver.vertex_index(vertex)
    terms = []
    for e in quiver.edges:
        if e.src == vertex:
            terms.append((1, (e.id, bar_id(e.id))))
        if e.tgt == vertex:
            terms.append((-1, (bar_id(e.id), e.id)))
    return NoncommPathPoly.build(double_quiver(quiver), vertex, vertex, terms)


def _cycle_counts(potential: Potential) -> List[List[int]]:
    position = {e.id: k for k, e in enumerate(potential.quiver.edges)}
    rows = []
    for term in potential.terms:
        row = [0] * len(position)
        for e in term.cycle:
            row[position[e]] += 1
        rows.append(row)
    return rows


def _solve_integer_system(rows: List[List[int]], rhs: List[int], n: int) -> Optional[List[int]]:
    """Integer solution of rows . w = rhs by unimodular column reduction, or None."""
    a = [list(r) for r in rows]
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap(j: int, k: int) -> None:
        for mat in (a, u):
            for row in mat:
                row[j], row[k] = row[k], row[j]

    def subtract(j: int, k: int, factor: int) -> None:
        for mat in (a, u):
            for row in mat:
                row[j] -= factor * row[k]

    pivot_of_row: Dict[int, int] = {}
    col = 0
    for i in range(len(a)):
        if col >= n:
            break
        while True:
            nonzero = [j for j in range(col, n) if a[i][j]]
            if not nonzero:
                break
            smallest = min(nonzero, key=lambda j: abs(a[i][j]))
            if smallest != col:
                swap(col, smallest)
            for j in range(col + 1, n):
                if a[i][j]:
                    subtract(j, col, a[i][j] // a[i][col])
            if not any(a[i][j] for j in range(col + 1, n)):
                break
        if col < n and a[i][col]:
            pivot_of_row[i] = col
            col += 1

    y = [0] * n
    for i, row in enumerate(a):
        residual = rhs[i] - sum(row[j] * y[j] for j in range(n))
        pivot = pivot_of_row.get(i)
        if pivot is None:
            if residual:
                return None
            continue
        if residual % row[pivot]:
            return None
        y[pivot] = residual // row[pivot]
    return [sum(u[i][j] * y[j] for j in range(n)) for i in range(n)]


def _lex_smallest_nonnegative(rows: List[List[int]], rhs: List[int], n: int) -> Optional[List[int]]:
    """Depth-first search in lexicographic order; counts and rhs are nonnegative."""
    bounds = []
    for j in range(n):
        caps = [rhs[i] // row[j] for i, row in enumerate(rows) if row[j] > 0]
        bounds.append(min(caps) if caps else 0)
    last_column = [max((j for j in range(n) if row[j]), default=-1) for row in rows]
    if any(last < 0 and rhs[i] for i, last in enumerate(last_column)):
        return None
    closing: Dict[int, List[int]] = {}
    for i, last in enumerate(last_column):
        closing.setdefault(last, []).append(i)

    partial = [0] * len(rows)
    chosen = [0] * n

    def search(j: int) -> bool:
        if j == n:
            return True
        for value in range(bounds[j] + 1):
            ok = True
            for i, row in enumerate(rows):
                partial[i] += row[j] * value
                if partial[i] > rhs[i]:
                    ok = False
            if ok:
                ok = all(partial[i] == rhs[i] for i in closing.get(j, ()))
            if ok:
                chosen[j] = value
                if search(j + 1):
                    return True
            for i, row in enumerate(rows):
                partial[i] -= row[j] * value
        return False

    return list(chosen) if search(0) else None


def check_assumption_A(potential: Potential,
                       weights: Optional[Mapping[str, int]] = None) -> Optional[Dict[str, int]]:
    """Per-edge integer weights making every cycle of W have total weight 2.

    With ``weights`` given, the candidate is verified and returned, or None.
    Otherwise the lexicographically smallest nonnegative solution is returned
    when one exists, else any integer solution, else None.
    """
    quiver = potential.quiver
    rows = _cycle_counts(potential)
    rhs = [ASSUMPTION_A_WEIGHT] * len(rows)
    n = len(quiver.edges)
    if weights is not None:
        for edge_id in weights:
            quiver.edge(edge_id)
        vector = [int(weights.get(e.id, 0)) for e in quiver.edges]
        ok = all(sum(c * w for c, w in zip(row, vector)) == ASSUMPTION_A_WEIGHT for row in rows)
        return {e.id: w for e, w in zip(quiver.edges, vector)} if ok else None
    solution = _solve_integer_system(rows, rhs, n)
    if solution is None:
        logging.info("Assumption A: no integer weighting exists")
        return None
    preferred = _lex_smallest_nonnegative(rows, rhs, n)
    if preferred is not None:
        solution = preferred
    return {e.id: w for e, w in zip(quiver.edges, solution)}


def check_invariance(potential: Potential, torus: TorusWeighting) -> bool:
    torus.validate_against(potential.quiver)
    for term in potential.terms:
        total = [0] * torus.rank
        for e in term.cycle:
            total = [a + b for a, b in zip(total, torus.weight(e))]
        if any(total):
            return False
    return True


def edge_torus(quiver: Quiver) -> TorusWeighting:
    """The full torus (C*)^E: edge k gets the k-th unit vector."""
    n = len(quiver.edges)
    return TorusWeighting(n, tuple((e.id, tuple(int(j == k) for j in range(n)))
                                   for k, e in enumerate(quiver.edges)))


def nakajima_torus(quiver: Quiver) -> TorusWeighting:
    """Weights on the tripled quiver of ``quiver``: +1 on e, -1 on e_bar, 0 on omega."""
    n = len(quiver.edges)
    weights = []
    for k, e in enumerate(quiver.edges):
        unit = tuple(int(j == k) for j in range(n))
        weights.append((e.id, unit))
        weights.append((bar_id(e.id), tuple(-x for x in unit)))
    return TorusWeighting(n, tuple(weights))


def cut_grading(quiver: Quiver, cut: Iterable[str]) -> Dict[str, int]:
    """Weight 2 on the cut edges, 0 elsewhere."""
    cut = set(cut)
    for edge_id in cut:
        quiver.edge(edge_id)
    return {e.id: ASSUMPTION_A_WEIGHT if e.id in cut else 0 for e in quiver.edges}


def omega_cut(quiver: Quiver) -> Tuple[str, ...]:
    """The cut {omega_i} of the tripled quiver of ``quiver``."""
    return tuple(omega_id(v) for v in quiver.vertices)


def unit_torus(quiver: Quiver) -> TorusWeighting:
    """Rank one, weight 1 on every edge."""
    return TorusWeighting(1, tuple((e.id, (1,)) for e in quiver.edges))
