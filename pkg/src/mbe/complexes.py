"""Ordered simplicial complexes, subcomplexes, filtrations, and self-maps.

Vertices are identified with their position in the declared vertex order,
so a simplex is a strictly increasing tuple of vertex ids. Every container
here is immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InternalInvariantError, InvalidInputError

Simplex = tuple[int, ...]


def make_simplex(vertices: Iterable[int]) -> Simplex:
    """Canonicalize a vertex collection into a sorted, duplicate-free tuple."""
    s = tuple(sorted(vertices))
    if not s:
        raise InvalidInputError("a simplex needs at least one vertex")
    for a, b in zip(s, s[1:]):
        if a == b:
            raise InvalidInputError(f"repeated vertex {a} in simplex {tuple(vertices)!r}")
    return s


def facets(s: Simplex) -> list[Simplex]:
    """The codimension-1 faces, in the order of the omitted vertex."""
    if len(s) == 1:
        return []
    return [s[:i] + s[i + 1:] for i in range(len(s))]


def proper_faces(s: Simplex) -> list[Simplex]:
    """All proper faces of ``s`` (excluding ``s`` itself)."""
    out = []
    for k in range(1, len(s)):
        out.extend(itertools.combinations(s, k))
    return out


def close_under_faces(simplices: Iterable[Simplex]) -> set[Simplex]:
    closed: set[Simplex] = set()
    todo = list(simplices)
    while todo:
        s = todo.pop()
        if s in closed:
            continue
        closed.add(s)
        todo.extend(f for f in facets(s) if f not in closed)
    return closed


class OrderedComplex:
    """A finite, non-empty simplicial complex with a total order on its vertices.

    The constructor demands a face-closed simplex set; use :meth:`build` to
    close an arbitrary collection first. Every vertex id in
    ``range(vertex_count)`` is automatically present as a 0-simplex.
    """

    __slots__ = ("vertex_names", "vertex_count", "_name_to_id", "_by_dim", "_all")

    def __init__(self, vertex_names: Sequence[str], simplices: Iterable[Simplex]):
        names = tuple(vertex_names)
        if not names:
            raise InvalidInputError("a complex needs at least one vertex")
        if len(set(names)) != len(names):
            raise InvalidInputError("duplicate vertex names in the vertex order")
        self.vertex_names = names
        self.vertex_count = len(names)
        self._name_to_id = {name: i for i, name in enumerate(names)}

        sset = {make_simplex(s) for s in simplices}
        sset.update((v,) for v in range(self.vertex_count))
        for s in sset:
            if s[0] < 0 or s[-1] >= self.vertex_count:
                raise InvalidInputError(f"simplex {s} uses a vertex id outside the order")
        for s in sset:
            for f in facets(s):
                if f not in sset:
                    raise InvalidInputError(
                        f"simplex set is not face-closed: {f} (face of {s}) is missing"
                    )
        dim = max(len(s) for s in sset) - 1
        by_dim: list[set[Simplex]] = [set() for _ in range(dim + 1)]
        for s in sset:
            by_dim[len(s) - 1].add(s)
        self._by_dim = tuple(frozenset(d) for d in by_dim)
        self._all = frozenset(sset)

    @classmethod
    def build(cls, vertex_names: Sequence[str], simplices: Iterable[Simplex]) -> "OrderedComplex":
        """Construct from any simplex collection, closing under faces."""
        return cls(vertex_names, close_under_faces(make_simplex(s) for s in simplices))

    @property
    def dimension(self) -> int:
        return len(self._by_dim) - 1

    @property
    def simplex_count(self) -> int:
        return len(self._all)

    def simplices(self, dim: int | None = None) -> Iterator[Simplex]:
        """Iterate simplices in a canonical (dimension, lexicographic) order."""
        if dim is not None:
            if 0 <= dim < len(self._by_dim):
                yield from sorted(self._by_dim[dim])
            return
        for layer in self._by_dim:
            yield from sorted(layer)

    def simplices_of_dim(self, dim: int) -> list[Simplex]:
        if 0 <= dim < len(self._by_dim):
            return sorted(self._by_dim[dim])
        return []

    def __contains__(self, s: object) -> bool:
        return s in self._all

    def __len__(self) -> int:
        return len(self._all)

    def id_of(self, name: str) -> int:
        try:
            return self._name_to_id[name]
        except KeyError:
            raise InvalidInputError(f"unknown vertex name {name!r}") from None

    def name_of(self, vertex: int) -> str:
        return self.vertex_names[vertex]

    def simplex_label(self, s: Simplex) -> str:
        """Human-readable form, e.g. ``v0`` or ``[v0,v2]``."""
        if len(s) == 1:
            return self.vertex_names[s[0]]
        return "[" + ",".join(self.vertex_names[v] for v in s) + "]"

    def full_subcomplex(self) -> "Subcomplex":
        return Subcomplex(self, self._all, _checked=True)

    def empty_subcomplex(self) -> "Subcomplex":
        return Subcomplex(self, frozenset(), _checked=True)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrderedComplex):
            return NotImplemented
        return self.vertex_names == other.vertex_names and self._all == other._all

    def __hash__(self) -> int:
        return hash((self.vertex_names, self._all))

    def __repr__(self) -> str:
        return (f"OrderedComplex({self.vertex_count} vertices, "
                f"{self.simplex_count} simplices, dim {self.dimension})")


class Subcomplex:
    """A face-closed subset of a parent complex, with the induced order.

    The empty subcomplex is legal (it plays the role of the bottom of every
    filtration); only top-level complexes must be non-empty.
    """

    __slots__ = ("parent", "members", "_by_dim")

    def __init__(self, parent: OrderedComplex, members: Iterable[Simplex], *, _checked: bool = False):
        mset = frozenset(members)
        if not _checked:
            for s in mset:
                if s not in parent:
                    raise InvalidInputError(
                        f"simplex {parent.simplex_label(s) if all(0 <= v < parent.vertex_count for v in s) else s} "
                        f"does not belong to the parent complex")
            for s in mset:
                for f in facets(s):
                    if f not in mset:
                        raise InvalidInputError(
                            f"subcomplex is not face-closed: missing {f} (face of {s})")
        self.parent = parent
        self.members = mset
        if mset:
            dim = max(len(s) for s in mset) - 1
            by_dim: list[set[Simplex]] = [set() for _ in range(dim + 1)]
            for s in mset:
                by_dim[len(s) - 1].add(s)
            self._by_dim = tuple(frozenset(d) for d in by_dim)
        else:
            self._by_dim = ()

    @property
    def dimension(self) -> int:
        return len(self._by_dim) - 1

    @property
    def is_empty(self) -> bool:
        return not self.members

    def simplices_of_dim(self, dim: int) -> list[Simplex]:
        if 0 <= dim < len(self._by_dim):
            return sorted(self._by_dim[dim])
        return []

    def simplices(self) -> Iterator[Simplex]:
        for layer in self._by_dim:
            yield from sorted(layer)

    def __contains__(self, s: object) -> bool:
        return s in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __le__(self, other: "Subcomplex") -> bool:
        return self.members <= other.members

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subcomplex):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __repr__(self) -> str:
        return f"Subcomplex({len(self.members)} simplices of {self.parent!r})"


def closure(parent: OrderedComplex, seed: Iterable[Simplex]) -> Subcomplex:
    """The smallest face-closed subset of ``parent`` containing ``seed``."""
    seed_list = [make_simplex(s) for s in seed]
    for s in seed_list:
        if s not in parent:
            raise InvalidInputError(
                f"seed simplex {s} does not belong to the parent complex")
    return Subcomplex(parent, close_under_faces(seed_list), _checked=True)


class MorseBottFunction:
    """An integer level for each simplex of a complex.

    Levels run over {0, ..., max_value}; the sublevel subcomplexes
    K_i = closure of {f <= i} form the induced filtration. The function may
    be partial at construction time (validators report the gap); it must be
    total before a filtration can be built. Monotonicity on faces is *not*
    required -- the closure in the sublevel definition keeps non-monotone
    functions meaningful -- but :meth:`is_monotone` reports it.
    """

    __slots__ = ("complex", "values", "max_value")

    def __init__(self, complex: OrderedComplex, values: Mapping[Simplex, int] | Iterable[tuple[Simplex, int]]):
        items = values.items() if isinstance(values, Mapping) else values
        table: dict[Simplex, int] = {}
        for raw, level in items:
            s = make_simplex(raw)
            if s not in complex:
                raise InvalidInputError(
                    f"f assigns a value to {s}, which is not a simplex of the complex")
            if isinstance(level, bool) or not isinstance(level, int):
                raise InvalidInputError(f"f({s}) = {level!r} is not an integer")
            if level < 0:
                raise InvalidInputError(f"f({s}) = {level} is negative")
            table[s] = level
        if not table:
            raise InvalidInputError("f assigns no values")
        self.complex = complex
        self.values = table
        self.max_value = max(table.values())

    def __call__(self, s: Simplex) -> int:
        try:
            return self.values[s]
        except KeyError:
            raise InvalidInputError(
                f"f is undefined on {self.complex.simplex_label(s)}") from None

    def missing(self) -> list[Simplex]:
        """Simplices of the complex without an assigned level."""
        return [s for s in self.complex.simplices() if s not in self.values]

    @property
    def is_total(self) -> bool:
        return len(self.values) == self.complex.simplex_count

    def is_monotone(self) -> bool:
        """True when f(face) <= f(simplex) for every facet (informational)."""
        for s, level in self.values.items():
            for f in facets(s):
                if self.values.get(f, level) > level:
                    return False
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MorseBottFunction):
            return NotImplemented
        return self.complex == other.complex and self.values == other.values

    def __hash__(self) -> int:
        return hash((self.complex, tuple(sorted(self.values.items()))))


def sublevel_filtration(K: OrderedComplex, f: MorseBottFunction) -> list[Subcomplex]:
    """The filtration [K_{-1}, K_0, ..., K_m] of sublevel subcomplexes.

    Entry ``i + 1`` is K_i; K_{-1} is the empty subcomplex and K_m = K.
    Each K_i is the closure of the simplices with f <= i, so a non-monotone
    f still yields well-defined, nested, face-closed levels.
    """
    missing = f.missing()
    if missing:
        labels = ", ".join(K.simplex_label(s) for s in missing)
        raise InvalidInputError(f"f is not total; missing simplices: {labels}")
    levels = [K.empty_subcomplex()]
    for i in range(f.max_value + 1):
        seed = [s for s in K.simplices() if f(s) <= i]
        levels.append(closure(K, seed))
    return levels


class SimplicialSelfMap:
    """A vertex-to-vertex map inducing a simplicial self-map of the complex.

    Construction only checks shape; :func:`validate_self_map` checks the
    actual hypotheses (simpliciality, order preservation, stabilization).
    """

    __slots__ = ("complex", "images")

    def __init__(self, complex: OrderedComplex, images: Sequence[int]):
        imgs = tuple(images)
        if len(imgs) != complex.vertex_count:
            raise InvalidInputError(
                f"vertex image has length {len(imgs)}, expected {complex.vertex_count}")
        for v in imgs:
            if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < complex.vertex_count:
                raise InvalidInputError(f"vertex image {v!r} is not a valid vertex id")
        self.complex = complex
        self.images = imgs

    @classmethod
    def identity(cls, complex: OrderedComplex) -> "SimplicialSelfMap":
        return cls(complex, tuple(range(complex.vertex_count)))

    def __call__(self, vertex: int) -> int:
        return self.images[vertex]

    def image_simplex(self, s: Simplex) -> Simplex:
        """The simplex spanned by the image vertices (dimension may drop)."""
        return tuple(sorted({self.images[v] for v in s}))

    @property
    def is_identity(self) -> bool:
        return self.images == tuple(range(self.complex.vertex_count))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialSelfMap):
            return NotImplemented
        return self.complex == other.complex and self.images == other.images

    def __hash__(self) -> int:
        return hash((self.complex, self.images))

    def __repr__(self) -> str:
        return f"SimplicialSelfMap({self.images})"


@dataclass(frozen=True)
class SelfMapValidation:
    """Outcome of validating a self-map; never raises, always reports.

    ``order_violations`` lists edges (u, v) with u < v in the vertex order
    whose images reverse it. Order preservation is checked on every pair of
    vertices that share a simplex -- exactly the pairs the induced chain map
    cares about. ``nonstabilizing`` lists vertices whose forward orbit
    cycles with period > 1; such maps can never satisfy g^{N+1} = g^N, which
    every trace computation here relies on, so they are rejected as well.
    """

    order_violations: tuple[tuple[int, int], ...]
    nonsimplicial: tuple[Simplex, ...]
    nonstabilizing: tuple[int, ...]
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems

    @property
    def order_preserving(self) -> bool:
        return not self.order_violations and not self.nonstabilizing

    @property
    def simplicial(self) -> bool:
        return not self.nonsimplicial


def validate_self_map(K: OrderedComplex, g: SimplicialSelfMap) -> SelfMapValidation:
    order_violations = []
    nonsimplicial = []
    nonstabilizing = []
    problems = []

    for u, v in K.simplices_of_dim(1):
        if g(u) > g(v):
            order_violations.append((u, v))
            problems.append(
                f"order violation at ({K.name_of(u)}, {K.name_of(v)}): "
                f"{K.name_of(u)} <= {K.name_of(v)} but "
                f"g({K.name_of(u)}) = {K.name_of(g(u))} > g({K.name_of(v)}) = {K.name_of(g(v))}")

    for dim in range(1, K.dimension + 1):
        for s in K.simplices_of_dim(dim):
            if g.image_simplex(s) not in K:
                nonsimplicial.append(s)
                problems.append(
                    f"non-simplicial image: g({K.simplex_label(s)}) spans "
                    f"{g.image_simplex(s)}, which is not a simplex of the complex")

    for v in range(K.vertex_count):
        seen = {v: 0}
        cur = v
        for step in range(1, K.vertex_count + 2):
            cur = g(cur)
            if cur in seen:
                if step - seen[cur] > 1:
                    nonstabilizing.append(v)
                    problems.append(
                        f"orbit of {K.name_of(v)} never settles: it enters a cycle "
                        f"of length {step - seen[cur]}")
                break
            seen[cur] = step

    return SelfMapValidation(tuple(order_violations), tuple(nonsimplicial),
                             tuple(nonstabilizing), tuple(problems))


def check_invariance(g: SimplicialSelfMap, L: Subcomplex) -> bool:
    """True iff the image of every simplex of L spans a simplex of L."""
    return all(g.image_simplex(s) in L.members for s in L.members)


@dataclass(frozen=True)
class CompatibilityResult:
    """Outcome of checking f(g(sigma)) <= f(sigma); lists all violations."""

    violations: tuple[tuple[Simplex, int, int], ...]  # (simplex, f(simplex), f(image))
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_compatibility(f: MorseBottFunction, g: SimplicialSelfMap) -> CompatibilityResult:
    K = f.complex
    missing = f.missing()
    if missing:
        labels = ", ".join(K.simplex_label(s) for s in missing)
        raise InvalidInputError(f"f is not total; missing simplices: {labels}")
    violations = []
    problems = []
    for s in K.simplices():
        image = g.image_simplex(s)
        if f(image) > f(s):
            violations.append((s, f(s), f(image)))
            problems.append(
                f"f(g({K.simplex_label(s)})) = f({K.simplex_label(image)}) = {f(image)} "
                f"> f({K.simplex_label(s)}) = {f(s)}")
    return CompatibilityResult(tuple(violations), tuple(problems))


def power(g: SimplicialSelfMap, l: int) -> SimplicialSelfMap:
    """The l-fold composition of g with itself; l must be at least 1."""
    if isinstance(l, bool) or not isinstance(l, int) or l < 1:
        raise InvalidInputError(
            f"power must be a positive integer, got {l!r} (request the identity explicitly)")
    images = tuple(range(g.complex.vertex_count))
    for _ in range(l):
        images = tuple(g.images[v] for v in images)
    return SimplicialSelfMap(g.complex, images)


def stabilization_exponent(g: SimplicialSelfMap) -> int:
    """The least N >= 0 with g^{N+1} = g^N on vertices.

    Termination is guaranteed for maps accepted by validate_self_map; the
    safety cap only trips when that invariant was breached.
    """
    current = tuple(range(g.complex.vertex_count))
    for n in range(g.complex.vertex_count + 1):
        following = tuple(g.images[v] for v in current)
        if following == current:
            return n
        current = following
    raise InternalInvariantError(
        "vertex orbits did not stabilize within the vertex count; "
        "the self-map should have been rejected by validation")
