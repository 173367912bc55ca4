"""Relative simplicial homology over the rationals and induced maps.

The chain complex of a pair (L, J) has one generator per simplex of L not
in J; boundary faces landing in J are projected to zero. The boundary sign
convention is the usual alternating one on the order-sorted vertex tuple.

Because the self-maps handled here are monotone along every simplex, the
induced chain map sends a simplex either to its (already sorted) image
simplex with coefficient +1, or to zero when the dimension drops or the
image lies in the lower subcomplex. No reordering signs ever arise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .complexes import (OrderedComplex, SimplicialSelfMap, Simplex, Subcomplex,
                        power, stabilization_exponent)
from .errors import InternalInvariantError, InvalidInputError
from .linalg import (RationalMatrix, Vector, image_basis, kernel_basis,
                     solve_in_span)


class RelativePair:
    """A nested pair (upper, lower) of subcomplexes of one parent complex."""

    __slots__ = ("upper", "lower")

    def __init__(self, upper: Subcomplex, lower: Subcomplex):
        if upper.parent is not lower.parent:
            raise InvalidInputError("pair members must share a parent complex")
        if not lower.members <= upper.members:
            raise InvalidInputError("the lower subcomplex is not contained in the upper one")
        self.upper = upper
        self.lower = lower

    @property
    def parent(self) -> OrderedComplex:
        return self.upper.parent

    @property
    def dimension(self) -> int:
        return self.upper.dimension

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RelativePair):
            return NotImplemented
        return self.upper == other.upper and self.lower == other.lower

    def __hash__(self) -> int:
        return hash((self.upper, self.lower))

    def __repr__(self) -> str:
        return f"RelativePair({len(self.upper)} over {len(self.lower)} simplices)"


def full_pair(K: OrderedComplex) -> RelativePair:
    """The absolute pair (K, empty)."""
    return RelativePair(K.full_subcomplex(), K.empty_subcomplex())


class RelativeChainBasis:
    """Ordered generators of the relative chain complex of a pair.

    ``basis[k]`` lists the k-simplices of the upper subcomplex outside the
    lower one, sorted lexicographically; ``index[k]`` inverts the list.
    """

    __slots__ = ("pair", "basis", "index")

    def __init__(self, pair: RelativePair):
        self.pair = pair
        dim = pair.dimension
        self.basis: list[list[Simplex]] = []
        self.index: list[dict[Simplex, int]] = []
        for k in range(dim + 1):
            gens = [s for s in pair.upper.simplices_of_dim(k) if s not in pair.lower.members]
            self.basis.append(gens)
            self.index.append({s: i for i, s in enumerate(gens)})

    @property
    def dimension(self) -> int:
        return len(self.basis) - 1

    def size(self, k: int) -> int:
        if 0 <= k < len(self.basis):
            return len(self.basis[k])
        return 0


def boundary_matrix(chain_basis: RelativeChainBasis, k: int) -> RationalMatrix:
    """The matrix of the boundary map C_k -> C_{k-1}, faces in J dropped."""
    rows = chain_basis.size(k - 1)
    cols = chain_basis.size(k)
    if cols == 0:
        return RationalMatrix.zeros(rows, 0)
    entries = [[Fraction(0)] * cols for _ in range(rows)]
    lower = chain_basis.pair.lower.members
    row_index = chain_basis.index[k - 1] if 0 <= k - 1 < len(chain_basis.index) else {}
    for j, s in enumerate(chain_basis.basis[k]):
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            if not face or face in lower:
                continue
            entries[row_index[face]][j] += Fraction(-1) ** i
    return RationalMatrix(rows, cols, tuple(tuple(r) for r in entries))


def boundary_matrices(chain_basis: RelativeChainBasis) -> list[RationalMatrix]:
    """Boundary matrices for k = 0 .. dim+1 (the last one has no columns)."""
    return [boundary_matrix(chain_basis, k) for k in range(chain_basis.dimension + 2)]


def chain_map(g: SimplicialSelfMap, pair: RelativePair,
              chain_basis: RelativeChainBasis | None = None) -> list[RationalMatrix]:
    """Matrices of the induced chain map of g on C_*(upper, lower).

    The column of a simplex is the basis vector of its sorted image when the
    image keeps the dimension and stays outside the lower subcomplex, and
    zero otherwise. Commutation with the boundary is asserted.
    """
    for part, label in ((pair.upper, "upper"), (pair.lower, "lower")):
        for s in part.members:
            if g.image_simplex(s) not in part.members:
                raise InvalidInputError(
                    f"the {label} subcomplex is not invariant: "
                    f"{pair.parent.simplex_label(s)} maps to "
                    f"{pair.parent.simplex_label(g.image_simplex(s))} outside it")
    cb = chain_basis or RelativeChainBasis(pair)
    matrices = []
    for k in range(cb.dimension + 1):
        gens = cb.basis[k]
        n = len(gens)
        entries = [[Fraction(0)] * n for _ in range(n)]
        for j, s in enumerate(gens):
            image = g.image_simplex(s)
            if len(image) != len(s) or image in pair.lower.members:
                continue
            entries[cb.index[k][image]][j] = Fraction(1)
        matrices.append(RationalMatrix(n, n, tuple(tuple(r) for r in entries)))

    boundaries = [boundary_matrix(cb, k) for k in range(cb.dimension + 1)]
    for k in range(1, cb.dimension + 1):
        if boundaries[k] @ matrices[k] != matrices[k - 1] @ boundaries[k]:
            raise InternalInvariantError(
                f"chain map does not commute with the boundary in dimension {k}")
    return matrices


@dataclass(frozen=True)
class HomologyBasis:
    """A chosen basis of the relative homology of a pair.

    Per dimension k: ``boundary_basis[k]`` spans B_k = im(boundary_{k+1});
    ``representatives[k]`` are cycles extending it to a basis of
    Z_k = ker(boundary_k), so their classes form a basis of H_k.
    """

    pair: RelativePair
    chain_basis: RelativeChainBasis
    boundaries: tuple[RationalMatrix, ...]
    boundary_basis: tuple[tuple[Vector, ...], ...]
    representatives: tuple[tuple[Vector, ...], ...]

    @property
    def betti(self) -> tuple[int, ...]:
        return tuple(len(reps) for reps in self.representatives)

    def betti_padded(self, up_to: int) -> tuple[int, ...]:
        b = self.betti
        return tuple(b[k] if k < len(b) else 0 for k in range(up_to + 1))


def relative_homology(pair: RelativePair) -> HomologyBasis:
    """Compute Betti numbers and an explicit homology basis of a pair.

    H_k(X, X) vanishes and H_k(X, empty) is absolute (non-reduced) homology,
    so the class of every vertex of a connected complex contributes one to
    b_0. Representatives are picked deterministically: the boundary image
    basis is extended by the first kernel basis vectors independent of it.
    """
    cb = RelativeChainBasis(pair)
    boundaries = tuple(boundary_matrix(cb, k) for k in range(cb.dimension + 2))
    for k in range(1, len(boundaries)):
        if not (boundaries[k - 1] @ boundaries[k]).is_zero():
            raise InternalInvariantError(
                f"boundary of boundary is non-zero in dimension {k}")
    boundary_bases = []
    rep_lists = []
    for k in range(cb.dimension + 1):
        cycles = kernel_basis(boundaries[k])
        bdries = image_basis(boundaries[k + 1])
        span: list[Vector] = list(bdries)
        reps: list[Vector] = []
        for z in cycles:
            if solve_in_span(span, z) is None:
                reps.append(z)
                span.append(z)
        if len(reps) != len(cycles) - len(bdries):
            raise InternalInvariantError(
                "boundary image is not contained in the cycle space")
        boundary_bases.append(tuple(bdries))
        rep_lists.append(tuple(reps))
    return HomologyBasis(pair, cb, boundaries, tuple(boundary_bases), tuple(rep_lists))


@dataclass(frozen=True)
class InducedHomologyMap:
    """The matrix of H_k(g) on the chosen homology basis of a pair."""

    k: int
    matrix: RationalMatrix


def induced_matrix(chain_matrix_k: RationalMatrix, homology: HomologyBasis, k: int) -> RationalMatrix:
    """Induced map in dimension k from a precomputed chain-map matrix."""
    if not 0 <= k < len(homology.representatives):
        return RationalMatrix.zeros(0, 0)
    reps = homology.representatives[k]
    bdries = homology.boundary_basis[k]
    if not reps:
        return RationalMatrix.zeros(0, 0)
    boundary_k = homology.boundaries[k]
    columns = []
    for z in reps:
        w = chain_matrix_k.matvec(z)
        if any(x != 0 for x in boundary_k.matvec(w)):
            raise InternalInvariantError("image of a cycle is not a cycle")
        coeffs = solve_in_span(list(bdries) + list(reps), w)
        if coeffs is None:
            raise InternalInvariantError(
                "image cycle is not expressible in the homology basis")
        columns.append(coeffs[len(bdries):])
    return RationalMatrix.from_columns(columns, len(reps))


def induced_map(g: SimplicialSelfMap, pair: RelativePair, k: int,
                homology: HomologyBasis | None = None) -> InducedHomologyMap:
    """The morphism H_k(g) on H_k(upper, lower), as a matrix.

    Invariance of both subcomplexes under g is required (and checked by the
    underlying chain map); the matrix does not depend on the choice of
    representatives within their classes.
    """
    H = homology or relative_homology(pair)
    if not 0 <= k <= H.chain_basis.dimension:
        return InducedHomologyMap(k, RationalMatrix.zeros(0, 0))
    matrices = chain_map(g, pair, H.chain_basis)
    return InducedHomologyMap(k, induced_matrix(matrices[k], H, k))


def trace(m: InducedHomologyMap | RationalMatrix) -> Fraction:
    """Sum of the diagonal; basis independent for induced maps."""
    matrix = m.matrix if isinstance(m, InducedHomologyMap) else m
    return matrix.trace()


def integer_trace(m: InducedHomologyMap | RationalMatrix) -> Fraction:
    """Trace, asserting the integrality every validated input guarantees."""
    t = trace(m)
    if t.denominator != 1:
        raise InternalInvariantError(f"trace {t} is not an integer")
    return t


def lefschetz_number(g: SimplicialSelfMap, K: OrderedComplex, l: int = 1) -> Fraction:
    """The alternating sum of traces of H_k(g^l) on the absolute homology.

    For the identity this is the Euler characteristic of K.
    """
    gl = power(g, l)
    pair = full_pair(K)
    H = relative_homology(pair)
    matrices = chain_map(gl, pair, H.chain_basis)
    total = Fraction(0)
    for k in range(K.dimension + 1):
        total += Fraction(-1) ** k * integer_trace(induced_matrix(matrices[k], H, k))
    return total


def verify_chain_functoriality(g: SimplicialSelfMap, pair: RelativePair, l: int) -> bool:
    """Check g^l at chain level against matrix powers, plus stabilization.

    True iff the chain map of the composed vertex map equals the l-th matrix
    power of the chain map of g in every dimension, and the matrices of
    g^{N+1} and g^N coincide for the stabilization exponent N.
    """
    if isinstance(l, bool) or not isinstance(l, int) or l < 1:
        raise InvalidInputError(f"power must be a positive integer, got {l!r}")
    cb = RelativeChainBasis(pair)
    base = chain_map(g, pair, cb)
    composed = chain_map(power(g, l), pair, cb)
    for mk, ck in zip(base, composed):
        if mk ** l != ck:
            return False
    n_stab = stabilization_exponent(g)

    def matrices_of_power(exponent: int) -> list[RationalMatrix]:
        if exponent == 0:
            return [RationalMatrix.identity(m.rows) for m in base]
        return chain_map(power(g, exponent), pair, cb)

    stable = matrices_of_power(n_stab)
    following = matrices_of_power(n_stab + 1)
    return all(a == b for a, b in zip(stable, following))
