"""Level classification, local traces, and the inequality engine.

A level function is admissible when every filtration step (K_{i+1}, K_i)
adds either a single critical simplex, a block of simplices in two
consecutive dimensions realizing a periodic orbit, or a collapsible pair.
On admissible input the strong inequalities compare alternating partial
sums of global traces against the same sums of local traces, with equality
in the top dimension; the weak inequalities follow by adding consecutive
strong rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .complexes import (MorseBottFunction, OrderedComplex, SimplicialSelfMap,
                        Simplex, Subcomplex, check_compatibility,
                        check_invariance, power, sublevel_filtration,
                        validate_self_map)
from .errors import InternalInvariantError, InvalidInputError
from .homology import (HomologyBasis, RelativePair, chain_map, full_pair,
                       induced_matrix, integer_trace, relative_homology)
from .linalg import RationalMatrix


@dataclass(frozen=True)
class CriticalSimplex:
    """A level adding exactly one simplex, carrying homology in its dimension."""
    simplex: Simplex


@dataclass(frozen=True)
class PeriodicOrbit:
    """A level adding simplices in dimensions p and p+1 with orbit-type homology.

    Subcases by the relative Betti pair (b_p, b_{p+1}):
    "i" = (0, 1), "ii" = (1, 0), "iii" = (1, 1).
    """
    subcase: str
    simplices: tuple[Simplex, ...]


@dataclass(frozen=True)
class GradientPair:
    """A collapsible pair: one p- and one (p+1)-simplex, vanishing homology."""
    lower: Simplex
    upper: Simplex


@dataclass(frozen=True)
class EmptyLevel:
    """A level adding nothing; contributes zero everywhere."""


LevelCase = CriticalSimplex | PeriodicOrbit | GradientPair | EmptyLevel | None


def pair_label(index: int) -> str:
    """Render the pair (K_{index+1}, K_index), with K_{-1} shown as the empty set."""
    lower = "∅" if index < 0 else f"K_{index}"
    return f"(K_{index + 1}, {lower})"


@dataclass(frozen=True)
class LevelClassification:
    """How one filtration step fits the admissible cases.

    ``index`` is the lower level i of the pair (K_{i+1}, K_i); index -1 is
    the bottom pair (K_0, empty). ``case`` is None exactly when the level
    fits no case, and then ``diagnostic`` says why.
    """

    index: int
    p: int | None
    case: LevelCase
    new_simplices: tuple[Simplex, ...]
    relative_betti: tuple[int, ...]
    diagnostic: str | None = None

    @property
    def label(self) -> str:
        return pair_label(self.index)

    @property
    def ok(self) -> bool:
        return self.case is not None


@dataclass(frozen=True)
class ClassificationReport:
    """Per-level classifications plus the overall admissibility verdict.

    The bottom pair (K_0, empty) is classified with the same rules but a
    failure there is only reported as a warning, not counted as fatal: the
    admissibility conditions quantify over the higher steps only.
    """

    levels: tuple[LevelClassification, ...]
    problems: tuple[str, ...]
    bottom_warning: str | None

    @property
    def is_morse_bott(self) -> bool:
        return not self.problems

    def level(self, index: int) -> LevelClassification:
        for lc in self.levels:
            if lc.index == index:
                return lc
        raise InvalidInputError(f"no level with index {index}")


def _classify_pair(index: int, pair: RelativePair,
                   new: tuple[Simplex, ...]) -> LevelClassification:
    if not new:
        return LevelClassification(index, None, EmptyLevel(), (), ())
    homology = relative_homology(pair)
    betti = homology.betti_padded(pair.dimension if pair.dimension >= 0 else 0)
    dims = sorted({len(s) - 1 for s in new})

    if len(new) == 1:
        p = dims[0]
        expected = tuple(1 if k == p else 0 for k in range(len(betti)))
        if betti == expected:
            return LevelClassification(index, p, CriticalSimplex(new[0]), new, betti)
        return LevelClassification(
            index, p, None, new, betti,
            f"single new simplex of dimension {p} but relative homology {betti} "
            f"is not concentrated there")

    if len(dims) == 1:
        return LevelClassification(
            index, None, None, new, betti,
            f"{len(new)} new simplices, all of dimension {dims[0]}: "
            f"not a single critical simplex, and no pair of consecutive dimensions")

    if len(dims) == 2 and dims[1] == dims[0] + 1:
        p = dims[0]
        b_p = betti[p] if p < len(betti) else 0
        b_p1 = betti[p + 1] if p + 1 < len(betti) else 0
        stray = [k for k, b in enumerate(betti) if b and k not in (p, p + 1)]
        if stray:
            return LevelClassification(
                index, p, None, new, betti,
                f"relative homology is non-zero in dimension {stray[0]}, "
                f"outside {{p, p+1}} = {{{p}, {p + 1}}}")
        if b_p == 0 and b_p1 == 0:
            if len(new) == 2:
                lower = min(new, key=len)
                upper = max(new, key=len)
                return LevelClassification(index, p, GradientPair(lower, upper), new, betti)
            return LevelClassification(
                index, p, None, new, betti,
                f"vanishing relative homology but {len(new)} new simplices: "
                f"a collapsible step must add exactly one pair")
        subcase = {(0, 1): "i", (1, 0): "ii", (1, 1): "iii"}.get((b_p, b_p1))
        if subcase is not None:
            return LevelClassification(index, p, PeriodicOrbit(subcase, new), new, betti)
        return LevelClassification(
            index, p, None, new, betti,
            f"relative Betti numbers (b_{p}, b_{p + 1}) = ({b_p}, {b_p1}) "
            f"match no admissible pattern")

    return LevelClassification(
        index, None, None, new, betti,
        f"new simplices span dimensions {dims}; no p with all of them in {{p, p+1}}")


def classify_levels(K: OrderedComplex, f: MorseBottFunction) -> ClassificationReport:
    """Classify every filtration step of f, bottom pair included."""
    filtration = sublevel_filtration(K, f)
    levels = []
    problems = []
    bottom_warning = None
    for i in range(-1, f.max_value):
        upper = filtration[i + 2]
        lower = filtration[i + 1]
        new = tuple(sorted(upper.members - lower.members, key=lambda s: (len(s), s)))
        lc = _classify_pair(i, RelativePair(upper, lower), new)
        levels.append(lc)
        if not lc.ok:
            message = f"level {lc.label}: {lc.diagnostic}"
            if i == -1:
                bottom_warning = message
            else:
                problems.append(message)
    return ClassificationReport(tuple(levels), tuple(problems), bottom_warning)


@dataclass(frozen=True)
class LocalTraceEntry:
    """One local k-trace of g^l with its per-level breakdown."""

    value: Fraction
    summands: tuple[tuple[int, Fraction], ...]  # (level index i, trace on (K_{i+1}, K_i))

    def nonzero_summands(self) -> tuple[tuple[int, Fraction], ...]:
        return tuple((i, t) for i, t in self.summands if t != 0)


@dataclass(frozen=True)
class LocalTraceTable:
    """Local k-traces of the requested powers of g, over all k up to dim K."""

    n: int
    powers: tuple[int, ...]
    entries: dict[tuple[int, int], LocalTraceEntry]
    unvalidated_function: bool

    def entry(self, l: int, k: int) -> LocalTraceEntry:
        return self.entries[(l, k)]

    def value(self, l: int, k: int) -> Fraction:
        return self.entries[(l, k)].value

    def values_for_power(self, l: int) -> tuple[Fraction, ...]:
        return tuple(self.entries[(l, k)].value for k in range(self.n + 1))


def _validate_for_traces(K: OrderedComplex, f: MorseBottFunction,
                         g: SimplicialSelfMap, validate_function: bool) -> bool:
    """Run the hypothesis checks; returns True when f went unvalidated."""
    vr = validate_self_map(K, g)
    if not vr.ok:
        raise InvalidInputError("invalid self-map: " + "; ".join(vr.problems))
    compat = check_compatibility(f, g)
    if not compat.ok:
        raise InvalidInputError(
            "f and g are incompatible, so the level traces are undefined: "
            + "; ".join(compat.problems))
    if validate_function:
        report = classify_levels(K, f)
        if not report.is_morse_bott:
            raise InvalidInputError(
                "f is not an admissible level function: " + "; ".join(report.problems))
        return False
    return True


def local_traces(K: OrderedComplex, f: MorseBottFunction, g: SimplicialSelfMap,
                 powers: tuple[int, ...] = (1,), *,
                 validate_function: bool = True) -> LocalTraceTable:
    """Local k-traces: sums over filtration steps of traces on (K_{i+1}, K_i).

    Compatibility f(g(s)) <= f(s) is required -- it makes every sublevel
    g-invariant, hence every summand well defined. With
    ``validate_function=False`` the admissibility check on f is skipped and
    the table is marked unvalidated (exploratory use only).
    """
    unvalidated = _validate_for_traces(K, f, g, validate_function)
    for l in powers:
        if isinstance(l, bool) or not isinstance(l, int) or l < 1:
            raise InvalidInputError(f"powers must be positive integers, got {l!r}")
    filtration = sublevel_filtration(K, f)
    n = K.dimension
    sums: dict[tuple[int, int], Fraction] = {
        (l, k): Fraction(0) for l in powers for k in range(n + 1)}
    summands: dict[tuple[int, int], list[tuple[int, Fraction]]] = {
        key: [] for key in sums}
    for i in range(-1, f.max_value):
        pair = RelativePair(filtration[i + 2], filtration[i + 1])
        homology = relative_homology(pair)
        for l in powers:
            matrices = chain_map(power(g, l), pair, homology.chain_basis)
            for k in range(n + 1):
                if k <= homology.chain_basis.dimension:
                    t = integer_trace(induced_matrix(matrices[k], homology, k))
                else:
                    t = Fraction(0)
                sums[(l, k)] += t
                summands[(l, k)].append((i, t))
    entries = {
        key: LocalTraceEntry(sums[key], tuple(summands[key])) for key in sums}
    return LocalTraceTable(n, tuple(powers), entries, unvalidated)


@dataclass(frozen=True)
class LemmaTripleRow:
    """One alternating-sum comparison for a nested invariant triple."""

    j: int
    lhs: Fraction
    rhs: Fraction
    equality_expected: bool

    @property
    def holds(self) -> bool:
        if self.equality_expected:
            return self.lhs == self.rhs
        return self.lhs <= self.rhs

    @property
    def is_equality(self) -> bool:
        return self.lhs == self.rhs


def _trace_profile(g: SimplicialSelfMap, pair: RelativePair, up_to: int) -> list[Fraction]:
    homology = relative_homology(pair)
    matrices = chain_map(g, pair, homology.chain_basis)
    out = []
    for k in range(up_to + 1):
        if k <= homology.chain_basis.dimension:
            out.append(integer_trace(induced_matrix(matrices[k], homology, k)))
        else:
            out.append(Fraction(0))
    return out


def _alternating(partial: list[Fraction], j: int) -> Fraction:
    total = Fraction(0)
    for k in range(j + 1):
        total += Fraction(-1) ** (j - k) * partial[k]
    return total


def verify_lemma_triple(K: OrderedComplex, L: Subcomplex, J: Subcomplex,
                        g: SimplicialSelfMap, j: int) -> LemmaTripleRow:
    """Compare alternating trace sums over (K, J) against (K, L) + (L, J).

    The three subcomplexes must be nested and g-invariant; equality is
    required at j = dim K.
    """
    rows = lemma_triple_report(K, L, J, g, js=(j,))
    return rows[0]


def lemma_triple_report(K: OrderedComplex, L: Subcomplex, J: Subcomplex,
                        g: SimplicialSelfMap,
                        js: tuple[int, ...] | None = None) -> tuple[LemmaTripleRow, ...]:
    """Rows of the triple inequality for the requested j (default: all)."""
    if L.parent is not K or J.parent is not K:
        raise InvalidInputError("L and J must be subcomplexes of K")
    if not J.members <= L.members:
        raise InvalidInputError("J must be contained in L")
    for sub, name in ((L, "L"), (J, "J")):
        if not check_invariance(g, sub):
            raise InvalidInputError(f"{name} is not invariant under the self-map")
    n = K.dimension
    if js is None:
        js = tuple(range(n + 1))
    for j in js:
        if j < 0:
            raise InvalidInputError(f"j must be non-negative, got {j}")
    top = K.full_subcomplex()
    max_j = max(js)
    t_kj = _trace_profile(g, RelativePair(top, J), max_j)
    t_kl = _trace_profile(g, RelativePair(top, L), max_j)
    t_lj = _trace_profile(g, RelativePair(L, J), max_j)
    rows = []
    for j in js:
        lhs = _alternating(t_kj, j)
        rhs = _alternating(t_kl, j) + _alternating(t_lj, j)
        rows.append(LemmaTripleRow(j, lhs, rhs, equality_expected=(j == n)))
    return tuple(rows)


@dataclass(frozen=True)
class InequalityRow:
    """One row of the report: lhs <= rhs for a given power, j, and kind."""

    l: int
    j: int
    kind: str  # "strong" | "weak"
    lhs: Fraction
    rhs: Fraction
    equality_expected: bool

    @property
    def holds(self) -> bool:
        if self.equality_expected:
            return self.lhs == self.rhs
        return self.lhs <= self.rhs

    @property
    def is_equality(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class InequalityReport:
    """All strong and weak rows for every requested power.

    ``global_traces[l]`` holds Tr H_k(g^l) on (K, empty) for k = 0..n;
    ``local_table`` the local k-traces with per-level breakdowns. On
    validated input every row holds and the strong row at j = n is an
    equality; a violation would mean invalid input or a bug and is raised as
    such by :func:`inequality_report`.
    """

    n: int
    powers: tuple[int, ...]
    rows: tuple[InequalityRow, ...]
    global_traces: dict[int, tuple[Fraction, ...]]
    local_table: LocalTraceTable
    unvalidated_function: bool

    def rows_for(self, l: int, kind: str) -> tuple[InequalityRow, ...]:
        return tuple(r for r in self.rows if r.l == l and r.kind == kind)

    @property
    def ok(self) -> bool:
        return all(r.holds for r in self.rows)


def inequality_report(K: OrderedComplex, f: MorseBottFunction, g: SimplicialSelfMap,
                      powers: tuple[int, ...] = (1,), *,
                      validate_function: bool = True) -> InequalityReport:
    """Build the full strong/weak table for the requested powers of g.

    All hypothesis checks run first; with everything validated, a violated
    row is impossible and raises InternalInvariantError instead of being
    returned. With ``validate_function=False`` the admissibility of f is not
    enforced and violations are reported in the rows.
    """
    table = local_traces(K, f, g, powers, validate_function=validate_function)
    n = K.dimension
    pair = full_pair(K)
    homology = relative_homology(pair)
    global_traces: dict[int, tuple[Fraction, ...]] = {}
    for l in powers:
        matrices = chain_map(power(g, l), pair, homology.chain_basis)
        global_traces[l] = tuple(
            integer_trace(induced_matrix(matrices[k], homology, k))
            for k in range(n + 1))

    rows: list[InequalityRow] = []
    for l in powers:
        strong_lhs = {}
        strong_rhs = {}
        for j in range(n + 1):
            lhs = _alternating(list(global_traces[l]), j)
            rhs = _alternating(list(table.values_for_power(l)), j)
            strong_lhs[j], strong_rhs[j] = lhs, rhs
            rows.append(InequalityRow(l, j, "strong", lhs, rhs,
                                      equality_expected=(j == n)))
        for j in range(n + 1):
            lhs = global_traces[l][j]
            rhs = table.value(l, j)
            rows.append(InequalityRow(l, j, "weak", lhs, rhs,
                                      equality_expected=False))
            # weak row j is the sum of strong rows j and j-1
            expected_lhs = strong_lhs[j] + (strong_lhs[j - 1] if j > 0 else 0)
            expected_rhs = strong_rhs[j] + (strong_rhs[j - 1] if j > 0 else 0)
            if lhs != expected_lhs or rhs != expected_rhs:
                raise InternalInvariantError(
                    f"weak row j={j} is not the sum of consecutive strong rows")

    report = InequalityReport(n, tuple(powers), tuple(rows), global_traces,
                              table, table.unvalidated_function)
    if not table.unvalidated_function:
        for row in report.rows:
            if not row.holds:
                raise InternalInvariantError(
                    f"validated input violates the {row.kind} inequality at "
                    f"l={row.l}, j={row.j}: {row.lhs} vs {row.rhs}")
    return report


@dataclass(frozen=True)
class LocalizationIdentity:
    """Lefschetz number against the alternating sum of local traces."""

    l: int
    lefschetz: Fraction
    local_alternating: Fraction

    @property
    def equal(self) -> bool:
        return self.lefschetz == self.local_alternating


def localization_identity(K: OrderedComplex, f: MorseBottFunction,
                          g: SimplicialSelfMap, l: int = 1, *,
                          validate_function: bool = True) -> LocalizationIdentity:
    """The top-dimension equality, folded to Lefschetz-number form.

    The strong equality at j = n, multiplied by (-1)^n, says the Lefschetz
    number of g^l equals sum_k (-1)^k (local k-trace of g^l): the global
    fixed-point count localizes at the critical levels.
    """
    report = inequality_report(K, f, g, (l,), validate_function=validate_function)
    lefschetz = sum(
        (Fraction(-1) ** k * t for k, t in enumerate(report.global_traces[l])),
        Fraction(0))
    local = sum(
        (Fraction(-1) ** k * t for k, t in enumerate(report.local_table.values_for_power(l))),
        Fraction(0))
    identity = LocalizationIdentity(l, lefschetz, local)
    if not report.unvalidated_function and not identity.equal:
        raise InternalInvariantError(
            f"localization identity fails on validated input: "
            f"{lefschetz} != {local}")
    return identity
