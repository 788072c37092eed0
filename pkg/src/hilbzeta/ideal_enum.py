"""Exhaustive enumeration of colength-n ideals of a truncated local algebra.

The frontier recursion: every colength-(n+1) ideal I' sits under some
colength-n ideal I with dim I/I' = 1 (adjoin a socle element of A/I'), and
conversely every codimension-1 subspace H with mI <= H <= I is an ideal
(x H <= x I <= m I <= H).  So level n+1 is exactly the deduplicated union
of children over level n, where the children of I are the preimages of the
(Q^g - 1)/(Q - 1) hyperplanes of I/mI.

An independent oracle (naive_count) enumerates all codimension-n subspaces
of A_n in echelon form and filters by closure under the two multiplication
operators; the two routes must agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .errors import BudgetError
from .linalg import in_span, mat_vec, reduce_vector, rref
from .local_algebra import LocalAlgebra
from .series import TruncatedSeries

__all__ = [
    "children",
    "count_colength_ideals",
    "naive_count",
    "local_series",
    "EnumerationResult",
]

DEFAULT_FRONTIER_BUDGET = 10**7


def full_algebra_rows(algebra: LocalAlgebra):
    """The unit ideal as a canonical matrix (identity)."""
    rows = []
    for i in range(algebra.dim):
        row = [0] * algebra.dim
        row[i] = 1
        rows.append(tuple(row))
    return tuple(rows)


def children(algebra: LocalAlgebra, ideal_rows):
    """All ideals I' < I of codimension 1 in I, in canonical echelon form."""
    ops = algebra.ops
    q = ops.q
    m_rows = []
    for row in ideal_rows:
        m_rows.append(mat_vec(row, algebra.mul_x, ops))
        m_rows.append(mat_vec(row, algebra.mul_y, ops))
    mI = rref(m_rows, ops)
    # complement of mI inside I
    complement = []
    stack = list(mI)
    for row in ideal_rows:
        res = reduce_vector(row, stack, ops)
        if any(res):
            stack = list(rref(list(stack) + [res], ops))
            complement.append(res)
    g = len(complement)
    out = []
    base = list(mI)
    for s in range(g):
        # functionals with last nonzero coordinate at position s, scaled to 1
        free = [range(q)] * s
        for phi in product(*free):
            span = base[:]
            for j in range(g):
                if j == s:
                    continue
                if j < s and phi[j]:
                    # w_j - phi_j * w_s lies in the hyperplane
                    neg = ops.neg[phi[j]]
                    mul_c = ops.mul[neg]
                    vec = tuple(
                        ops.add[a][mul_c[b]]
                        for a, b in zip(complement[j], complement[s])
                    )
                    span.append(vec)
                else:
                    span.append(complement[j])
            out.append(rref(span, ops))
    return out


@dataclass
class EnumerationResult:
    counts: list  # counts[n] = number of colength-n ideals
    complete: bool  # False when the frontier budget cut the recursion


def _partition(items, workers):
    if workers <= 1:
        return [items]
    size = (len(items) + workers - 1) // workers
    return [items[i : i + size] for i in range(0, len(items), size)] or [items]


def count_colength_ideals(
    algebra: LocalAlgebra,
    n_max: int,
    workers: int = 1,
    frontier_budget: int = DEFAULT_FRONTIER_BUDGET,
) -> EnumerationResult:
    """Frontier recursion for c_n = #{ideals of colength n}, n <= n_max."""
    if n_max > algebra.N:
        raise ValueError(
            f"truncation order {algebra.N} cannot see colength {n_max}"
        )
    frontier = {full_algebra_rows(algebra)}
    counts = [1]
    for _ in range(n_max):
        next_level = set()
        for chunk in _partition(sorted(frontier), workers):
            for rows in chunk:
                next_level.update(children(algebra, rows))
        counts.append(len(next_level))
        if len(next_level) > frontier_budget:
            return EnumerationResult(counts, False)
        frontier = next_level
    return EnumerationResult(counts, True)


# The subspace oracle is exponential in n; cap the echelon enumeration.
NAIVE_BUDGET = 500_000


def _gaussian_binomial(d, r, q):
    num = den = 1
    for i in range(r):
        num *= q ** (d - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def naive_count(algebra_n: LocalAlgebra, n: int) -> int:
    """Independent oracle: enumerate ALL codimension-n subspaces of A_n and
    keep those closed under both multiplications.

    algebra_n must be built at truncation exactly n (so m^n = 0 and the
    subspaces correspond to colength-n ideals of the full local ring).
    """
    if algebra_n.N < n:
        raise ValueError("oracle needs truncation order >= n")
    ops = algebra_n.ops
    d = algebra_n.dim
    rank = d - n
    if n == 0:
        return 1
    if rank < 0:
        return 0
    total_subspaces = _gaussian_binomial(d, rank, ops.q)
    if total_subspaces > NAIVE_BUDGET:
        raise BudgetError(
            f"naive oracle would enumerate {total_subspaces} subspaces",
            estimate=total_subspaces,
            budget=NAIVE_BUDGET,
        )
    count = 0
    for pivots in combinations(range(d), rank):
        free_cells = []
        pivot_set = set(pivots)
        for r, pc in enumerate(pivots):
            for c in range(pc + 1, d):
                if c not in pivot_set:
                    free_cells.append((r, c))
        for values in product(range(ops.q), repeat=len(free_cells)):
            mat = [[0] * d for _ in range(rank)]
            for r, pc in enumerate(pivots):
                mat[r][pc] = 1
            for (r, c), v in zip(free_cells, values):
                mat[r][c] = v
            rows = tuple(tuple(r) for r in mat)
            if _closed_under_mult(rows, algebra_n):
                count += 1
    return count


def _closed_under_mult(rows, algebra):
    ops = algebra.ops
    for row in rows:
        if not in_span(mat_vec(row, algebra.mul_x, ops), rows, ops):
            return False
        if not in_span(mat_vec(row, algebra.mul_y, ops), rows, ops):
            return False
    return True


def local_series(
    algebra: LocalAlgebra,
    n_max: int,
    workers: int = 1,
    frontier_budget: int = DEFAULT_FRONTIER_BUDGET,
) -> TruncatedSeries:
    """Sum of c_n t^n as an integral truncated series with prec n_max + 1."""
    result = count_colength_ideals(algebra, n_max, workers, frontier_budget)
    if not result.complete:
        raise BudgetError(
            "ideal enumeration exceeded the frontier budget",
            estimate=None,
            budget=frontier_budget,
        )
    return TruncatedSeries(result.counts, n_max + 1)
