"""Truncated local algebras A_N = F[[x,y]] / ((f) + m^N).

Any ideal of colength n in F[[x,y]]/(f) contains m^n (the chain I + m^j
stabilizes within n steps and Nakayama forces m^n inside I), so colength-n
ideals of the full local ring biject with those of A_N whenever N >= n.
A_N is finite dimensional, carried here as a monomial basis plus the two
multiplication-by-coordinate matrices.
"""

from __future__ import annotations

from .fields import FiniteField
from .linalg import rref

__all__ = ["LocalAlgebra", "build_truncated", "multiplicity"]


def multiplicity(fterms: dict) -> int:
    """Least total degree of a nonzero term (the order of the equation)."""
    if not fterms:
        raise ValueError("zero polynomial has no multiplicity")
    return min(i + j for (i, j) in fterms)


class LocalAlgebra:
    """F[x,y]/((f) + m^N) with explicit multiplication operators.

    basis: monomials (a, b) in degree-then-y-exponent order; mul_x and
    mul_y hold, in row i, the coordinates of x*basis[i] resp. y*basis[i].
    """

    __slots__ = (
        "field",
        "ops",
        "fterms",
        "order",
        "N",
        "basis",
        "index",
        "dim",
        "mul_x",
        "mul_y",
        "reductions",
        "truncation_tight",
    )

    def __repr__(self):
        return (
            f"LocalAlgebra(q={self.field.size}, N={self.N}, dim={self.dim}, "
            f"mu={self.order})"
        )

    def monomial_vector(self, a, b):
        """Coordinates of the image of x^a y^b (zero when degree >= N)."""
        if a + b >= self.N:
            return (0,) * self.dim
        mono = (a, b)
        if mono in self.index:
            vec = [0] * self.dim
            vec[self.index[mono]] = 1
            return tuple(vec)
        return self.reductions[mono]

    def maximal_ideal_rows(self):
        """Canonical basis of m as a coordinate subspace (all non-unit monomials)."""
        rows = []
        for i, mono in enumerate(self.basis):
            if mono != (0, 0):
                row = [0] * self.dim
                row[i] = 1
                rows.append(tuple(row))
        return tuple(rows)


def build_truncated(fterms: dict, field: FiniteField, N: int) -> LocalAlgebra:
    """Build A_N from a local equation given as {(a, b): element}.

    The relation space ((f) + m^N)/m^N is spanned exactly by the truncated
    products x^a y^b f with a + b + ord(f) < N.  Gaussian elimination pivots
    on the y-lexicographically largest monomial of each relation, so the
    surviving basis keeps the smaller monomials (x-powers before y-powers),
    deterministically.
    """
    if N < 1:
        raise ValueError("truncation order must be at least 1")
    fterms = {key: field.element(c) for key, c in fterms.items()}
    fterms = {key: c for key, c in fterms.items() if not c.is_zero()}
    if not fterms:
        raise ValueError("local equation must be nonzero")
    if (0, 0) in fterms:
        raise ValueError("local equation must vanish at the origin (f is a unit)")
    mu = multiplicity(fterms)
    ops = field.small_ops()
    codes = {key: c.code for key, c in fterms.items()}

    monos = [(a, b) for t in range(N) for b in range(t + 1) for a in [t - b]]
    monos.sort(key=lambda ab: (ab[0] + ab[1], ab[1], ab[0]))
    # elimination columns: y-major lexicographic, largest first
    elim = sorted(monos, key=lambda ab: (ab[1], ab[0]), reverse=True)
    col = {mono: i for i, mono in enumerate(elim)}

    relations = []
    for s in range(max(0, N - mu)):
        for a in range(s + 1):
            b = s - a
            row = [0] * len(monos)
            for (r, t), c in codes.items():
                if a + r + b + t < N:
                    idx = col[(a + r, b + t)]
                    row[idx] = ops.add[row[idx]][c]
            relations.append(row)

    echelon = rref(relations, ops) if relations else ()
    pivot_monos = set()
    reduce_of = {}
    for row in echelon:
        pcol = next(j for j, v in enumerate(row) if v)
        pivot_monos.add(elim[pcol])
    basis = [m for m in monos if m not in pivot_monos]
    index = {m: i for i, m in enumerate(basis)}
    dim = len(basis)
    for row in echelon:
        pcol = next(j for j, v in enumerate(row) if v)
        vec = [0] * dim
        for j in range(pcol + 1, len(row)):
            if row[j]:
                vec[index[elim[j]]] = ops.neg[row[j]]
        reduce_of[elim[pcol]] = vec

    def image(a, b):
        if a + b >= N:
            return tuple([0] * dim)
        mono = (a, b)
        if mono in index:
            vec = [0] * dim
            vec[index[mono]] = 1
            return tuple(vec)
        return tuple(reduce_of[mono])

    mul_x = tuple(image(a + 1, b) for (a, b) in basis)
    mul_y = tuple(image(a, b + 1) for (a, b) in basis)

    algebra = LocalAlgebra.__new__(LocalAlgebra)
    algebra.field = field
    algebra.ops = ops
    algebra.fterms = fterms
    algebra.order = mu
    algebra.N = N
    algebra.basis = tuple(basis)
    algebra.index = index
    algebra.dim = dim
    algebra.mul_x = mul_x
    algebra.mul_y = mul_y
    algebra.reductions = {mono: tuple(vec) for mono, vec in reduce_of.items()}
    algebra.truncation_tight = mu <= N
    if mu <= N:
        expected = N * (N + 1) // 2 - (N - mu) * (N - mu + 1) // 2
        if dim != expected:
            raise AssertionError(
                f"dimension {dim} violates the closed form {expected}"
            )
    return algebra
