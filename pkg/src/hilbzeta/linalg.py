"""Row-echelon linear algebra over small finite fields.

Vectors are tuples of integer codes into a SmallFieldOps table set.  The
canonical form used everywhere is the reduced row echelon form with unit
pivots and zeros above and below, so two subspaces are equal iff their
canonical matrices are equal tuples.
"""

from __future__ import annotations


def rref(rows, ops):
    """Canonical reduced row echelon form of the row span.  Returns a tuple
    of row tuples, pivot columns strictly increasing, no zero rows."""
    rows = [list(r) for r in rows if any(r)]
    width = len(rows[0]) if rows else 0
    out = []
    pivots = []
    col = 0
    while rows and col < width:
        pivot_row = None
        for r in rows:
            if r[col]:
                pivot_row = r
                break
        if pivot_row is None:
            col += 1
            continue
        rows.remove(pivot_row)
        inv = ops.inv[pivot_row[col]]
        mul_inv = ops.mul[inv]
        pivot_row = [mul_inv[v] for v in pivot_row]
        for r in rows:
            c = r[col]
            if c:
                mul_c = ops.mul[c]
                add = ops.add
                neg = ops.neg
                for j in range(col, width):
                    r[j] = add[r[j]][neg[mul_c[pivot_row[j]]]]
        out.append(pivot_row)
        pivots.append(col)
        rows = [r for r in rows if any(r)]
        col += 1
    # eliminate above pivots
    for idx in range(len(out) - 1, -1, -1):
        prow = out[idx]
        pcol = pivots[idx]
        for upper in range(idx):
            c = out[upper][pcol]
            if c:
                mul_c = ops.mul[c]
                add = ops.add
                neg = ops.neg
                urow = out[upper]
                for j in range(pcol, len(prow)):
                    urow[j] = add[urow[j]][neg[mul_c[prow[j]]]]
    return tuple(tuple(r) for r in out)


def reduce_vector(vec, echelon, ops):
    """Residue of vec after elimination against echelon rows (rref form)."""
    vec = list(vec)
    add = ops.add
    neg = ops.neg
    for row in echelon:
        pcol = next(j for j, v in enumerate(row) if v)
        c = vec[pcol]
        if c:
            mul_c = ops.mul[c]
            for j in range(pcol, len(vec)):
                vec[j] = add[vec[j]][neg[mul_c[row[j]]]]
    return tuple(vec)


def in_span(vec, echelon, ops):
    return not any(reduce_vector(vec, echelon, ops))


def mat_vec(vec, matrix, ops):
    """Row vector times matrix: (v M)_j = sum_i v_i M[i][j]."""
    width = len(matrix[0]) if matrix else 0
    out = [0] * width
    add = ops.add
    for i, v in enumerate(vec):
        if v:
            mul_v = ops.mul[v]
            row = matrix[i]
            for j in range(width):
                m = row[j]
                if m:
                    out[j] = add[out[j]][mul_v[m]]
    return tuple(out)
