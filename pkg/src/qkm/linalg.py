"""Exact linear algebra: rational RREF, fraction-free determinants, and
certified nullspaces of polynomial matrices.

Nullspaces of matrices over Q(v) (or over a multivariate polynomial ring)
are computed by specializing at exact rational points, lifting the kernel
through fraction-free Cramer solves, and then verifying the candidate
symbolically.  A candidate that verifies is exact regardless of whether the
specialization point was generic, and the specialized rank certifies that
no kernel vector is missing, so the result is certified, not heuristic.
"""

from __future__ import annotations

from fractions import Fraction


def rref(rows):
    """Reduced row echelon form over Fraction.

    Returns (reduced rows, pivot columns, row permutation) where
    permutation[r] is the original index of reduced row r.
    """
    m = [list(map(Fraction, r)) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    perm = list(range(nrows))
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        perm[r], perm[pr] = perm[pr], perm[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots, perm


def matrix_rank(rows) -> int:
    return len(rref(rows)[1])


def invert_fraction(rows):
    n = len(rows)
    aug = [list(map(Fraction, rows[i])) + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    red, pivots, _ = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix not invertible")
    return [row[n:] for row in red]


def nullspace_fraction(rows):
    """Kernel basis over Fraction, one vector per free column (RREF form)."""
    if not rows:
        return []
    red, pivots, _ = rref(rows)
    ncols = len(rows[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def rref_field(rows):
    """RREF over any exact field (entries support + - * / and truthiness)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def nullspace_field(rows, one):
    """Kernel basis over an exact field; `one` is the field's unit."""
    if not rows:
        return []
    red, pivots = rref_field(rows)
    ncols = len(rows[0])
    zero = one - one
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for r, p in enumerate(pivots):
            v[p] = zero - red[r][f]
        basis.append(v)
    return basis


def _complexity(x):
    comp = getattr(x, "complexity", None)
    if comp is not None:
        return comp()
    return 0


def bareiss_det(M, zero):
    """Fraction-free determinant over an integral domain with exact_div."""
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    M = [list(row) for row in M]
    sign = 1
    prev = None
    for k in range(n - 1):
        # pivot: the structurally simplest nonzero entry in the column
        cands = [(i, _complexity(M[i][k])) for i in range(k, n) if M[i][k]]
        if not cands:
            return zero
        piv = min(cands, key=lambda t: (t[1], t[0]))[0]
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                val = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                if prev is not None:
                    val = val.exact_div(prev)
                M[i][j] = val
            M[i][k] = zero
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return det if sign == 1 else -det


def cramer_solve(P, b, zero):
    """detP and x with P x = detP * b, fraction-free (Cramer's rule)."""
    n = len(P)
    detP = bareiss_det(P, zero)
    if not detP:
        raise ValueError("singular system in cramer_solve")
    xs = []
    for i in range(n):
        Pi = [[(b[r] if c == i else P[r][c]) for c in range(n)] for r in range(n)]
        xs.append(bareiss_det(Pi, zero))
    return detP, xs


def bareiss_solve_columns(P, B, zero):
    """(det, X) with P X = det * B, by one-step fraction-free Gauss-Jordan.

    All intermediate divisions are exact over the ring; at termination
    every diagonal entry of the reduced left block equals the same minor
    (the determinant up to the row-swap sign), which is returned together
    with the right-block columns scaled by it.
    """
    n = len(P)
    t = len(B[0]) if B else 0
    M = [list(P[r]) + list(B[r]) for r in range(n)]
    width = n + t
    prev = None
    for k in range(n):
        cands = [(i, _complexity(M[i][k])) for i in range(k, n) if M[i][k]]
        if not cands:
            raise ValueError("singular system in bareiss_solve_columns")
        piv = min(cands, key=lambda s: (s[1], s[0]))[0]
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
        pk = M[k][k]
        for i in range(n):
            if i == k:
                continue
            row = M[i]
            prow = M[k]
            mik = row[k]
            for j in range(k + 1, width):
                val = row[j] * pk
                if mik and prow[j]:
                    val = val - mik * prow[j]
                if prev is not None:
                    val = val.exact_div(prev)
                row[j] = val
            if i < k:
                # keep the already-reduced diagonal in step with the pivot
                val = row[i] * pk
                if prev is not None:
                    val = val.exact_div(prev)
                row[i] = val
            row[k] = zero
        prev = pk
    det = M[n - 1][n - 1] if n else None
    for i in range(n - 1):
        if M[i][i] != det:
            raise AssertionError("fraction-free Gauss-Jordan lost exactness")
    X = [[M[r][n + c] for c in range(t)] for r in range(n)]
    return det, X


class BadPointError(RuntimeError):
    """All specialization points were rejected; should not happen in practice."""


def certified_laurent_nullspace(N, zero, one, points, specialize, normalize):
    """Certified kernel of a matrix over a univariate Laurent ring.

    N: list of rows of ring elements.  specialize(entry, pt) -> Fraction.
    normalize(vector) -> canonical form of a kernel vector.
    Returns (rank, pivot columns, kernel vectors), one vector per free
    column in increasing column order.  Sound for any point: specialized
    rank is a lower bound for the generic rank, and the symbolic
    verification N . k = 0 certifies every returned vector; both match
    exactly when the point is generic, otherwise the next point is tried.
    """
    nrows = len(N)
    ncols = len(N[0]) if nrows else 0
    if ncols == 0:
        return 0, [], []
    for pt in points:
        mq = [[specialize(e, pt) for e in row] for row in N]
        _, pivots, perm = rref(mq)
        rank = len(pivots)
        free = [c for c in range(ncols) if c not in pivots]
        pivot_rows = [perm[r] for r in range(rank)]
        vectors = []
        if rank == 0:
            for f in free:
                vec = [zero] * ncols
                vec[f] = one
                vectors.append(normalize(vec))
        elif free:
            P = [[N[r][c] for c in pivots] for r in pivot_rows]
            B = [[N[r][f] for f in free] for r in pivot_rows]
            try:
                detP, X = bareiss_solve_columns(P, B, zero)
            except ValueError:
                continue
            for col, f in enumerate(free):
                vec = [zero] * ncols
                vec[f] = detP
                for idx, p in enumerate(pivots):
                    vec[p] = -X[idx][col]
                vectors.append(normalize(vec))
        if all(_verify_zero(N, v) for v in vectors):
            return rank, pivots, vectors
    raise BadPointError("no specialization point certified the kernel")


def _verify_zero(N, vec):
    for row in N:
        acc = None
        for e, c in zip(row, vec):
            if not e or not c:
                continue
            term = e * c
            acc = term if acc is None else acc + term
        if acc is not None and acc:
            return False
    return True


def certified_rational_nullspace(S, points, specialize):
    """Certified Q-rational kernel of a symbolic matrix whose kernel is
    known to be defined over Q (e.g. a generic-parameter Gram block).

    Stacks specializations until the joint Fraction kernel verifies
    symbolically and its dimension matches the best specialized rank.
    Returns (rank, pivot columns, list of Fraction vectors), one vector per
    free column in increasing column order (RREF-normalized).
    """
    nrows = len(S)
    ncols = len(S[0]) if nrows else 0
    if ncols == 0:
        return 0, [], []
    stacked = []
    best_rank = 0
    for pt in points:
        mq = [[specialize(e, pt) for e in row] for row in S]
        best_rank = max(best_rank, matrix_rank(mq))
        stacked.extend(mq)
        red, pivots, _ = rref(stacked)
        free = [c for c in range(ncols) if c not in pivots]
        if len(free) != ncols - best_rank:
            continue
        basis = []
        for f in free:
            v = [Fraction(0)] * ncols
            v[f] = Fraction(1)
            for r, p in enumerate(pivots):
                v[p] = -red[r][f]
            basis.append(v)
        if all(_verify_zero(S, v) for v in basis):
            return best_rank, pivots, basis
    raise BadPointError("no specialization certified the rational kernel")
