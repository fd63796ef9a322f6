"""Exact linear algebra over a CoefficientField.

Vectors and matrices are plain lists of field elements (``Fraction`` or
``CyclotomicNumber``); nothing here ever touches floating point.
"""


def rref(rows, ncols):
    """Reduced row echelon form. Returns ``(rows, pivots)`` with unit pivots."""
    m = [list(row) for row in rows if any(row)]
    pivots = []
    piv_r = 0
    for piv_c in range(ncols):
        for i_row in range(piv_r, len(m)):
            if m[i_row][piv_c]:
                break
        else:
            continue
        m[piv_r], m[i_row] = m[i_row], m[piv_r]
        inv = 1 / m[piv_r][piv_c]
        m[piv_r] = [value * inv for value in m[piv_r]]
        for r in range(len(m)):
            factor = m[r][piv_c]
            if r != piv_r and factor:
                m[r] = [a - factor * b for a, b in zip(m[r], m[piv_r])]
        pivots.append(piv_c)
        piv_r += 1
        if piv_r == len(m):
            break
    return m[:piv_r], pivots


def rank(rows, ncols):
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols, zero, one):
    """Basis of {c : rows * c = 0}, one vector per free column."""
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector = [zero] * ncols
        vector[free] = one
        for row, piv_c in zip(reduced, pivots):
            vector[piv_c] = -row[free]
        basis.append(vector)
    return basis


def residue(vector, reduced, pivots):
    """Component of ``vector`` outside the span of the rref rows."""
    out = list(vector)
    for row, piv_c in zip(reduced, pivots):
        factor = out[piv_c]
        if factor:
            out = [a - factor * b for a, b in zip(out, row)]
    return out


def combine(coeffs, vectors, zero):
    length = len(vectors[0]) if vectors else 0
    out = [zero] * length
    for c, vector in zip(coeffs, vectors):
        if c:
            out = [a + c * b for a, b in zip(out, vector)]
    return out


def largest_stable_subspace(basis, operators, ncols, zero, one):
    """Largest subspace W of span(basis) with op(W) inside W for every operator.

    Operators are linear callables on coordinate vectors of length ``ncols``.
    Returns W as rref rows.
    """
    current, pivots = rref(basis, ncols)
    while current:
        constraints = []
        for op in operators:
            images = [residue(op(w), current, pivots) for w in current]
            for coord in range(ncols):
                row = [image[coord] for image in images]
                if any(row):
                    constraints.append(row)
        if not constraints:
            return current
        kernel = nullspace(constraints, len(current), zero, one)
        if len(kernel) == len(current):
            return current
        current, pivots = rref([combine(c, current, zero) for c in kernel], ncols)
    return current


def sparse_rank(rows, key=None):
    """Rank of rows given as {column: value} dicts; ``key`` orders the columns."""
    pivots = {}
    for row in rows:
        row = {col: value for col, value in row.items() if value}
        while row:
            lead = max(row, key=key)
            if lead not in pivots:
                pivots[lead] = row
                break
            pivot = pivots[lead]
            factor = row[lead] / pivot[lead]
            for col, value in pivot.items():
                updated = row[col] - factor * value if col in row else -(factor * value)
                if updated:
                    row[col] = updated
                else:
                    row.pop(col, None)
    return len(pivots)
