"""
Exact integer linear algebra on plain Python ints.

Hermite forms for lattices (dense, optionally modulo a known multiple of the
lattice index), Smith normal form with transforms, integer kernels, and
membership/equality tests for Z-spans. Matrices are lists of rows.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

Matrix = List[List[int]]


def ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


# ============================================================================
# Hermite forms
# ============================================================================

def hnf_upper(columns: Sequence[Sequence[int]], d: int, modulus: Optional[int] = None) -> Optional[Matrix]:
    """
    Upper triangular column Hermite form of the Z-span of `columns` in Z^d.

    Returns the d x d matrix H (rows) with H[i][j] = 0 for i > j, positive
    diagonal, and 0 <= H[i][j] < H[i][i] for j > i; None if the span has rank < d.
    With `modulus` the span is taken together with modulus * Z^d, which must
    already be contained in it for the result to describe the same lattice.
    """
    vecs = [list(c) for c in columns if any(c)]
    pivots: Dict[int, List[int]] = {}
    for i in range(d - 1, -1, -1):
        if modulus is not None:
            e = [0] * d
            e[i] = modulus
            vecs.append(e)
        pivot: Optional[List[int]] = None
        rest: List[List[int]] = []
        for v in vecs:
            if v[i] == 0:
                rest.append(v)
                continue
            if pivot is None:
                pivot = v
                continue
            g, x, y = ext_gcd(pivot[i], v[i])
            a, b = pivot[i] // g, v[i] // g
            new_pivot = [x * s + y * t for s, t in zip(pivot, v)]
            other = [b * s - a * t for s, t in zip(pivot, v)]
            pivot = new_pivot
            if any(other):
                rest.append(other)
        if pivot is None:
            return None
        if pivot[i] < 0:
            pivot = [-x for x in pivot]
        if modulus is not None:
            pivot = [x % modulus if k < i else x for k, x in enumerate(pivot)]
            rest = [[x % modulus for x in v] for v in rest]
        pivots[i] = pivot
        vecs = [v for v in rest if any(v)]
    h = [[pivots[j][i] for j in range(d)] for i in range(d)]
    for j in range(d):
        for i in range(j - 1, -1, -1):
            q = h[i][j] // h[i][i]
            if q:
                for r in range(i + 1):
                    h[r][j] -= q * h[r][i]
    return h


def row_echelon_basis(vectors: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """
    Canonical Hermite row basis of the Z-span of `vectors`.

    Pivots strictly increase, pivot entries are positive, entries above a
    pivot are reduced into [0, pivot). Equal spans give equal bases.
    """
    rows = [list(v) for v in vectors if any(v)]
    basis: Matrix = []
    col = 0
    while rows and col < ncols:
        nz = [r for r in rows if r[col]]
        zero = [r for r in rows if not r[col]]
        if not nz:
            col += 1
            continue
        pivot = nz[0]
        for v in nz[1:]:
            g, x, y = ext_gcd(pivot[col], v[col])
            a, b = pivot[col] // g, v[col] // g
            new_pivot = [x * s + y * t for s, t in zip(pivot, v)]
            other = [b * s - a * t for s, t in zip(pivot, v)]
            pivot = new_pivot
            if any(other):
                zero.append(other)
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        basis.append(pivot)
        rows = [r for r in zero if any(r)]
        col += 1
    for k, row in enumerate(basis):
        pc = next(c for c, x in enumerate(row) if x)
        for above in basis[:k]:
            q = above[pc] // row[pc]
            if q:
                for c in range(ncols):
                    above[c] -= q * row[c]
    return basis


def reduce_against(vector: Sequence[int], basis: Matrix) -> List[int]:
    """Remainder of `vector` after subtracting integer multiples of echelon rows."""
    v = list(vector)
    for row in basis:
        pc = next(c for c, x in enumerate(row) if x)
        q, r = divmod(v[pc], row[pc])
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return v


def in_span(vector: Sequence[int], basis: Matrix) -> bool:
    """Membership in the Z-span of an echelon basis from row_echelon_basis."""
    return not any(reduce_against(vector, basis))


# ============================================================================
# Kernels and Smith normal form
# ============================================================================

def integer_kernel(matrix: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """
    Z-basis of {x in Z^ncols : M x = 0}.

    Column operations bring M to column echelon form while tracking the
    unimodular transform; transformed columns that become zero span the kernel.
    """
    a = [list(r) for r in matrix]
    m = len(a)
    v = identity(ncols)
    cols = [[a[i][j] for i in range(m)] for j in range(ncols)]
    trans = [[v[i][j] for i in range(ncols)] for j in range(ncols)]
    rank = 0
    for i in range(m):
        pivot = None
        for j in range(rank, ncols):
            if cols[j][i]:
                if pivot is None:
                    pivot = j
                    continue
                g, x, y = ext_gcd(cols[pivot][i], cols[j][i])
                p_, q_ = cols[pivot][i] // g, cols[j][i] // g
                cp, cj = cols[pivot], cols[j]
                tp, tj = trans[pivot], trans[j]
                cols[pivot] = [x * s + y * t for s, t in zip(cp, cj)]
                cols[j] = [q_ * s - p_ * t for s, t in zip(cp, cj)]
                trans[pivot] = [x * s + y * t for s, t in zip(tp, tj)]
                trans[j] = [q_ * s - p_ * t for s, t in zip(tp, tj)]
        if pivot is None:
            continue
        cols[rank], cols[pivot] = cols[pivot], cols[rank]
        trans[rank], trans[pivot] = trans[pivot], trans[rank]
        rank += 1
    return [trans[j] for j in range(rank, ncols)]


@dataclass
class SmithForm:
    """U * M * V = D with D diagonal, divisors d1 | d2 | ... (all > 0)."""
    divisors: List[int]
    rank: int
    u: Optional[Matrix] = None
    v: Optional[Matrix] = None
    d: Optional[Matrix] = field(default=None, repr=False)


def smith_form(matrix: Sequence[Sequence[int]], transforms: bool = False) -> SmithForm:
    """
    Smith normal form D = U A V over Z.

    Args:
        matrix: Integer rows
        transforms: Also return the unimodular U and V

    Returns:
        SmithForm with divisors d1 | d2 | ... and the rank
    """
    a = [list(r) for r in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    u = identity(m) if transforms else None
    v = identity(n) if transforms else None

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        if u is not None:
            u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        if v is not None:
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, f: int) -> None:
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        if u is not None:
            u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst: int, src: int, f: int) -> None:
        for row in a:
            row[dst] += f * row[src]
        if v is not None:
            for row in v:
                row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
                    if abs(a[i][j]) == 1:
                        break
            if best is not None and abs(a[best[0]][best[1]]) == 1:
                break
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if u is not None:
                u[t] = [-x for x in u[t]]
        t += 1
    divisors = [a[i][i] for i in range(t)]
    return SmithForm(divisors=divisors, rank=len(divisors), u=u, v=v, d=a if transforms else None)


def sparse_elementary_divisors(rows: Sequence[Dict[int, int]]) -> Tuple[int, List[int]]:
    """
    (rank, divisors > 1) of a sparse integer matrix given as {col: value} rows.

    Unit pivots are eliminated sparsely first; the remaining block, which has
    no unit entries, goes through the dense Smith form.
    """
    live: Dict[int, Dict[int, int]] = {r: dict(row) for r, row in enumerate(rows) if row}
    by_col: Dict[int, set] = {}
    for r, row in live.items():
        for c in row:
            by_col.setdefault(c, set()).add(r)
    units = 0
    progress = True
    while progress:
        progress = False
        for r in list(live.keys()):
            row = live.get(r)
            if row is None:
                continue
            c = next((c for c, x in row.items() if x in (1, -1)), None)
            if c is None:
                continue
            piv = row[c]
            for other in list(by_col.get(c, ())):
                if other == r:
                    continue
                orow = live[other]
                f = orow[c] * piv
                for cc, x in row.items():
                    val = orow.get(cc, 0) - f * x
                    if val:
                        if cc not in orow:
                            by_col.setdefault(cc, set()).add(other)
                        orow[cc] = val
                    elif cc in orow:
                        del orow[cc]
                        by_col[cc].discard(other)
                if not orow:
                    del live[other]
            for cc in row:
                by_col[cc].discard(r)
            del live[r]
            units += 1
            progress = True
    if not live:
        return units, []
    cols = sorted({c for row in live.values() for c in row})
    index = {c: k for k, c in enumerate(cols)}
    dense = []
    for row in live.values():
        line = [0] * len(cols)
        for c, x in row.items():
            line[index[c]] = x
        dense.append(line)
    snf = smith_form(dense)
    return units + snf.rank, [d for d in snf.divisors if d > 1]
