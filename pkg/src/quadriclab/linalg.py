"""Exact matrices over a field or polynomial ring.

Field matrices get rank / kernel / RREF by Gaussian elimination with a
fixed pivot rule (first nonzero entry scanning rows top down), so every
result is deterministic.  Matrices over an integral domain (polynomial
rings) get rank and determinant by fraction-free Bareiss elimination,
which computes the values over the fraction field without ever leaving
the domain.
"""

from __future__ import annotations

from .poly import PolyRing


class Matrix:
    __slots__ = ("ring", "rows", "nrows", "ncols")

    def __init__(self, ring, rows):
        self.ring = ring
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        return cls(ring, [[ring.zero] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, ring, n):
        m = cls.zeros(ring, n, n)
        for i in range(n):
            m.rows[i][i] = ring.one
        return m

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def copy(self):
        return Matrix(self.ring, self.rows)

    def transpose(self):
        return Matrix(self.ring, [[self.rows[i][j] for i in range(self.nrows)]
                                  for j in range(self.ncols)])

    def __add__(self, other):
        return Matrix(self.ring, [[self.ring.add(a, b) for a, b in zip(r1, r2)]
                                  for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return Matrix(self.ring, [[self.ring.sub(a, b) for a, b in zip(r1, r2)]
                                  for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix(self.ring, [[self.ring.neg(a) for a in r] for r in self.rows])

    def __mul__(self, other):
        if other.nrows != self.ncols:
            raise ValueError("shape mismatch: %dx%d * %dx%d"
                             % (self.nrows, self.ncols, other.nrows, other.ncols))
        ring = self.ring
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = ring.zero
                for k in range(self.ncols):
                    a = self.rows[i][k]
                    if ring.is_zero(a):
                        continue
                    acc = ring.add(acc, ring.mul(a, other.rows[k][j]))
                row.append(acc)
            out.append(row)
        return Matrix(ring, out)

    def scale(self, c):
        return Matrix(self.ring, [[self.ring.mul(c, a) for a in r] for r in self.rows])

    def apply_vector(self, vec):
        ring = self.ring
        out = []
        for i in range(self.nrows):
            acc = ring.zero
            for k in range(self.ncols):
                acc = ring.add(acc, ring.mul(self.rows[i][k], vec[k]))
            out.append(acc)
        return out

    def is_zero(self):
        return all(self.ring.is_zero(a) for r in self.rows for a in r)

    def is_symmetric(self):
        if self.nrows != self.ncols:
            return False
        return all(self.ring.eq(self.rows[i][j], self.rows[j][i])
                   for i in range(self.nrows) for j in range(i + 1, self.ncols))

    def __eq__(self, other):
        return (isinstance(other, Matrix) and other.nrows == self.nrows
                and other.ncols == self.ncols
                and all(self.ring.eq(a, b) for r1, r2 in zip(self.rows, other.rows)
                        for a, b in zip(r1, r2)))

    __hash__ = None

    def map_entries(self, func, ring=None):
        return Matrix(ring or self.ring, [[func(a) for a in r] for r in self.rows])

    def evaluate(self, point):
        """Specialize a polynomial matrix at a point, returning a field matrix."""
        if not isinstance(self.ring, PolyRing):
            raise ValueError("evaluate only applies to polynomial matrices")
        field = self.ring.field
        return self.map_entries(lambda p: p.evaluate(point), ring=field)

    def to_strings(self):
        return [[self.ring.to_str(a) for a in r] for r in self.rows]

    def __repr__(self):
        return "Matrix(%d x %d over %r)" % (self.nrows, self.ncols, self.ring)

    # --- field elimination ------------------------------------------------

    def rref(self):
        """(reduced row echelon form, pivot column list); field entries only."""
        field = self.ring
        rows = [list(r) for r in self.rows]
        pivots = []
        pr = 0
        for pc in range(self.ncols):
            pivot_row = None
            for i in range(pr, self.nrows):
                if not field.is_zero(rows[i][pc]):
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            rows[pr], rows[pivot_row] = rows[pivot_row], rows[pr]
            inv = field.inv(rows[pr][pc])
            rows[pr] = [field.mul(inv, a) for a in rows[pr]]
            for i in range(self.nrows):
                if i != pr and not field.is_zero(rows[i][pc]):
                    f = rows[i][pc]
                    rows[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(rows[i], rows[pr])]
            pivots.append(pc)
            pr += 1
            if pr == self.nrows:
                break
        return Matrix(field, rows), pivots

    def rank(self):
        if isinstance(self.ring, PolyRing):
            return self.bareiss_rank()
        return len(self.rref()[1])

    def kernel_basis(self):
        """Basis of the right kernel, deterministic from the RREF pivot rule.

        Canonical form: one vector per free column (in increasing column
        order) with entry 1 there and the negated RREF entries at pivots.
        """
        field = self.ring
        red, pivots = self.rref()
        pivot_set = set(pivots)
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            vec = [field.zero] * self.ncols
            vec[free] = field.one
            for r, pc in enumerate(pivots):
                vec[pc] = field.neg(red.rows[r][free])
            basis.append(vec)
        return basis

    def solve(self, rhs):
        """One solution of self * x = rhs over a field, or None if inconsistent."""
        field = self.ring
        aug = Matrix(field, [row + [b] for row, b in zip(self.rows, rhs)])
        red, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [field.zero] * self.ncols
        for r, pc in enumerate(pivots):
            x[pc] = red.rows[r][self.ncols]
        return x

    # --- fraction-free elimination -----------------------------------------

    def _pivot_weight(self, entry):
        ring = self.ring
        if isinstance(ring, PolyRing):
            return (entry.degree(), len(entry.terms))
        return (0, 0)

    def bareiss_rank(self, collect_pivots=None):
        """Rank over the fraction field by one-step fraction-free elimination.

        Pivots are chosen among nonzero candidates with minimal
        (degree, term count) so polynomial growth stays small; all
        divisions are exact by the Bareiss identity.  Pass a list as
        collect_pivots to receive the pivot entries.
        """
        ring = self.ring
        rows = [list(r) for r in self.rows]
        nr, nc = self.nrows, self.ncols
        prev = ring.one
        rank = 0
        col_order = list(range(nc))
        for step in range(min(nr, nc)):
            best = None
            for i in range(rank, nr):
                for jj in range(rank, nc):
                    a = rows[i][col_order[jj]]
                    if not ring.is_zero(a):
                        w = self._pivot_weight(a)
                        if best is None or w < best[0]:
                            best = (w, i, jj)
            if best is None:
                break
            _, pi, pj = best
            rows[rank], rows[pi] = rows[pi], rows[rank]
            col_order[rank], col_order[pj] = col_order[pj], col_order[rank]
            pivot = rows[rank][col_order[rank]]
            if collect_pivots is not None:
                collect_pivots.append(pivot)
            for i in range(rank + 1, nr):
                for jj in range(rank + 1, nc):
                    j = col_order[jj]
                    num = ring.sub(ring.mul(pivot, rows[i][j]),
                                   ring.mul(rows[i][col_order[rank]], rows[rank][j]))
                    rows[i][j] = ring.exact_div(num, prev)
                rows[i][col_order[rank]] = ring.zero
            prev = pivot
            rank += 1
        return rank

    def det(self):
        """Determinant: Bareiss over a domain, elimination over a field."""
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        ring = self.ring
        n = self.nrows
        if n == 0:
            return ring.one
        rows = [list(r) for r in self.rows]
        prev = ring.one
        sign = 1
        for k in range(n - 1):
            if ring.is_zero(rows[k][k]):
                swap = None
                for i in range(k + 1, n):
                    if not ring.is_zero(rows[i][k]):
                        swap = i
                        break
                if swap is None:
                    return ring.zero
                rows[k], rows[swap] = rows[swap], rows[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = ring.sub(ring.mul(rows[k][k], rows[i][j]),
                                   ring.mul(rows[i][k], rows[k][j]))
                    rows[i][j] = ring.exact_div(num, prev)
                rows[i][k] = ring.zero
            prev = rows[k][k]
        result = rows[n - 1][n - 1]
        return ring.neg(result) if sign < 0 else result


def det_by_cofactors(matrix: Matrix):
    """Laplace-expansion determinant; independent oracle for det()."""
    ring = matrix.ring
    n = matrix.nrows

    def rec(rows):
        if len(rows) == 1:
            return rows[0][0]
        total = ring.zero
        for j in range(len(rows)):
            a = rows[0][j]
            if ring.is_zero(a):
                continue
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            term = ring.mul(a, rec(minor))
            total = ring.add(total, ring.neg(term) if j % 2 else term)
        return total

    if n != matrix.ncols:
        raise ValueError("determinant of a non-square matrix")
    return rec(matrix.rows)


def rank_by_minors(matrix: Matrix):
    """Largest k with a nonzero k x k minor; independent oracle for rank()."""
    from itertools import combinations
    ring = matrix.ring
    best = 0
    for k in range(1, min(matrix.nrows, matrix.ncols) + 1):
        found = False
        for rows in combinations(range(matrix.nrows), k):
            for cols in combinations(range(matrix.ncols), k):
                sub = Matrix(ring, [[matrix.rows[i][j] for j in cols] for i in rows])
                if not ring.is_zero(det_by_cofactors(sub)):
                    found = True
                    break
            if found:
                break
        if found:
            best = k
        else:
            break
    return best
