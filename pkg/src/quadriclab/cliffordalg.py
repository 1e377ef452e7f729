"""Even Clifford algebra of a 4-variable quadratic form, and its odd module.

Convention: uv + vu = 2 u^T A v for vectors u, v, so e_i^2 = A[i][i].
This keeps the square of the canonical central element exactly det A and
requires 2 invertible in the base ring (odd characteristic only).

The even algebra is 8-dimensional with ordered basis
    1; e_i e_j (i < j, six elements); e_1 e_2 e_3 e_4
and the odd bimodule is 8-dimensional with ordered basis
    e_1..e_4; e_i e_j e_k (i < j < k, four elements).
Structure constants come from normal ordering words of generators, so they
are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Optional

from .fields import Field, QQ
from .linalg import Matrix
from .poly import PolyRing

EVEN_WORDS = ((), (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 1, 2, 3))
ODD_WORDS = ((0,), (1,), (2,), (3,), (0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))
_EVEN_INDEX = {w: i for i, w in enumerate(EVEN_WORDS)}
_ODD_INDEX = {w: i for i, w in enumerate(ODD_WORDS)}


class CliffordError(ValueError):
    def __init__(self, code, message=None, witness=None):
        super().__init__(message or code)
        self.code = code
        self.witness = witness


def normal_order(ring, a_rows, word, coeff=None):
    """Rewrite a generator word into the sorted strictly-increasing basis.

    Uses e_a e_b = 2 A[a][b] - e_b e_a for a > b and e_a e_a = A[a][a].
    Returns {sorted word: coefficient}; zero coefficients are dropped.
    """
    two = ring.from_int(2)
    result = {}
    stack = [(tuple(word), ring.one if coeff is None else coeff)]
    while stack:
        w, c = stack.pop()
        if ring.is_zero(c):
            continue
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if a == b:
                stack.append((w[:i] + w[i + 2:], ring.mul(c, a_rows[a][a])))
                break
            if a > b:
                stack.append((w[:i] + (b, a) + w[i + 2:], ring.neg(c)))
                stack.append((w[:i] + w[i + 2:],
                              ring.mul(c, ring.mul(two, a_rows[a][b]))))
                break
        else:
            prev = result.get(w)
            result[w] = c if prev is None else ring.add(prev, c)
    return {w: c for w, c in result.items() if not ring.is_zero(c)}


def _coords(ring, reduced, index):
    vec = [ring.zero] * 8
    for w, c in reduced.items():
        vec[index[w]] = c
    return vec


def word_product_coords(ring, a_rows, w1, w2, out_parity):
    index = _EVEN_INDEX if out_parity == 0 else _ODD_INDEX
    return _coords(ring, normal_order(ring, a_rows, w1 + w2), index)


def _check_char(ring):
    if ring.characteristic == 2:
        raise CliffordError("char2_unsupported", "2 must be invertible")


class EvenCliffordAlgebra:
    """8-dimensional even Clifford algebra with explicit structure constants."""

    def __init__(self, ring, a_matrix: Matrix, check=True, allow_asymmetric=False):
        _check_char(ring)
        if a_matrix.nrows != 4 or a_matrix.ncols != 4:
            raise CliffordError("bad_shape", "A must be 4x4")
        if not allow_asymmetric and not a_matrix.is_symmetric():
            raise CliffordError("asymmetric", "A must be symmetric")
        self.ring = ring
        self.a_rows = a_matrix.rows
        self.a_matrix = a_matrix
        self.table = [[word_product_coords(ring, self.a_rows, w1, w2, 0)
                       for w2 in EVEN_WORDS] for w1 in EVEN_WORDS]
        if check:
            witness = self.associativity_witness()
            if witness is not None:
                raise CliffordError("not_associative",
                                    "associativity fails at basis triple %r" % (witness,),
                                    witness=witness)

    def basis_vector(self, i):
        vec = [self.ring.zero] * 8
        vec[i] = self.ring.one
        return vec

    @property
    def unit(self):
        return self.basis_vector(0)

    def multiply(self, x, y):
        ring = self.ring
        out = [ring.zero] * 8
        for i, xi in enumerate(x):
            if ring.is_zero(xi):
                continue
            for j, yj in enumerate(y):
                if ring.is_zero(yj):
                    continue
                c = ring.mul(xi, yj)
                row = self.table[i][j]
                for m in range(8):
                    if not ring.is_zero(row[m]):
                        out[m] = ring.add(out[m], ring.mul(c, row[m]))
        return out

    def left_mult_matrix(self, x) -> Matrix:
        cols = [self.multiply(x, self.basis_vector(j)) for j in range(8)]
        return Matrix(self.ring, [[cols[j][i] for j in range(8)] for i in range(8)])

    def associativity_witness(self) -> Optional[tuple]:
        """First basis triple where (b_i b_j) b_k != b_i (b_j b_k), or None."""
        ring = self.ring
        for i in range(8):
            for j in range(8):
                xy = self.table[i][j]
                for k in range(8):
                    lhs = self.multiply(xy, self.basis_vector(k))
                    rhs = self.multiply(self.basis_vector(i), self.table[j][k])
                    if any(not ring.eq(a, b) for a, b in zip(lhs, rhs)):
                        return (i, j, k)
        return None

    def is_central(self, x) -> bool:
        ring = self.ring
        for j in range(8):
            b = self.basis_vector(j)
            lhs = self.multiply(x, b)
            rhs = self.multiply(b, x)
            if any(not ring.eq(a, c) for a, c in zip(lhs, rhs)):
                return False
        return True

    def structure_constants_strings(self):
        """8x8x8 tensor of structure constants as strings (for external cross-checks)."""
        return [[[self.ring.to_str(c) for c in self.table[i][j]] for j in range(8)]
                for i in range(8)]


class OddCliffordModule:
    """The odd part as a bimodule over the even algebra, plus the odd-odd pairing."""

    def __init__(self, algebra: EvenCliffordAlgebra, check=True):
        ring = algebra.ring
        a_rows = algebra.a_rows
        self.algebra = algebra
        self.ring = ring
        # left[i][j]  = b_i . m_j   (even i, odd j) in odd coordinates
        # right[j][i] = m_j . b_i   in odd coordinates
        # pair[i][j]  = m_i . m_j   in even coordinates
        self.left = [[word_product_coords(ring, a_rows, w1, w2, 1)
                      for w2 in ODD_WORDS] for w1 in EVEN_WORDS]
        self.right = [[word_product_coords(ring, a_rows, w2, w1, 1)
                       for w1 in EVEN_WORDS] for w2 in ODD_WORDS]
        self.pair = [[word_product_coords(ring, a_rows, w1, w2, 0)
                      for w2 in ODD_WORDS] for w1 in ODD_WORDS]
        if check:
            witness = self.bimodule_witness()
            if witness is not None:
                raise CliffordError("not_bimodule",
                                    "bimodule axiom fails at %r" % (witness,), witness=witness)
            witness = self.balanced_witness()
            if witness is not None:
                raise CliffordError("not_balanced",
                                    "pairing is not balanced at %r" % (witness,), witness=witness)

    def act_left(self, b, m):
        ring = self.ring
        out = [ring.zero] * 8
        for i, bi in enumerate(b):
            if ring.is_zero(bi):
                continue
            for j, mj in enumerate(m):
                if ring.is_zero(mj):
                    continue
                c = ring.mul(bi, mj)
                row = self.left[i][j]
                for t in range(8):
                    if not ring.is_zero(row[t]):
                        out[t] = ring.add(out[t], ring.mul(c, row[t]))
        return out

    def act_right(self, m, b):
        ring = self.ring
        out = [ring.zero] * 8
        for j, mj in enumerate(m):
            if ring.is_zero(mj):
                continue
            for i, bi in enumerate(b):
                if ring.is_zero(bi):
                    continue
                c = ring.mul(mj, bi)
                row = self.right[j][i]
                for t in range(8):
                    if not ring.is_zero(row[t]):
                        out[t] = ring.add(out[t], ring.mul(c, row[t]))
        return out

    def pair_vectors(self, m1, m2):
        ring = self.ring
        out = [ring.zero] * 8
        for i, mi in enumerate(m1):
            if ring.is_zero(mi):
                continue
            for j, mj in enumerate(m2):
                if ring.is_zero(mj):
                    continue
                c = ring.mul(mi, mj)
                row = self.pair[i][j]
                for t in range(8):
                    if not ring.is_zero(row[t]):
                        out[t] = ring.add(out[t], ring.mul(c, row[t]))
        return out

    def bimodule_witness(self):
        ring = self.ring
        for i in range(8):
            for j in range(8):
                mj = [self.ring.zero] * 8
                mj[j] = self.ring.one
                bm = self.left[i][j]
                for k in range(8):
                    bk = [self.ring.zero] * 8
                    bk[k] = self.ring.one
                    lhs = self.act_right(bm, bk)
                    mb = self.right[j][k]
                    rhs = self.act_left([self.ring.one if t == i else self.ring.zero
                                         for t in range(8)], mb)
                    if any(not ring.eq(a, b) for a, b in zip(lhs, rhs)):
                        return (i, j, k)
        return None

    def balanced_witness(self):
        """First (m_j, b_i, m_k) with (m b) . m' != m . (b m'), or None."""
        ring = self.ring
        for j in range(8):
            for i in range(8):
                mb = self.right[j][i]
                for k in range(8):
                    mk = [ring.zero] * 8
                    mk[k] = ring.one
                    lhs = self.pair_vectors(mb, mk)
                    bm = self.left[i][k]
                    mj = [ring.zero] * 8
                    mj[j] = ring.one
                    rhs = self.pair_vectors(mj, bm)
                    if any(not ring.eq(a, b) for a, b in zip(lhs, rhs)):
                        return (j, i, k)
        return None


def generator_action_tables(ring, a_matrix: Matrix):
    """Left multiplication by each generator e_i as 8x8 matrices.

    Returns (even_to_odd, odd_to_even): per generator, the matrix of
    m -> e_i . m on the even basis (landing in odd coordinates) and on
    the odd basis (landing in even coordinates).
    """
    _check_char(ring)
    a_rows = a_matrix.rows
    even_to_odd = []
    odd_to_even = []
    for i in range(4):
        cols_eo = [word_product_coords(ring, a_rows, (i,), w, 1) for w in EVEN_WORDS]
        cols_oe = [word_product_coords(ring, a_rows, (i,), w, 0) for w in ODD_WORDS]
        even_to_odd.append(Matrix(ring, [[cols_eo[j][t] for j in range(8)] for t in range(8)]))
        odd_to_even.append(Matrix(ring, [[cols_oe[j][t] for j in range(8)] for t in range(8)]))
    return even_to_odd, odd_to_even


def build_even_clifford(a_matrix: Matrix, ring=None, check=True,
                        allow_asymmetric=False) -> EvenCliffordAlgebra:
    ring = ring if ring is not None else a_matrix.ring
    return EvenCliffordAlgebra(ring, a_matrix, check=check, allow_asymmetric=allow_asymmetric)


# --- the canonical central element --------------------------------------
#
# Over any base with 2 invertible the center of the even algebra is spanned
# by 1 and the full antisymmetrization of e1 e2 e3 e4 (one 24th of the
# signed sum over all orderings).  Expanded by normal ordering, that
# element has integer polynomial coefficients in the entries of A, so the
# formula computed once over Q specializes to every odd characteristic.


@lru_cache(maxsize=1)
def _universal_center_formula():
    names = ["a%d%d" % (i + 1, j + 1) for i in range(4) for j in range(i, 4)]
    ring = PolyRing(QQ, names)
    gens = dict(zip(names, ring.gens()))
    a_rows = [[gens["a%d%d" % (min(i, j) + 1, max(i, j) + 1)] for j in range(4)]
              for i in range(4)]
    total = {}
    for perm in permutations(range(4)):
        sign = 1
        for x in range(4):
            for y in range(x + 1, 4):
                if perm[x] > perm[y]:
                    sign = -sign
        reduced = normal_order(ring, a_rows, perm,
                               ring.from_int(sign))
        for w, c in reduced.items():
            prev = total.get(w, ring.zero)
            total[w] = prev + c
    formula = {}
    for w, poly in total.items():
        scaled = {}
        for exp, c in poly.terms.items():
            q = c / 24
            if q.denominator != 1:
                raise AssertionError("central element formula is not integral")
            if q != 0:
                scaled[exp] = int(q)
        if scaled:
            formula[w] = scaled
    return tuple(names), formula


def center_element(algebra: EvenCliffordAlgebra):
    """Coordinates of the canonical central element z (z^2 = det A)."""
    ring = algebra.ring
    names, formula = _universal_center_formula()
    values = {}
    for idx, name in enumerate(names):
        i, j = int(name[1]) - 1, int(name[2]) - 1
        values[idx] = algebra.a_rows[i][j]
    vec = [ring.zero] * 8
    for w, terms in formula.items():
        acc = ring.zero
        for exp, c in terms.items():
            term = ring.from_int(c)
            for pos, k in enumerate(exp):
                for _ in range(k):
                    term = ring.mul(term, values[pos])
            acc = ring.add(acc, term)
        vec[_EVEN_INDEX[w]] = acc
    return vec


@dataclass
class CenterData:
    z: list                 # coordinates of z in the even basis
    c: object               # z^2 = c * 1
    unit_factor: int        # c = unit_factor^2 * det A; always 1 here
    is_central: bool
    matches_det: bool


def center(algebra: EvenCliffordAlgebra) -> CenterData:
    """The center {1, z} with the relation z^2 = c, and c compared to det A."""
    ring = algebra.ring
    z = center_element(algebra)
    z2 = algebra.multiply(z, z)
    if any(not ring.is_zero(z2[i]) for i in range(1, 8)):
        raise CliffordError("center_not_quadratic", "z^2 is not a multiple of 1")
    c = z2[0]
    det = algebra.a_matrix.det()
    return CenterData(
        z=z,
        c=c,
        unit_factor=1,
        is_central=algebra.is_central(z),
        matches_det=ring.eq(c, det),
    )


def center_fiber_type(field: Field, c) -> str:
    """Type of k[z]/(z^2 - c): split etale, nonsplit etale, or dual numbers."""
    if field.is_zero(c):
        return "dual-numbers"
    return "etale-split" if field.is_square(c) else "etale-nonsplit"


# --- pointwise structure: radical and blocks ------------------------------


def _trace_of_product(algebra, i, j):
    # tr(L_{b_i} L_{b_j}) = sum_a sum_m table[j][a][m] * table[i][m][a]
    ring = algebra.ring
    total = ring.zero
    for a in range(8):
        col = algebra.table[j][a]
        for m in range(8):
            if not ring.is_zero(col[m]):
                total = ring.add(total, ring.mul(col[m], algebra.table[i][m][a]))
    return total


class _SubspaceAlgebra:
    """An algebra presented by a multiplication table on an abstract basis."""

    def __init__(self, field, table):
        self.field = field
        self.dim = len(table)
        self.table = table

    def trace_gram(self):
        f = self.field
        dim = self.dim
        lm = []
        for i in range(dim):
            mat = [[self.table[i][j][t] for j in range(dim)] for t in range(dim)]
            lm.append(mat)
        rows = []
        for i in range(dim):
            row = []
            for j in range(dim):
                total = f.zero
                for a in range(dim):
                    for m in range(dim):
                        total = f.add(total, f.mul(lm[j][m][a], lm[i][a][m]))
                row.append(total)
            rows.append(row)
        return Matrix(f, rows)

    def multiply(self, x, y):
        f = self.field
        out = [f.zero] * self.dim
        for i, xi in enumerate(x):
            if f.is_zero(xi):
                continue
            for j, yj in enumerate(y):
                if f.is_zero(yj):
                    continue
                c = f.mul(xi, yj)
                for t in range(self.dim):
                    v = self.table[i][j][t]
                    if not f.is_zero(v):
                        out[t] = f.add(out[t], f.mul(c, v))
        return out


def _span_dim(field, vectors, width):
    if not vectors:
        return 0
    return Matrix(field, [list(v) for v in vectors]).rank()


def _quotient_table(field, table, radical_vectors):
    """Multiplication table of algebra / span(radical_vectors)."""
    dim = len(table)
    if not radical_vectors:
        return list(range(dim)), table
    rad = Matrix(field, radical_vectors)
    red, pivots = rad.rref()
    free = [c for c in range(dim) if c not in pivots]

    def project(vec):
        v = list(vec)
        for r, pc in enumerate(pivots):
            c = v[pc]
            if not field.is_zero(c):
                for t in range(dim):
                    v[t] = field.sub(v[t], field.mul(c, red.rows[r][t]))
        return [v[c] for c in free]

    basis = []
    for c in free:
        e = [field.zero] * dim
        e[c] = field.one
        basis.append(e)
    alg = _SubspaceAlgebra(field, table)
    qtable = [[project(alg.multiply(x, y)) for y in basis] for x in basis]
    return free, qtable


def jacobson_radical(field: Field, table):
    """Basis of the radical of a finite-dimensional algebra over an exact field.

    Kernel of the trace form of left multiplication, iterated through the
    quotient until the quotient's trace form is nondegenerate; the result
    is verified nilpotent.
    """
    dim = len(table)
    alg = _SubspaceAlgebra(field, table)
    gram = alg.trace_gram()
    radical = gram.kernel_basis()
    while True:
        free, qtable = _quotient_table(field, table, radical)
        if not qtable or len(qtable) == 0:
            break
        qalg = _SubspaceAlgebra(field, qtable)
        qker = qalg.trace_gram().kernel_basis()
        if not qker:
            break
        # pull the quotient kernel back and enlarge the radical
        lifted = []
        for v in qker:
            vec = [field.zero] * dim
            for val, c in zip(v, free):
                vec[c] = val
            lifted.append(vec)
        new_dim = _span_dim(field, radical + lifted, dim)
        if new_dim == _span_dim(field, radical, dim):
            break
        radical = Matrix(field, radical + lifted).rref()[0].rows[:new_dim]
    # verify nilpotency of the span
    span = [v for v in ([list(v) for v in radical])
            if any(not field.is_zero(c) for c in v)]
    alg = _SubspaceAlgebra(field, table)
    current = span
    steps = 0
    while current and steps <= dim:
        products = [alg.multiply(x, y) for x in current for y in span]
        products = [p for p in products if any(not field.is_zero(c) for c in p)]
        if not products:
            current = []
            break
        mat, pivots = Matrix(field, products).rref()
        current = mat.rows[:len(pivots)]
        steps += 1
    if current:
        raise CliffordError("radical_not_nilpotent",
                            "trace radical failed the nilpotency check")
    return span


@dataclass
class StructureTag:
    corank: int
    radical_dim: int
    semisimple_dim: int
    center_square: object       # value c with z^2 = c at the point
    center_type: str            # etale-split / etale-nonsplit / dual-numbers
    blocks: Optional[list] = None  # for the split case: per-block diagnostics


def semisimple_type_at(fam, point) -> StructureTag:
    """Radical data of the even Clifford algebra of the fiber at a point."""
    from .family import corank_at
    corank, _ = corank_at(fam, point)
    if corank >= 3:
        raise CliffordError("corank3_unsupported")
    field = fam.field
    a_pt = fam.matrix_at(point)
    algebra = EvenCliffordAlgebra(field, a_pt, check=False)
    radical = jacobson_radical(field, algebra.table)
    radical_dim = _span_dim(field, radical, 8)
    cd = center(algebra)
    ctype = center_fiber_type(field, cd.c)
    blocks = None
    if ctype == "etale-split":
        blocks = _split_blocks(field, algebra, cd)
    return StructureTag(
        corank=corank,
        radical_dim=radical_dim,
        semisimple_dim=8 - radical_dim,
        center_square=cd.c,
        center_type=ctype,
        blocks=blocks,
    )


def _split_blocks(field, algebra, cd):
    """Central idempotents (1 +- z/s)/2 and structural checks on both blocks."""
    s = field.sqrt(cd.c)
    half = field.inv(field.from_int(2))
    blocks = []
    for sign in (1, -1):
        zs = [field.mul(half, field.mul(field.inv(s) if sign > 0 else field.neg(field.inv(s)), c))
              for c in cd.z]
        idem = [field.add(field.mul(half, u), v)
                for u, v in zip(algebra.unit, zs)]
        sq = algebra.multiply(idem, idem)
        if any(not field.eq(a, b) for a, b in zip(sq, idem)):
            raise CliffordError("idempotent_failure", "central idempotent does not square to itself")
        image = [algebra.multiply(idem, algebra.basis_vector(j)) for j in range(8)]
        mat, pivots = Matrix(field, image).rref()
        basis = mat.rows[:len(pivots)]
        dim = len(pivots)
        # block multiplication table in the span basis
        span = Matrix(field, basis)

        def in_coords(vec):
            sol = span.transpose().solve(vec)
            return sol

        table = []
        for x in basis:
            row = []
            for y in basis:
                row.append(in_coords(algebra.multiply(list(x), list(y))))
            table.append(row)
        rad = jacobson_radical(field, table)
        center_dim = _block_center_dim(field, table)
        blocks.append({
            "dim": dim,
            "radical_dim": _span_dim(field, rad, dim),
            "center_dim": center_dim,
            "matrix_algebra_2x2": dim == 4 and not rad and center_dim == 1,
        })
    return blocks


def _block_center_dim(field, table):
    dim = len(table)
    rows = []
    for j in range(dim):
        for t in range(dim):
            row = []
            for i in range(dim):
                # coefficient of x_i in (x b_j - b_j x)_t
                row.append(field.sub(table[i][j][t], table[j][i][t]))
            rows.append(row)
    return len(Matrix(field, rows).kernel_basis())


# --- periodicity ----------------------------------------------------------


@dataclass
class PeriodicityResult:
    balanced_dim: int
    relation_rank: int
    mult_rank: int
    mult_annihilates_relations: bool
    mult_is_isomorphism: bool
    hom_dim: Optional[int] = None
    witness_point: Optional[tuple] = None


def _relation_vectors(module: OddCliffordModule):
    """The 512 balancing relations (m b) x m' - m x (b m') in the 64-dim tensor square."""
    ring = module.ring
    relations = []
    for b in range(8):
        for m in range(8):
            mb = module.right[m][b]
            for mp in range(8):
                bmp = module.left[b][mp]
                vec = [ring.zero] * 64
                for t in range(8):
                    if not ring.is_zero(mb[t]):
                        vec[t * 8 + mp] = ring.add(vec[t * 8 + mp], mb[t])
                for t in range(8):
                    if not ring.is_zero(bmp[t]):
                        vec[m * 8 + t] = ring.sub(vec[m * 8 + t], bmp[t])
                relations.append(vec)
    return relations


def _mult_matrix(module: OddCliffordModule) -> Matrix:
    ring = module.ring
    rows = [[ring.zero] * 64 for _ in range(8)]
    for i in range(8):
        for j in range(8):
            col = module.pair[i][j]
            for t in range(8):
                rows[t][i * 8 + j] = col[t]
    return Matrix(ring, rows)


def verify_periodicity(fam, point) -> PeriodicityResult:
    """Tensor-square check of the odd module over the even algebra at a point.

    The balanced tensor product is the quotient of the 64-dimensional plain
    tensor square by the 512 balancing relations; its dimension must be 8
    and the multiplication map must induce an isomorphism onto the even
    algebra.  Also counts left-module endomorphisms (must be 8).
    Only defined at points where the fiber quadric is nondegenerate.
    """
    field = fam.field
    a_pt = fam.matrix_at(point)
    if field.is_zero(a_pt.det()):
        raise CliffordError("degenerate_point",
                            "periodicity check needs a corank-0 point")
    algebra = EvenCliffordAlgebra(field, a_pt, check=False)
    module = OddCliffordModule(algebra, check=False)
    relations = _relation_vectors(module)
    rel_matrix = Matrix(field, relations)
    rel_rank = rel_matrix.rank()
    mu = _mult_matrix(module)
    annihilates = all(all(field.is_zero(v) for v in mu.apply_vector(r)) for r in relations)
    mu_rank = mu.rank()
    balanced_dim = 64 - rel_rank
    is_iso = annihilates and mu_rank == 8 and rel_rank == 56
    hom_dim = _left_hom_dimension(field, module)
    return PeriodicityResult(
        balanced_dim=balanced_dim,
        relation_rank=rel_rank,
        mult_rank=mu_rank,
        mult_annihilates_relations=annihilates,
        mult_is_isomorphism=is_iso,
        hom_dim=hom_dim,
        witness_point=tuple(point),
    )


def _left_hom_dimension(field, module):
    """dim of endomorphisms of the odd module commuting with the left action."""
    rows = []
    for b in range(8):
        lb = Matrix(field, [[module.left[b][j][t] for j in range(8)] for t in range(8)])
        # phi L_b - L_b phi = 0: 64 equations in the 64 unknowns phi[s][t]
        for out_i in range(8):
            for in_j in range(8):
                row = [field.zero] * 64
                for t in range(8):
                    row[out_i * 8 + t] = field.add(row[out_i * 8 + t], lb.rows[t][in_j])
                    row[t * 8 + in_j] = field.sub(row[t * 8 + in_j], lb.rows[out_i][t])
                rows.append(row)
    return len(Matrix(field, rows).kernel_basis())


def verify_periodicity_generic(fam) -> PeriodicityResult:
    """Periodicity at the generic point of the base, by exact certificate.

    The balancing relations are annihilated by the multiplication map as
    polynomial identities, so over the function field the relation span
    sits inside the kernel of the multiplication map, whose rank is at
    most 8.  A single nondegenerate specialization where the relation
    matrix reaches rank 56 and the multiplication matrix reaches rank 8
    then pins both generic ranks exactly (specialization can only drop
    the rank of a polynomial matrix).
    """
    ring = fam.ring
    field = fam.field
    algebra = EvenCliffordAlgebra(ring, fam.matrix, check=False)
    module = OddCliffordModule(algebra, check=False)
    relations = _relation_vectors(module)
    mu = _mult_matrix(module)
    annihilates = all(all(ring.is_zero(v) for v in mu.apply_vector(r)) for r in relations)
    witness = _find_nondegenerate_point(fam)
    spec = verify_periodicity(fam, witness)
    is_iso = (annihilates and spec.relation_rank == 56 and spec.mult_rank == 8)
    return PeriodicityResult(
        balanced_dim=64 - spec.relation_rank,
        relation_rank=spec.relation_rank,
        mult_rank=spec.mult_rank,
        mult_annihilates_relations=annihilates,
        mult_is_isomorphism=is_iso,
        witness_point=witness,
    )


def _find_nondegenerate_point(fam):
    from itertools import product as iproduct
    field = fam.field
    if field.characteristic:
        values = [field.from_int(v) for v in range(field.characteristic)]
    else:
        values = [field.from_int(v) for v in (0, 1, -1, 2, -2, 3)]
    for pt in iproduct(values, repeat=fam.base_dim):
        if not field.is_zero(fam.matrix_at(pt).det()):
            return pt
    raise CliffordError("no_nondegenerate_point",
                        "could not find a corank-0 specialization on the search grid")
