import random
from fractions import Fraction

from quadriclab.fields import PrimeField, QQ
from quadriclab.linalg import Matrix, det_by_cofactors, rank_by_minors
from quadriclab.poly import PolyRing


def qmat(rows):
    return Matrix(QQ, [[Fraction(v) for v in r] for r in rows])


def test_rank_trivial_cases():
    assert Matrix.identity(QQ, 4).rank() == 4
    assert Matrix.zeros(QQ, 4, 4).rank() == 0
    assert qmat([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]).rank() == 2


def test_kernel_trivial_cases():
    m = qmat([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    assert m.kernel_basis() == [[0, 0, 1, 0], [0, 0, 0, 1]]
    assert Matrix.identity(QQ, 3).kernel_basis() == []
    assert qmat([[0, 1], [0, 0]]).kernel_basis() == [[1, 0]]


def test_rank_plus_kernel_dimension_over_q_and_fp():
    rng = random.Random(3)
    for field in (QQ, PrimeField(7)):
        for _ in range(60):
            nr, nc = rng.randrange(1, 6), rng.randrange(1, 6)
            if field is QQ:
                rows = [[Fraction(rng.randrange(-4, 5)) for _ in range(nc)] for _ in range(nr)]
            else:
                rows = [[rng.randrange(7) for _ in range(nc)] for _ in range(nr)]
            m = Matrix(field, rows)
            assert m.rank() + len(m.kernel_basis()) == nc
            assert m.rank() == rank_by_minors(m)
            for vec in m.kernel_basis():
                assert all(field.is_zero(v) for v in m.apply_vector(vec))


def test_bareiss_matches_fp_reduction_at_good_primes():
    # fraction-free elimination over Q reproduces the mod-p rank at primes
    # that do not divide any pivot
    rng = random.Random(5)
    for _ in range(40):
        nr, nc = rng.randrange(1, 6), rng.randrange(1, 6)
        rows = [[Fraction(rng.randrange(-9, 10)) for _ in range(nc)] for _ in range(nr)]
        m = Matrix(QQ, rows)
        pivots = []
        rank_q = m.bareiss_rank(collect_pivots=pivots)
        assert rank_q == m.rank()
        for p in (101, 103, 107):
            if any(piv.numerator % p == 0 for piv in pivots):
                continue
            field = PrimeField(p)
            reduced = Matrix(field, [[field.from_fraction(v) for v in r] for r in rows])
            assert reduced.rank() == rank_q


def test_det_oracles_agree():
    rng = random.Random(9)
    for _ in range(30):
        n = rng.randrange(1, 5)
        rows = [[Fraction(rng.randrange(-5, 6)) for _ in range(n)] for _ in range(n)]
        m = Matrix(QQ, rows)
        assert m.det() == det_by_cofactors(m)


def test_polynomial_matrix_rank_and_det():
    ring = PolyRing(QQ, ("y1", "y2", "y3"))
    y1, y2, y3 = ring.gens()
    m = Matrix(ring, [[ring.one, ring.zero], [ring.zero, y1]])
    assert m.rank() == 2            # generic rank over the fraction field
    sing = Matrix(ring, [[y1, y2], [y2, y1]])
    assert sing.det() == y1 * y1 - y2 * y2
    assert sing.rank() == 2
    degenerate = Matrix(ring, [[y1, y2], [y1, y2]])
    assert degenerate.rank() == 1


def test_solve():
    m = qmat([[1, 1], [0, 1]])
    assert m.solve([Fraction(3), Fraction(1)]) == [Fraction(2), Fraction(1)]
    inconsistent = qmat([[1, 1], [1, 1]])
    assert inconsistent.solve([Fraction(0), Fraction(1)]) is None


def test_symmetry_check():
    assert qmat([[1, 2], [2, 3]]).is_symmetric()
    assert not qmat([[1, 2], [0, 3]]).is_symmetric()
