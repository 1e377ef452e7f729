from fractions import Fraction as F

import pytest

from quadriclab.family import AnalysisError, running_family, split_running_family
from quadriclab.fano import (CHART_IDS, classify_fiber, enumerate_lines_fp,
                             expected_line_count, fiber_equations,
                             plucker_coordinates, plucker_relation_value,
                             vertex_and_planes_report)
from quadriclab.fields import PrimeField, QQ, QuadraticExtension
from quadriclab.linalg import Matrix


def qmat(rows):
    return Matrix(QQ, [[F(v) for v in r] for r in rows])


def fpmat(field, rows):
    return Matrix(field, [[field.from_int(v) for v in r] for r in rows])


def test_classify_split_two_planes():
    # q = x1*x2: planes x1 = 0 and x2 = 0 meeting along span(e3, e4)
    amat = qmat([[0, F(1, 2), 0, 0], [F(1, 2), 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    fiber = classify_fiber(amat)
    assert fiber.tag == "TwoPlanes" and fiber.ext_d is None
    assert fiber.w_zero == [[0, 0, 1, 0], [0, 0, 0, 1]]
    assert fiber.vertex_plucker == [0, 0, 0, 0, 0, 1]
    spans = {tuple(fiber.w_plus[2]), tuple(fiber.w_minus[2])}
    # the extra directions are e1 and e2 up to scale
    normalized = set()
    for v in spans:
        nz = [x for x in v if x != 0]
        normalized.add(tuple(x / nz[0] for x in v))
    assert normalized == {(1, 0, 0, 0), (0, 1, 0, 0)}


def test_classify_conjugate_planes_over_gaussian_extension():
    amat = qmat([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    fiber = classify_fiber(amat)
    assert fiber.tag == "TwoPlanes"
    assert fiber.ext_d == F(-1)
    assert isinstance(fiber.plane_field, QuadraticExtension)


def test_classify_cone_and_smooth():
    assert classify_fiber(qmat([[1, 0, 0, 0], [0, 1, 0, 0],
                                [0, 0, 1, 0], [0, 0, 0, 0]])).tag == "DoubleConic"
    fiber = classify_fiber(qmat([[1, 0, 0, 0], [0, 1, 0, 0],
                                 [0, 0, 1, 0], [0, 0, 0, 1]]))
    assert fiber.tag == "TwoConics" and fiber.disc_is_square


def test_classify_corank3_rejected():
    with pytest.raises(AnalysisError) as err:
        classify_fiber(qmat([[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]))
    assert err.value.code == "corank3_unsupported"


def test_fiber_equations_identity_chart():
    amat = qmat([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    section = fiber_equations(amat, "12")
    ring = section.ring
    assert section.entries[0] == ring.parse("1 + b11^2 + b12^2")
    assert section.entries[1] == ring.parse("b11*b21 + b12*b22")
    assert section.entries[2] == ring.parse("1 + b21^2 + b22^2")


def test_fiber_equations_vanish_on_plane_inside_w():
    # q = x1*x2 on the chart whose rows are e3 + *, e4 + *: planes inside
    # {x1 = 0} have rows with zero first coordinate, so entries vanish
    amat = qmat([[0, F(1, 2), 0, 0], [F(1, 2), 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    section = fiber_equations(amat, "34")
    subs = {"b11": F(0), "b21": F(0)}  # first free column is x1
    for entry in section.entries:
        assert entry.substitute(subs).is_zero()


def test_fiber_equations_relative():
    fam = running_family()
    section = fiber_equations(fam, "12")
    assert section.ring.nvars == 7
    assert not section.smatrix.rows[0][0].is_zero()


def test_jacobian_rank_at_smooth_fiber_point():
    # the line scheme of one smooth quadric has codimension 3 in the chart:
    # the Jacobian of the three equations at a solution has rank 3
    f5 = PrimeField(5)
    amat = fpmat(f5, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    section = fiber_equations(amat, "13")
    # U = span((1,2,0,0), (0,0,1,2)) is isotropic: chart 13 values b=(2,0,0,2)
    point = (f5.from_int(2), f5.from_int(0), f5.from_int(0), f5.from_int(2))
    for entry in section.entries:
        assert f5.is_zero(entry.evaluate(point))
    rows = [[entry.partial(v).evaluate(point) for v in range(4)]
            for entry in section.entries]
    assert Matrix(f5, rows).rank() == 3


def test_enumeration_counts_frozen():
    f5 = PrimeField(5)
    amat = fpmat(f5, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    count, points = enumerate_lines_fp(amat, 5)
    assert count == 12 == expected_line_count(classify_fiber(amat), 5)
    for coords in points:
        assert f5.is_zero(plucker_relation_value(f5, coords))

    f3 = PrimeField(3)
    half = f3.inv(2)
    split = Matrix(f3, [[0, half, 0, 0], [half, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    count, _ = enumerate_lines_fp(split, 3)
    assert count == 25 == expected_line_count(classify_fiber(split), 3)

    cone = fpmat(f3, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]])
    count, _ = enumerate_lines_fp(cone, 3)
    assert count == 4 == expected_line_count(classify_fiber(cone), 3)

    # elliptic: nonsquare discriminant, no rational lines
    d = next(v for v in range(2, 5) if not f5.is_square(v))
    ell = fpmat(f5, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, d]])
    count, _ = enumerate_lines_fp(ell, 5)
    assert count == 0 == expected_line_count(classify_fiber(ell), 5)

    # conjugate planes: only the vertex line is rational
    pair = fpmat(f3, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    count, points = enumerate_lines_fp(pair, 3)
    assert count == 1 == expected_line_count(classify_fiber(pair), 3)
    assert points[0] == [0, 0, 0, 0, 0, 1]


def test_enumeration_guardrails():
    f17 = PrimeField(17)
    amat = fpmat(f17, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    with pytest.raises(AnalysisError):
        enumerate_lines_fp(amat, 17)


def test_plucker_relation_on_random_planes():
    import random
    rng = random.Random(2)
    f7 = PrimeField(7)
    for _ in range(50):
        rows = [[rng.randrange(7) for _ in range(4)] for _ in range(2)]
        m = Matrix(f7, rows)
        if m.rank() != 2:
            continue
        coords = plucker_coordinates(f7, rows[0], rows[1])
        assert f7.is_zero(plucker_relation_value(f7, coords))


def test_vertex_and_planes_report():
    fam = split_running_family()
    rep = vertex_and_planes_report(fam, [F(0)] * 3)
    assert rep["conjugate_over_ground_field"] is False
    assert rep["kappa_invertible"] is True
    assert rep["vertex_plucker"] == ["0", "0", "0", "0", "0", "1"]
    swapped = vertex_and_planes_report(fam, [F(0)] * 3, choose_plus="-")
    assert swapped["W_plus"] == rep["W_minus"]

    conj = vertex_and_planes_report(running_family(), [F(0)] * 3)
    assert conj["conjugate_over_ground_field"] is True
    assert conj["ext_d"] == "-1"

    with pytest.raises(AnalysisError) as err:
        vertex_and_planes_report(fam, [F(1), F(0), F(0)])
    assert err.value.code == "wrong_corank"


def test_chart_ids_cover_gr24():
    assert len(CHART_IDS) == 6
    fam = running_family()
    for chart in CHART_IDS:
        section = fiber_equations(fam, chart)
        assert len(section.entries) == 3
