import json
from fractions import Fraction as F

import pytest

from quadriclab.family import (AnalysisError, FamilyValidationError, QuadricFamily,
                               SampleSpec, analyze_point, corank_at,
                               corank_locus_generators, discriminant, kappa_at,
                               m_smooth_at, odp_test, q_smooth_at, running_family,
                               split_running_family, stratify)
from quadriclab.fields import PrimeField, QQ
from quadriclab.linalg import Matrix
from quadriclab.poly import PolyRing

ORIGIN = [F(0), F(0), F(0)]


def diag_family(entries, field=QQ, base_dim=3):
    variables = ("y1", "y2", "y3")[:base_dim]
    ring = PolyRing(field, variables)
    rows = [["0"] * 4 for _ in range(4)]
    for i, e in enumerate(entries):
        rows[i][i] = e
    return QuadricFamily.from_strings(base_dim, field, variables, rows)


def test_corank_examples():
    fam = running_family()
    assert corank_at(fam, [F(1), F(0), F(1)])[0] == 0
    corank, kernel = corank_at(fam, [F(1), F(0), F(0)])
    assert corank == 1 and kernel == [[0, 0, 0, 1]]
    corank, kernel = corank_at(fam, ORIGIN)
    assert corank == 2 and kernel == [[0, 0, 1, 0], [0, 0, 0, 1]]


def test_discriminant_examples():
    fam = running_family()
    assert str(discriminant(fam)) == "y1*y3-y2^2"
    const = diag_family(["1", "1", "1", "1"])
    assert str(discriminant(const)) == "1"
    split = split_running_family()
    assert discriminant(split) == split.ring.parse("-1/4*(y1*y3 - y2^2)")


def test_corank_locus_generators():
    fam = running_family()
    r1 = corank_locus_generators(fam, 1)
    assert len(r1) == 1 and str(r1[0]) == "y1*y3-y2^2"
    r2 = corank_locus_generators(fam, 2)
    assert len(r2) == 10
    # common zero locus over F5 is exactly the origin
    f5 = PrimeField(5)
    fam5 = running_family(f5)
    gens5 = corank_locus_generators(fam5, 2)
    zeros = [(a, b, c) for a in range(5) for b in range(5) for c in range(5)
             if all(f5.is_zero(g.evaluate((a, b, c))) for g in gens5)]
    assert zeros == [(0, 0, 0)]
    const = diag_family(["1", "1", "1", "1"])
    assert any(str(g) == "1" for g in corank_locus_generators(const, 2))


def test_kappa_examples():
    fam = running_family()
    kap = kappa_at(fam, ORIGIN)
    assert kap.rows == [[F(1), F(0), F(0)], [F(0), F(2), F(0)], [F(0), F(0), F(1)]]
    assert kap.rank() == 3
    cubic = diag_family(["1", "1", "1", "y1^3"], base_dim=1)
    kap0 = kappa_at(cubic, [F(0)])
    assert kap0.rows == [[F(0)]]
    linear = diag_family(["1", "1", "1", "y1"], base_dim=1)
    assert kappa_at(linear, [F(0)]).rows == [[F(1)]]
    with pytest.raises(AnalysisError) as err:
        kappa_at(fam, [F(1), F(0), F(1)])
    assert err.value.code == "kappa_undefined"


def test_q_smooth_examples():
    fam = running_family()
    assert q_smooth_at(fam, ORIGIN) is True
    assert q_smooth_at(fam, [F(1), F(0), F(1)]) is True
    square = diag_family(["1", "1", "1", "y1^2"], base_dim=1)
    assert q_smooth_at(square, [F(0)]) is False


def test_m_smooth_examples():
    fam = running_family()
    assert m_smooth_at(fam, ORIGIN) is True
    assert m_smooth_at(fam, [F(2), F(1), F(1)]) is True
    thin = QuadricFamily.from_strings(
        3, QQ, ("y1", "y2", "y3"),
        [["1", "0", "0", "0"], ["0", "1", "0", "0"],
         ["0", "0", "y1", "0"], ["0", "0", "0", "y1"]])
    assert m_smooth_at(thin, ORIGIN) is False


def test_corank3_rejected():
    fam = diag_family(["1", "y1", "y2", "y3"])
    with pytest.raises(AnalysisError) as err:
        q_smooth_at(fam, ORIGIN)
    assert err.value.code == "corank3_unsupported"


def test_odp_examples():
    fam = running_family()
    assert odp_test(fam, ORIGIN) is True
    cusp = diag_family(["1", "1", "y1", "y1^2"])
    assert corank_at(cusp, ORIGIN)[0] == 2
    assert odp_test(cusp, ORIGIN) is False
    with pytest.raises(AnalysisError) as err:
        odp_test(fam, [F(1), F(0), F(0)])
    assert err.value.code == "wrong_corank"


def test_odp_agrees_with_kappa_invertibility():
    # where the quadric family total space is smooth at a corank-2 point,
    # the node test and the invertibility of kappa must agree
    fam = running_family()
    assert odp_test(fam, ORIGIN) == (kappa_at(fam, ORIGIN).rank() == 3)


def test_kappa_independent_of_kernel_basis_choice():
    fam = running_family()
    kap = kappa_at(fam, ORIGIN)
    # permuting the kernel basis (k1, k2) -> (k2, k1) permutes the monomial
    # basis u1^2, u1u2, u2^2 -> u2^2, u2u1, u1^2; conjugating reproduces kappa
    permuted = Matrix(QQ, [[r[2], r[1], r[0]] for r in kap.rows])
    swapped_family = QuadricFamily.from_strings(
        3, QQ, ("y1", "y2", "y3"),
        [["1", "0", "0", "0"], ["0", "1", "0", "0"],
         ["0", "0", "y3", "y2"], ["0", "0", "y2", "y1"]])
    kap2 = kappa_at(swapped_family, ORIGIN)
    assert kap2.rows == [[F(0), F(0), F(1)], [F(0), F(2), F(0)], [F(1), F(0), F(0)]]
    assert permuted.rank() == kap.rank()


def test_validation_errors():
    with pytest.raises(FamilyValidationError) as err:
        QuadricFamily.from_strings(
            3, QQ, ("y1", "y2", "y3"),
            [["1", "2", "0", "0"], ["0", "1", "0", "0"],
             ["0", "0", "1", "0"], ["0", "0", "0", "1"]])
    assert "(1,2)" in str(err.value)
    with pytest.raises(FamilyValidationError):
        QuadricFamily.from_strings(3, QQ, ("y1", "y2", "y3"), [["0"] * 4] * 4)
    with pytest.raises(FamilyValidationError):
        QuadricFamily.from_strings(0, QQ, (), [["1", "0", "0", "0"]] * 4)


def test_json_round_trip(tmp_path):
    fam = running_family()
    path = tmp_path / "family.json"
    fam.save(path)
    loaded = QuadricFamily.load(path)
    assert loaded.matrix == fam.matrix
    assert loaded.label == fam.label
    data = json.loads(path.read_text())
    assert data["field"] == "Q"


def test_stratify_explicit_points():
    # (1,1,1) lies on the discriminant (1*1 - 1^2 = 0), so a genuine
    # corank-0 representative is (1,0,1)
    fam = running_family()
    spec = SampleSpec.explicit([ORIGIN, [F(1), F(0), F(0)], [F(1), F(0), F(1)]])
    report = stratify(fam, spec)
    coranks = [p["corank"] for p in report.points]
    assert coranks == [2, 1, 0]
    assert report.points[0]["odp"] is True
    assert report.points[0]["m_smooth"] is True


def test_stratify_constant_family_all_corank0():
    const = diag_family(["1", "1", "1", "1"])
    report = stratify(const, SampleSpec.explicit([ORIGIN, [F(2), F(3), F(4)]]))
    assert all(p["corank"] == 0 for p in report.points)


def test_stratify_full_grid_over_f5():
    fam = split_running_family(PrimeField(5))
    report = stratify(fam, SampleSpec.grid())
    assert len(report.points) == 125
    corank2 = [p for p in report.points if p["corank"] == 2]
    assert len(corank2) == 1
    assert corank2[0]["point"] == ["0", "0", "0"]


def test_analyze_point_fields():
    fam = running_family()
    pa = analyze_point(fam, ORIGIN)
    assert pa.corank == 2 and pa.q_smooth and pa.m_smooth and pa.odp
    assert pa.kappa is not None and len(pa.kernel) == 2
