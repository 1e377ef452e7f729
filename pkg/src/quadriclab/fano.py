"""Fiberwise Fano schemes of lines: classification, charts, and an F_p oracle.

A fiber quadric is classified by corank: two disjoint conics of lines,
one doubled conic, two planes of lines through a common vertex, or a
doubled plane (rejected).  At corank 2 the two isotropic 3-spaces are
extracted exactly, over the ground field when the reduced discriminant
of the induced rank-2 form is a square and over a quadratic extension
otherwise.  The brute-force oracle enumerates every 2-subspace of F_p^4.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .family import AnalysisError, QuadricFamily, corank_at, kappa_at
from .fields import Field, PrimeField, QuadraticExtension, RationalField
from .linalg import Matrix
from . import kernels

PLUCKER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

CHART_IDS = ("12", "13", "14", "23", "24", "34")
_CHART_PIVOTS = {"12": (0, 1), "13": (0, 2), "14": (0, 3),
                 "23": (1, 2), "24": (1, 3), "34": (2, 3)}


def plucker_coordinates(field, row0, row1):
    """Six 2x2 minors of the 2x4 basis matrix, in the fixed pair order."""
    coords = []
    for i, j in PLUCKER_PAIRS:
        coords.append(field.sub(field.mul(row0[i], row1[j]), field.mul(row0[j], row1[i])))
    return coords


def plucker_relation_value(field, coords):
    """p12*p34 - p13*p24 + p14*p23; zero exactly on Gr(2,4)."""
    p12, p13, p14, p23, p24, p34 = coords
    return field.add(field.sub(field.mul(p12, p34), field.mul(p13, p24)),
                     field.mul(p14, p23))


@dataclass
class GrassmannChartSection:
    """Local equations of the line scheme on one chart of Gr(2,4).

    param_matrix has the identity in the pivot columns and the four chart
    coordinates b11, b12, b21, b22 in the complementary columns; smatrix is
    the symmetric 2x2 polynomial matrix of the quadratic form restricted to
    the parametrized plane, and its three independent entries cut out the
    line scheme on the chart.  The relative hyperplane class (the twist of
    the section) is trivialized on the chart and carried as metadata.
    """
    chart_id: str
    pivots: tuple
    ring: object
    param_matrix: Matrix
    smatrix: Matrix
    entries: tuple
    hyperplane_twist: int = -1  # the section is a form of weight one in the dual plane class


CHART_VARS = ("b11", "b12", "b21", "b22")


def chart_parametrization(ring, pivots):
    """2x4 matrix of the standard chart: identity at the pivot columns."""
    i, j = pivots
    free = [k for k in range(4) if k not in (i, j)]
    b = [[ring.var("b11"), ring.var("b12")], [ring.var("b21"), ring.var("b22")]]
    rows = [[ring.zero] * 4 for _ in range(2)]
    rows[0][i] = ring.one
    rows[1][j] = ring.one
    for col, k in enumerate(free):
        rows[0][k] = b[0][col]
        rows[1][k] = b[1][col]
    return Matrix(ring, rows)


def fiber_equations(fam_or_matrix, chart_id: str) -> GrassmannChartSection:
    """The 2x2 symmetric matrix M(B) A M(B)^T on a chart of Gr(2,4).

    Accepts a family (relative version, polynomial in base and chart
    variables) or a scalar 4x4 matrix over a field (single fiber).
    """
    if chart_id not in _CHART_PIVOTS:
        raise AnalysisError("bad_chart", "chart must be one of %s" % (CHART_IDS,))
    pivots = _CHART_PIVOTS[chart_id]
    if isinstance(fam_or_matrix, QuadricFamily):
        ring = fam_or_matrix.ring.extend(CHART_VARS)
        amat = fam_or_matrix.matrix.map_entries(ring.embed, ring=ring)
    else:
        from .poly import PolyRing
        base = fam_or_matrix.ring
        field = base if isinstance(base, Field) else base.field
        ring = PolyRing(field, CHART_VARS)
        amat = fam_or_matrix.map_entries(ring.const, ring=ring)
    m = chart_parametrization(ring, pivots)
    smat = m * amat * m.transpose()
    entries = (smat.rows[0][0], smat.rows[0][1], smat.rows[1][1])
    return GrassmannChartSection(chart_id=chart_id, pivots=pivots, ring=ring,
                                 param_matrix=m, smatrix=smat, entries=entries)


@dataclass
class FanoFiber:
    """Classification of the lines on one fiber quadric, with witnesses."""
    tag: str                      # TwoConics / DoubleConic / TwoPlanes
    corank: int
    field: Field
    disc: object = None           # det A for corank 0
    disc_is_square: Optional[bool] = None
    ruling_class: object = None   # square class deciding rationality of the rulings
    plane_field: Optional[Field] = None
    ext_d: object = None          # d with planes defined over k(sqrt(d)), None if rational
    w_plus: Optional[list] = None     # three spanning 4-vectors over plane_field
    w_minus: Optional[list] = None
    w_zero: Optional[list] = None     # kernel basis over the ground field
    vertex_plucker: Optional[list] = None


def _embed_vec(ext, vec):
    return [ext.from_base(c) for c in vec]


def classify_fiber(a_matrix: Matrix, field: Field = None) -> FanoFiber:
    """Classify the line scheme of a single quadric by corank, with witnesses."""
    field = field or a_matrix.ring
    kernel = a_matrix.kernel_basis()
    corank = len(kernel)
    if corank >= 3:
        raise AnalysisError("corank3_unsupported",
                            "corank %d fibers are out of scope" % corank)
    if corank == 0:
        disc = a_matrix.det()
        return FanoFiber(tag="TwoConics", corank=0, field=field, disc=disc,
                         disc_is_square=field.is_square(disc), ruling_class=disc)
    if corank == 1:
        return FanoFiber(tag="DoubleConic", corank=1, field=field)

    # corank 2: factor the induced nondegenerate binary form on V/K
    red, pivots = a_matrix.rref()
    v1 = [field.one if t == pivots[0] else field.zero for t in range(4)]
    v2 = [field.one if t == pivots[1] else field.zero for t in range(4)]

    def beta(u, w):
        total = field.zero
        for i in range(4):
            for j in range(4):
                total = field.add(total, field.mul(u[i], field.mul(a_matrix.rows[i][j], w[j])))
        return total

    a = beta(v1, v1)
    b = beta(v1, v2)
    c = beta(v2, v2)
    # q(x v1 + y v2) = a x^2 + 2b xy + c y^2; reduced discriminant b^2 - ac != 0
    delta = field.sub(field.mul(b, b), field.mul(a, c))
    if field.is_zero(delta):
        raise AnalysisError("degenerate_binary_form",
                            "induced form on V/K is not of rank 2")

    def combine(t, base_field):
        # the isotropic direction t*v1 + v2 as a 4-vector
        return [base_field.add(base_field.mul(t, x), y)
                for x, y in zip(v1e, v2e)]

    if field.is_square(delta):
        plane_field = field
        ext_d = None
        root = field.sqrt(delta)
        v1e, v2e = v1, v2
        ae, be = a, b
    else:
        if isinstance(field, RationalField):
            d = field.from_fraction(__import__("fractions").Fraction(field.squarefree_class(delta)))
            ext = QuadraticExtension(field, d)
            scale = field.sqrt(field.div(delta, d))
            root = ext.mul(ext.from_base(scale), ext.sqrt_d)
        else:
            ext = QuadraticExtension(field, delta)
            root = ext.sqrt_d
            d = delta
        plane_field = ext
        ext_d = d
        v1e = _embed_vec(ext, v1)
        v2e = _embed_vec(ext, v2)
        ae, be = ext.from_base(a), ext.from_base(b)

    pf = plane_field
    if pf.is_zero(ae):
        # a = 0 forces b != 0 and delta = b^2, a square: the form is
        # y(2bx + cy) with lines spanned by v1 and -c*v1 + 2b*v2
        u_plus_vec = v1e
        u_minus_vec = [pf.add(pf.mul(pf.neg(c), x), pf.mul(pf.from_int(2), pf.mul(be, y)))
                       for x, y in zip(v1e, v2e)]
    else:
        t_plus = pf.div(pf.add(pf.neg(be), root), ae)
        t_minus = pf.div(pf.sub(pf.neg(be), root), ae)
        u_plus_vec = combine(t_plus, pf)
        u_minus_vec = combine(t_minus, pf)

    kernel_ext = [_embed_vec(pf, v) if pf is not field else v for v in kernel]
    w_plus = kernel_ext + [u_plus_vec]
    w_minus = kernel_ext + [u_minus_vec]
    _assert_isotropic(pf, a_matrix, w_plus, field)
    _assert_isotropic(pf, a_matrix, w_minus, field)
    if Matrix(pf, w_plus + [u_minus_vec]).rank() != 4:
        raise AssertionError("the two extracted planes coincide")
    vertex = plucker_coordinates(field, kernel[0], kernel[1])
    if not field.is_zero(plucker_relation_value(field, vertex)):
        raise AssertionError("vertex does not satisfy the Plucker relation")
    return FanoFiber(tag="TwoPlanes", corank=2, field=field,
                     plane_field=pf, ext_d=ext_d,
                     w_plus=w_plus, w_minus=w_minus, w_zero=kernel,
                     vertex_plucker=vertex)


def _assert_isotropic(pf, a_matrix, basis, base_field):
    amat = [[pf.from_base(e) if pf is not base_field else e for e in row]
            for row in a_matrix.rows]
    for u in basis:
        for w in basis:
            total = pf.zero
            for i in range(4):
                for j in range(4):
                    total = pf.add(total, pf.mul(u[i], pf.mul(amat[i][j], w[j])))
            if not pf.is_zero(total):
                raise AssertionError("extracted plane is not isotropic")


def enumerate_lines_fp(a_matrix: Matrix, p: int):
    """All F_p-lines on the quadric of A: exact count plus Plucker points.

    Enumerates canonical echelon representatives of every 2-subspace of
    F_p^4 (deterministic order) and keeps the isotropic ones.  Capped at
    p <= 13 so the subspace count stays near 5*10^4.
    """
    if p % 2 == 0 or p > 13:
        raise AnalysisError("bad_oracle_prime", "oracle needs an odd prime p <= 13")
    field = a_matrix.ring
    if not isinstance(field, PrimeField) or field.p != p:
        raise AnalysisError("bad_oracle_field", "matrix must live over F_%d" % p)
    reps = kernels.line_representatives(p)
    amat = np.asarray([[int(e) % p for e in row] for row in a_matrix.rows], dtype=np.int64)
    mask = kernels.isotropic_plane_mask(reps, amat, p)
    points = []
    for rep in reps[mask]:
        row0 = [int(v) for v in rep[0]]
        row1 = [int(v) for v in rep[1]]
        coords = plucker_coordinates(field, row0, row1)
        if not field.is_zero(plucker_relation_value(field, coords)):
            raise AssertionError("enumerated line violates the Plucker relation")
        points.append(coords)
    return len(points), points


def expected_line_count(fiber: FanoFiber, p: int) -> int:
    """Point count predicted by the classification tag and rationality data.

    The table was populated once from the brute-force oracle on the
    canonical examples and is kept frozen as a regression contract:
      two rational conics        2(p+1)
      conjugate conics           0
      doubled conic              p+1
      two rational planes        2(p^2+p+1) - 1
      conjugate planes           1   (only the common vertex line)
    """
    if fiber.tag == "TwoConics":
        return 2 * (p + 1) if fiber.disc_is_square else 0
    if fiber.tag == "DoubleConic":
        return p + 1
    if fiber.tag == "TwoPlanes":
        return 2 * (p * p + p + 1) - 1 if fiber.ext_d is None else 1
    raise AnalysisError("bad_tag", fiber.tag)


def vertex_and_planes_report(fam: QuadricFamily, point, choose_plus: str = "+") -> dict:
    """Witness data at a corank-2 point: the planes, the vertex, and kappa.

    Which of the two planes is labelled Sigma^+ is a free input; pass
    choose_plus="-" to swap the labels.
    """
    corank, _ = corank_at(fam, point)
    if corank != 2:
        raise AnalysisError("wrong_corank", "expected corank 2, got %d" % corank)
    fiber = classify_fiber(fam.matrix_at(point), fam.field)
    pf = fiber.plane_field
    w_plus, w_minus = fiber.w_plus, fiber.w_minus
    if choose_plus == "-":
        w_plus, w_minus = w_minus, w_plus
    kappa = kappa_at(fam, point)
    return {
        "point": [fam.field.to_str(c) for c in point],
        "plane_field": getattr(pf, "name", "ground field"),
        "conjugate_over_ground_field": fiber.ext_d is not None,
        "ext_d": None if fiber.ext_d is None else fam.field.to_str(fiber.ext_d),
        "W_plus": [[pf.to_str(c) for c in v] for v in w_plus],
        "W_minus": [[pf.to_str(c) for c in v] for v in w_minus],
        "W_zero": [[fam.field.to_str(c) for c in v] for v in fiber.w_zero],
        "vertex_plucker": [fam.field.to_str(c) for c in fiber.vertex_plucker],
        "sigma_parametrization": "Gr(2, W): planes span(w1 + s*w3, w2 + t*w3) in the listed W basis",
        "kappa": kappa.to_strings(),
        "kappa_invertible": kappa.rank() == 3,
    }
