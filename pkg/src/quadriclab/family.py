"""Families of quadric surfaces over an affine base chart.

A family is a symmetric 4x4 matrix A(y) of polynomials in the base
coordinates; the fiber over y is the quadric {v : v^T A(y) v = 0} in P^3.
This module provides the corank stratification, the discriminant, the
second-order data kappa at degenerate points, and the smoothness and
ordinary-double-point tests for the total spaces of the quadric family
and of its relative Fano scheme of lines.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from itertools import combinations, product
from typing import Optional

from .fields import Field, QQ, field_from_descriptor, field_descriptor
from .linalg import Matrix
from .poly import PolyRing


class AnalysisError(ValueError):
    """Structured error with a stable machine-readable code."""

    def __init__(self, code, message=None):
        super().__init__(message or code)
        self.code = code


class FamilyValidationError(ValueError):
    pass


class QuadricFamily:
    """Symmetric 4x4 polynomial matrix over k[y1..yn] plus bookkeeping.

    The rank-4 bundle and the twisting line bundle are trivialized on the
    chart; q(v) = v^T A(y) v.
    """

    def __init__(self, base_dim: int, field: Field, variables, matrix: Matrix, label: str = ""):
        if base_dim < 1:
            raise FamilyValidationError("base_dim must be >= 1")
        if len(variables) != base_dim:
            raise FamilyValidationError("expected %d variables, got %d" % (base_dim, len(variables)))
        if matrix.nrows != 4 or matrix.ncols != 4:
            raise FamilyValidationError("matrix must be 4x4")
        if not isinstance(matrix.ring, PolyRing) or matrix.ring.field != field:
            raise FamilyValidationError("matrix ring does not match the declared field")
        bad = [(i + 1, j + 1) for i in range(4) for j in range(i + 1, 4)
               if not matrix.ring.eq(matrix.rows[i][j], matrix.rows[j][i])]
        if bad:
            raise FamilyValidationError(
                "matrix is not symmetric at entries %s" %
                ", ".join("(%d,%d)/(%d,%d)" % (i, j, j, i) for i, j in bad))
        if matrix.is_zero():
            raise FamilyValidationError("zero matrix does not define a quadric family")
        self.base_dim = base_dim
        self.field = field
        self.variables = tuple(variables)
        self.ring = matrix.ring
        self.matrix = matrix
        self.label = label

    @classmethod
    def from_strings(cls, base_dim, field, variables, entries, label=""):
        ring = PolyRing(field, variables)
        rows = [[ring.parse(e) for e in row] for row in entries]
        return cls(base_dim, field, variables, Matrix(ring, rows), label=label)

    @classmethod
    def from_json_dict(cls, data: dict) -> "QuadricFamily":
        for key in ("base_dim", "field", "variables", "matrix"):
            if key not in data:
                raise FamilyValidationError("family file is missing %r" % key)
        field = field_from_descriptor(data["field"])
        return cls.from_strings(int(data["base_dim"]), field, data["variables"],
                                data["matrix"], label=data.get("label", ""))

    @classmethod
    def load(cls, path) -> "QuadricFamily":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "base_dim": self.base_dim,
            "field": field_descriptor(self.field),
            "variables": list(self.variables),
            "matrix": self.matrix.to_strings(),
        }

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def matrix_at(self, point) -> Matrix:
        if len(point) != self.base_dim:
            raise AnalysisError("bad_point", "expected %d coordinates" % self.base_dim)
        return self.matrix.evaluate(point)

    def __repr__(self):
        return "QuadricFamily(%r, dim %d over %r)" % (self.label, self.base_dim, self.field)


def running_family(field: Field = QQ) -> QuadricFamily:
    """diag(1,1) + [[y1,y2],[y2,y3]] block family; the standard worked example."""
    return QuadricFamily.from_strings(
        3, field, ("y1", "y2", "y3"),
        [["1", "0", "0", "0"],
         ["0", "1", "0", "0"],
         ["0", "0", "y1", "y2"],
         ["0", "0", "y2", "y3"]],
        label="running")


def split_running_family(field: Field = QQ) -> QuadricFamily:
    """Variant with a split hyperbolic 2x2 block in place of diag(1,1)."""
    return QuadricFamily.from_strings(
        3, field, ("y1", "y2", "y3"),
        [["0", "1/2", "0", "0"],
         ["1/2", "0", "0", "0"],
         ["0", "0", "y1", "y2"],
         ["0", "0", "y2", "y3"]],
        label="split-running")


@dataclass
class PointAnalysis:
    point: tuple
    corank: int
    kernel: list            # corank many 4-vectors over the field
    kappa: Optional[Matrix]  # n x r(r+1)/2 over the field, None at corank 0
    q_smooth: Optional[bool]
    m_smooth: Optional[bool]
    odp: Optional[bool]      # None where not applicable


def corank_at(fam: QuadricFamily, point):
    """(corank, kernel basis) of the fiber quadric at a base point."""
    m = fam.matrix_at(point)
    kernel = m.kernel_basis()
    return len(kernel), kernel


def discriminant(fam: QuadricFamily):
    """det A(y); its vanishing locus is the degeneration divisor."""
    return fam.matrix.det()


def corank_locus_generators(fam: QuadricFamily, r: int):
    """All (5-r) x (5-r) minors with row set <= column set; they cut out corank >= r.

    By symmetry of A the minors with transposed index pair coincide, so the
    row set <= column set half generates the same zero locus (10 cubics for
    r = 2 on a 4x4 matrix).
    """
    if r < 1 or r > 4:
        raise AnalysisError("bad_corank", "r must be in 1..4")
    size = 5 - r
    minors = []
    subsets = list(combinations(range(4), size))
    for rows_idx in subsets:
        for cols_idx in subsets:
            if cols_idx < rows_idx:
                continue
            sub = Matrix(fam.ring, [[fam.matrix.rows[i][j] for j in cols_idx] for i in rows_idx])
            minors.append(sub.det())
    return minors


def _sym2_index_pairs(r):
    return [(i, j) for i in range(r) for j in range(i, r)]


def kappa_at(fam: QuadricFamily, point) -> Matrix:
    """Matrix of the second-order map at a degenerate point.

    Rows are the coordinate tangent directions d/dy_i; columns are the
    monomials u_i u_j (i <= j) on the kernel, built from the deterministic
    kernel basis.  The off-diagonal coefficients carry the polar factor 2:
    the direction v maps to the quadratic form u -> u^T (D_v A)(pt) u on
    the kernel.
    """
    corank, kernel = corank_at(fam, point)
    if corank == 0:
        raise AnalysisError("kappa_undefined", "kappa is undefined at a corank-0 point")
    f = fam.field
    partials = [fam.matrix.map_entries(lambda p, v=v: p.partial(v)).evaluate(point)
                for v in range(fam.base_dim)]
    pairs = _sym2_index_pairs(corank)
    rows = []
    for dmat in partials:
        row = []
        for (i, j) in pairs:
            ui, uj = kernel[i], kernel[j]
            val = f.zero
            for a in range(4):
                for b in range(4):
                    val = f.add(val, f.mul(ui[a], f.mul(dmat.rows[a][b], uj[b])))
            if i != j:
                val = f.mul(f.from_int(2), val)
            row.append(val)
        rows.append(row)
    return Matrix(f, rows)


def _binary_form_resultant(field, f, g):
    """Homogeneous resultant of two binary quadratic forms (coefficient triples).

    4x4 Sylvester determinant; zero iff the forms share a projective root
    over the algebraic closure (or one of them is identically zero).
    """
    a, b, c = f
    d, e, h = g
    z = field.zero
    syl = Matrix(field, [
        [a, b, c, z],
        [z, a, b, c],
        [d, e, h, z],
        [z, d, e, h],
    ])
    return syl.det()


def q_smooth_at(fam: QuadricFamily, point) -> bool:
    """Smoothness of the total space of the quadric family above this point.

    corank 0: nothing to check.  corank 1: kappa must be nonzero.  corank 2:
    the image of kappa, a net of binary quadratic forms on the kernel, must
    have no common projective zero over the algebraic closure; decided by
    image dimension and, in the 2-dimensional case, a resultant.
    """
    corank, _ = corank_at(fam, point)
    if corank == 0:
        return True
    if corank >= 3:
        raise AnalysisError("corank3_unsupported")
    kappa = kappa_at(fam, point)
    if corank == 1:
        return not all(fam.field.is_zero(row[0]) for row in kappa.rows)
    # corank 2: the rows span a subspace of the 3-space of binary quadratics
    red, pivots = kappa.rref()
    dim = len(pivots)
    if dim == 3:
        return True
    if dim <= 1:
        # a single binary quadratic always has a root over the closure
        return False
    f = tuple(red.rows[0])
    g = tuple(red.rows[1])
    res = _binary_form_resultant(fam.field, f, g)
    return not fam.field.is_zero(res)


def m_smooth_at(fam: QuadricFamily, point) -> bool:
    """Smoothness of the relative Fano scheme of lines above this point.

    Coincides with q_smooth_at away from corank 2; at corank 2 additionally
    requires kappa to be surjective onto the 3-space of forms on the kernel.
    """
    corank, _ = corank_at(fam, point)
    if corank >= 3:
        raise AnalysisError("corank3_unsupported")
    if not q_smooth_at(fam, point):
        return False
    if corank < 2:
        return True
    return kappa_at(fam, point).rank() == 3


def hessian(poly, ring):
    n = ring.nvars
    return Matrix(ring, [[poly.partial(i).partial(j) for j in range(n)] for i in range(n)])


def odp_test(fam: QuadricFamily, point) -> bool:
    """Ordinary-double-point test for the discriminant surface at a corank-2 point.

    Requires base dimension 3.  Checks that the gradient of det A vanishes
    at the point (it must, at corank 2) and that the Hessian there has
    rank 3.
    """
    if fam.base_dim != 3:
        raise AnalysisError("bad_base_dim", "odp_test needs a 3-dimensional base")
    corank, _ = corank_at(fam, point)
    if corank != 2:
        raise AnalysisError("wrong_corank", "odp_test needs corank exactly 2, got %d" % corank)
    det = discriminant(fam)
    f = fam.field
    grad = [det.partial(i).evaluate(point) for i in range(fam.base_dim)]
    if any(not f.is_zero(g) for g in grad):
        raise AnalysisError("not_singular_on_D1", "gradient of det A does not vanish here")
    hess = hessian(det, fam.ring).evaluate(point)
    return hess.rank() == 3


def analyze_point(fam: QuadricFamily, point) -> PointAnalysis:
    corank, kernel = corank_at(fam, point)
    kappa = None
    q_sm = m_sm = odp = None
    if corank <= 2:
        q_sm = q_smooth_at(fam, point)
        m_sm = m_smooth_at(fam, point)
        if corank >= 1:
            kappa = kappa_at(fam, point)
        if corank == 2 and fam.base_dim == 3:
            try:
                odp = odp_test(fam, point)
            except AnalysisError:
                odp = False
    return PointAnalysis(tuple(point), corank, kernel, kappa, q_sm, m_sm, odp)


# --- sampling -----------------------------------------------------------


@dataclass
class SampleSpec:
    """Explicit points, a full grid, or a seeded random sample.

    kind = "points": use `points` as given.
    kind = "grid":   integer grid {0..size-1}^n mapped into the field
                     (over F_p, size defaults to p, i.e. the full grid).
    kind = "random": `count` points drawn from a seeded generator;
                     uniform over F_p, small integers over Q.
    """
    kind: str
    points: list = dc_field(default_factory=list)
    size: int = 0
    seed: int = 0
    count: int = 0

    @classmethod
    def explicit(cls, points):
        return cls(kind="points", points=list(points))

    @classmethod
    def grid(cls, size=0):
        return cls(kind="grid", size=size)

    @classmethod
    def random(cls, seed, count):
        return cls(kind="random", seed=seed, count=count)


def sample_points(fam: QuadricFamily, spec: SampleSpec):
    import random
    f = fam.field
    n = fam.base_dim
    if spec.kind == "points":
        return [tuple(pt) for pt in spec.points]
    if spec.kind == "grid":
        size = spec.size
        if size <= 0:
            if f.characteristic:
                size = f.characteristic
            else:
                raise AnalysisError("bad_sample", "grid over Q needs an explicit size")
        values = [f.from_int(v) for v in range(size)]
        return [pt for pt in product(values, repeat=n)]
    if spec.kind == "random":
        rng = random.Random(spec.seed)
        pts = []
        for _ in range(spec.count):
            if f.characteristic:
                pts.append(tuple(f.from_int(rng.randrange(f.characteristic)) for _ in range(n)))
            else:
                pts.append(tuple(f.from_int(rng.randrange(-9, 10)) for _ in range(n)))
        return pts
    raise AnalysisError("bad_sample", "unknown sample kind %r" % spec.kind)


@dataclass
class StratificationReport:
    family_label: str
    discriminant: str
    corank2_generators: list
    points: list  # list of dicts, one per sampled point, in sample order
    seed: Optional[int] = None

    def to_json_dict(self):
        return {
            "family_label": self.family_label,
            "discriminant": self.discriminant,
            "corank2_generators": self.corank2_generators,
            "seed": self.seed,
            "points": self.points,
        }


def stratify(fam: QuadricFamily, spec: SampleSpec) -> StratificationReport:
    """Corank and smoothness flags for every sampled point, in sample order.

    Over F_p grid samples, coranks are bulk-computed by the finite-field
    kernel first; only degenerate points get the full exact analysis.
    """
    pts = sample_points(fam, spec)
    f = fam.field
    precomputed = None
    if spec.kind == "grid" and f.characteristic and fam.base_dim >= 1:
        from . import kernels
        try:
            precomputed = kernels.grid_coranks(fam, pts)
        except kernels.KernelUnavailable:
            precomputed = None
    entries = []
    for idx, pt in enumerate(pts):
        if precomputed is not None and precomputed[idx] == 0:
            entries.append({
                "point": [f.to_str(c) for c in pt],
                "corank": 0,
                "kernel": [],
                "q_smooth": True,
                "m_smooth": True,
                "odp": None,
            })
            continue
        pa = analyze_point(fam, pt)
        if precomputed is not None and precomputed[idx] != pa.corank:
            raise AssertionError("finite-field kernel corank disagrees with exact corank at %r" % (pt,))
        entries.append({
            "point": [f.to_str(c) for c in pt],
            "corank": pa.corank,
            "kernel": [[f.to_str(c) for c in vec] for vec in pa.kernel],
            "q_smooth": pa.q_smooth,
            "m_smooth": pa.m_smooth,
            "odp": pa.odp,
        })
    return StratificationReport(
        family_label=fam.label,
        discriminant=str(discriminant(fam)),
        corank2_generators=[str(g) for g in corank_locus_generators(fam, 2)],
        points=entries,
        seed=spec.seed if spec.kind == "random" else None,
    )
