"""The full invariant suite behind the verify command.

Each check returns a dict with a stable id, a passed flag, and enough
witness data to debug a failure.  Checks are independent; they may run
concurrently (QUADRICLAB_THREADS caps the fan-out) and are assembled in
sorted id order so reports are deterministic.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor

from .cliffordalg import (EvenCliffordAlgebra, OddCliffordModule, center,
                          verify_periodicity, verify_periodicity_generic, CliffordError)
from .cohomology import (adjunction_checks, bplus_restriction_type, canonical_class,
                         exceptionality_table, f1_riemann_roch_holds, lb_cohomology,
                         serre_duality_holds)
from .complexes import build_clifford_resolution, build_koszul, certify_complex, \
    resolution_filtration_ok, sample_chart_points
from .family import QuadricFamily, corank_at, discriminant
from .fields import PrimeField
from .fano import classify_fiber, enumerate_lines_fp, expected_line_count
from .linalg import Matrix
from .pushforward import pushforward_rank_proxy


def _random_symmetric(field, rng):
    rows = [[field.zero] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(i, 4):
            if field.characteristic:
                v = field.from_int(rng.randrange(field.characteristic))
            else:
                v = field.from_int(rng.randrange(-4, 5))
            rows[i][j] = v
            rows[j][i] = v
    return Matrix(field, rows)


def check_clifford_associativity(fam: QuadricFamily, seed: int, corrupt=None) -> dict:
    """Associativity over the family ring and on random specializations.

    corrupt="asymmetric" is a test hook that deliberately feeds a
    non-symmetric matrix to the construction to confirm the check trips.
    """
    matrix = fam.matrix
    if corrupt == "asymmetric":
        rows = [list(r) for r in matrix.rows]
        rows[0][1] = rows[0][1] + fam.ring.one
        matrix = Matrix(fam.ring, rows)
    alg = EvenCliffordAlgebra(fam.ring, matrix, check=False, allow_asymmetric=True)
    witness = alg.associativity_witness()
    failures = []
    if witness is not None:
        failures.append({"where": "family ring", "triple": witness})
    rng = random.Random(seed)
    for trial in range(10):
        a_rand = _random_symmetric(fam.field, rng)
        w = EvenCliffordAlgebra(fam.field, a_rand, check=False).associativity_witness()
        if w is not None:
            failures.append({"where": "specialization %d" % trial, "triple": w})
    return {
        "id": "clifford_associativity",
        "passed": not failures,
        "witnesses": failures,
        "triples_checked": 512 * 11,
    }


def check_center(fam: QuadricFamily) -> dict:
    alg = EvenCliffordAlgebra(fam.ring, fam.matrix, check=False)
    cd = center(alg)
    det = discriminant(fam)
    return {
        "id": "clifford_center",
        "passed": cd.is_central and cd.matches_det and cd.unit_factor == 1,
        "z_central": cd.is_central,
        "z_square_equals_det": cd.matches_det,
        "unit_factor": cd.unit_factor,
        "det": str(det),
    }


def check_periodicity(fam: QuadricFamily, seed: int, specializations: int = 10) -> dict:
    generic = verify_periodicity_generic(fam)
    results = [("generic", generic.balanced_dim, generic.mult_is_isomorphism)]
    rng = random.Random(seed)
    found = 0
    guard = 0
    points = []
    while found < specializations and guard < 200 * specializations:
        guard += 1
        if fam.field.characteristic:
            pt = tuple(fam.field.from_int(rng.randrange(fam.field.characteristic))
                       for _ in range(fam.base_dim))
        else:
            pt = tuple(fam.field.from_int(rng.randrange(-6, 7)) for _ in range(fam.base_dim))
        if fam.field.is_zero(fam.matrix_at(pt).det()):
            continue
        res = verify_periodicity(fam, pt)
        results.append((pt, res.balanced_dim, res.mult_is_isomorphism and res.hom_dim == 8))
        points.append(pt)
        found += 1
    passed = all(dim == 8 and ok for _, dim, ok in results) and found == specializations
    return {
        "id": "clifford_periodicity",
        "passed": passed,
        "generic_balanced_dim": generic.balanced_dim,
        "generic_is_isomorphism": generic.mult_is_isomorphism,
        "specializations": found,
        "failures": [str(r) for r in results if not (r[1] == 8 and r[2])],
    }


def check_koszul(fam: QuadricFamily, seed: int, chart: str = "12", points: int = 25) -> dict:
    cx = build_koszul(fam, chart)
    on_pts, off_pts = sample_chart_points(fam, chart, seed, points, points)
    cert = certify_complex(cx, fam, chart, on_pts, off_pts, expected_coker_dim=1)
    return {
        "id": "koszul_certification",
        "passed": cert.passed and cx.ranks == [1, 3, 3, 1],
        "ranks": cx.ranks,
        "dd_zero": cert.dd_zero,
        "generic_map_ranks": cert.generic_map_ranks,
        "points_on": len(on_pts),
        "points_off": len(off_pts),
        "off_all_exact": cert.all_off_points_exact,
        "on_last_spot_dims": sorted({r["last_spot_dim"] for r in cert.on_point_reports}),
    }


def check_clifford_resolutions(fam: QuadricFamily, seed: int, chart: str = "12",
                               points: int = 25) -> dict:
    on_pts, off_pts = sample_chart_points(fam, chart, seed, points, points)
    sub = []
    passed = True
    for k in range(4):
        cx = build_clifford_resolution(fam, chart, k)
        cert = certify_complex(cx, fam, chart, on_pts, off_pts, expected_coker_dim=2)
        ok = cert.passed and cx.ranks == [8, 16, 16, 8] and resolution_filtration_ok(cx, k)
        passed = passed and ok
        sub.append({
            "k": k,
            "passed": ok,
            "dd_zero": cert.dd_zero,
            "generic_map_ranks": cert.generic_map_ranks,
            "off_all_exact": cert.all_off_points_exact,
            "on_last_spot_dims": sorted({r["last_spot_dim"] for r in cert.on_point_reports}),
            "filtration_blocks": resolution_filtration_ok(cx, k),
        })
    return {
        "id": "clifford_resolution_certification",
        "passed": passed,
        "per_twist": sub,
        "points_on": len(on_pts),
        "points_off": len(off_pts),
    }


def check_fano_oracle(fam: QuadricFamily, seed: int, matrices: int = 50) -> dict:
    """Classification against brute-force line counts over F_3 and F_5."""
    rng = random.Random(seed)
    failures = []
    checked = 0
    canonical = []
    for p in (3, 5):
        field = PrimeField(p)
        eye = Matrix(field, [[1 if i == j else 0 for j in range(4)] for i in range(4)])
        half = field.inv(2)
        split = Matrix(field, [[0, half, 0, 0], [half, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
        cone = Matrix(field, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]])
        canonical.extend([(p, eye), (p, split), (p, cone)])
    jobs = list(canonical)
    while len(jobs) < matrices + len(canonical):
        p = (3, 5)[rng.randrange(2)]
        field = PrimeField(p)
        amat = _random_symmetric(field, rng)
        jobs.append((p, amat))
    from .family import AnalysisError
    for p, amat in jobs:
        field = amat.ring
        try:
            fiber = classify_fiber(amat)
        except AnalysisError:
            continue  # corank >= 3 samples are out of scope
        count, points = enumerate_lines_fp(amat, p)
        expected = expected_line_count(fiber, p)
        checked += 1
        if count != expected:
            failures.append({"p": p, "matrix": amat.to_strings(),
                             "tag": fiber.tag, "count": count, "expected": expected})
        if fiber.tag == "TwoPlanes" and fiber.ext_d is None:
            if not _lines_lie_on_planes(field, fiber, points):
                failures.append({"p": p, "matrix": amat.to_strings(),
                                 "tag": fiber.tag, "reason": "line outside both planes"})
    return {
        "id": "fano_oracle_equivalence",
        "passed": not failures and checked >= matrices,
        "matrices_checked": checked,
        "failures": failures[:5],
    }


def _lines_lie_on_planes(field, fiber, plucker_points):
    """Every enumerated line lies on one of the two planes; exactly one on both."""
    from .fano import plucker_coordinates
    import itertools

    def normalize(coords):
        for c in coords:
            if c:
                inv = field.inv(c)
                return tuple(field.mul(inv, x) for x in coords)
        return tuple(coords)

    def plane_lines(w):
        # 2-subspaces of the plane via echelon shapes of Gr(2,3): p^2+p+1 lines
        p = field.p
        pts = set()
        shapes = []
        for a in range(p):
            for b in range(p):
                shapes.append(((1, 0, a), (0, 1, b)))
        for a in range(p):
            shapes.append(((1, a, 0), (0, 0, 1)))
        shapes.append(((0, 1, 0), (0, 0, 1)))
        for s0, s1 in shapes:
            r0 = [field.zero] * 4
            r1 = [field.zero] * 4
            for m in range(3):
                for t in range(4):
                    r0[t] = field.add(r0[t], field.mul(field.from_int(s0[m]), w[m][t]))
                    r1[t] = field.add(r1[t], field.mul(field.from_int(s1[m]), w[m][t]))
            pts.add(normalize(plucker_coordinates(field, r0, r1)))
        return pts

    on_plus = plane_lines(fiber.w_plus)
    on_minus = plane_lines(fiber.w_minus)
    seen_both = 0
    for coords in plucker_points:
        n = normalize(coords)
        inp, inm = n in on_plus, n in on_minus
        if not (inp or inm):
            return False
        if inp and inm:
            seen_both += 1
    return seen_both == 1


def check_cohomology(seed: int) -> dict:
    rng = random.Random(seed)
    failures = []
    for variety in ("P1", "P2", "P3", "P1xP1", "P2xP1", "F1"):
        for _ in range(100):
            if variety in ("P1", "P2", "P3"):
                d = rng.randrange(-8, 9)
            else:
                d = (rng.randrange(-6, 7), rng.randrange(-6, 7))
            if not serre_duality_holds(variety, d):
                failures.append((variety, d))
    rr = all(f1_riemann_roch_holds(a, b) for a in range(-5, 6) for b in range(-5, 6))
    frozen = lb_cohomology("F1", (-1, -1)) == (0, 1, 0) \
        and lb_cohomology("P2", -1) == (0, 0, 0) \
        and lb_cohomology("P2xP1", (0, -1)) == (0, 0, 0, 0)
    return {
        "id": "cohomology_calculator",
        "passed": not failures and rr and frozen,
        "serre_failures": failures[:5],
        "riemann_roch_f1": rr,
        "frozen_values": frozen,
    }


def check_exceptionality() -> dict:
    table = exceptionality_table()
    return {
        "id": "exceptionality_table",
        "passed": table == (1, 0, 0, 0, 0),
        "table": list(table),
    }


def check_adjunction() -> dict:
    rep = adjunction_checks()
    passed = (rep["omega_M_on_plane_ok"] and rep["omega_Mplus_on_F1_ok"]
              and rep["K_F1_matches_blowup_formula"] and rep["serre_dual_check"]
              and rep["h1_of_minus_h_minus_l"] == (0, 1, 0))
    rep2 = dict(rep)
    rep2["id"] = "adjunction_arithmetic"
    rep2["passed"] = passed
    rep2["h1_of_minus_h_minus_l"] = list(rep["h1_of_minus_h_minus_l"])
    rep2["omega_Mplus_on_F1"] = list(rep["omega_Mplus_on_F1"])
    rep2["K_F1"] = list(rep["K_F1"])
    return rep2


def check_bplus() -> dict:
    rep = bplus_restriction_type()
    out = {
        "id": "bplus_restriction",
        "passed": rep["degrees_ok"] and rep["only_zero_solution"],
        "pushforward_degrees": rep["pushforward_degrees"],
        "only_zero_solution": rep["only_zero_solution"],
        "summand_classes": [list(c) for c in rep["summand_classes"]],
    }
    return out


def check_pushforward(fam: QuadricFamily) -> dict:
    corank2_pt = _find_corank2_point(fam)
    smooth_pt = _find_corank0_point(fam)
    sub = {}
    passed = True
    if smooth_pt is not None:
        rep = pushforward_rank_proxy(fam, smooth_pt, 0)
        sub["smooth"] = {
            "chi_total": rep["chi_total"],
            "matches_module_rank": rep["matches_module_rank"],
            "split_model_contradiction": rep["split_model_contradiction"],
        }
        passed = passed and rep["matches_module_rank"] and rep["split_model_contradiction"]
    for k in (0, 1):
        if corank2_pt is None:
            break
        rep = pushforward_rank_proxy(fam, corank2_pt, k)
        sub["corank2_k%d" % k] = {
            "h0_total": rep["h0_total"],
            "matches_module_rank": rep["matches_module_rank"],
            "vertex_gluing_rank": rep["vertex_gluing_rank"],
            "thickening": rep["vertex_thickening_length"],
            "twisted_zero": rep["twisted"]["consistent_with_zero_pushforward"],
        }
        passed = (passed and rep["matches_module_rank"]
                  and rep["twisted"]["consistent_with_zero_pushforward"])
    return {
        "id": "pushforward_proxies",
        "passed": passed,
        "corank2_point_found": corank2_pt is not None,
        "smooth_point_found": smooth_pt is not None,
        "details": sub,
    }


def _search_grid(fam):
    from itertools import product
    field = fam.field
    if field.characteristic:
        values = [field.from_int(v) for v in range(field.characteristic)]
    else:
        values = [field.from_int(v) for v in (0, 1, -1, 2, -2)]
    return product(values, repeat=fam.base_dim)


def _find_corank2_point(fam):
    for pt in _search_grid(fam):
        if corank_at(fam, pt)[0] == 2:
            return pt
    return None


def _find_corank0_point(fam):
    for pt in _search_grid(fam):
        if corank_at(fam, pt)[0] == 0:
            return pt
    return None


def run_verify_suite(fam: QuadricFamily, seed: int = 0, corrupt=None) -> dict:
    """All checks, concurrently when QUADRICLAB_THREADS allows, sorted by id."""
    tasks = [
        lambda: check_clifford_associativity(fam, seed, corrupt=corrupt),
        lambda: check_center(fam),
        lambda: check_periodicity(fam, seed),
        lambda: check_koszul(fam, seed),
        lambda: check_clifford_resolutions(fam, seed),
        lambda: check_fano_oracle(fam, seed),
        lambda: check_cohomology(seed),
        lambda: check_exceptionality(),
        lambda: check_adjunction(),
        lambda: check_bplus(),
        lambda: check_pushforward(fam),
    ]
    workers = int(os.environ.get("QUADRICLAB_THREADS", "1") or "1")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda f: f(), tasks))
    else:
        results = [f() for f in tasks]
    results.sort(key=lambda r: r["id"])
    return {
        "checks": results,
        "all_passed": all(r["passed"] for r in results),
    }
