"""quadriclab: exact analysis of families of quadric surfaces.

Corank stratification and smoothness tests, even Clifford algebras and
their odd modules, fiberwise Fano schemes of lines with a finite-field
oracle, Koszul and Clifford-module resolutions with exactness
certificates, and a line-bundle cohomology calculator.
"""

__version__ = "0.1.0"

CONVENTIONS = {
    "clifford_relation": "u*v + v*u = 2*u^T*A*v",
    "even_basis": "1; e_i*e_j (i<j); e1*e2*e3*e4",
    "odd_basis": "e1..e4; e_i*e_j*e_k (i<j<k)",
    "monomial_order": "graded lexicographic",
    "plucker_order": "p12,p13,p14,p23,p24,p34",
    "sym2_basis": "u_i*u_j (i<=j), off-diagonal polar coefficients doubled",
    "hirzebruch_basis": "h (pullback of the plane class), l (the (-1)-curve); h^2=1, h.l=0, l^2=-1",
}
