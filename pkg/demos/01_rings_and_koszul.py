"""Quotient rings, normal forms, and the Koszul complex.

Walks through the exact-arithmetic layer on the running example
R = F_p[x,y,z]/(x^2, y^2, z^2, xyz): standard monomial bases, normal-form
reduction, the subset-indexed Koszul bases, wedge products, and the
differential matrices with their d^2 = 0 check.
"""

from koszulres import KoszulElement, Polynomial, RingMatrix, koszul_differential
from koszulres.koszul import parse_koszul_element
from koszulres.samples import class_t_ring

ring = class_t_ring()
print(f"ring: {ring!r}")
print("standard monomials:",
      [Polynomial.monomial(m, 3, ring.p).to_string(ring.names)
       for m in ring.std_basis])
print("dim_k R =", ring.dim)

# normal forms are plain divisibility tests against the monomial generators
x, y = ring.variable(0), ring.variable(1)
print("\nnormal forms:")
print("  x^2        ->", ring.normal_form(x * x).to_string(ring.names))
print("  x*(x + y)  ->", ring.normal_form(x * (x + y)).to_string(ring.names))

# the Koszul differentials in the lexicographic subset bases
print("\nKoszul differentials:")
for i in (1, 2, 3):
    d = koszul_differential(i, ring)
    rows = [[d.entry(r, c).to_string(ring.names) for c in range(d.cols)]
            for r in range(d.rows)]
    print(f"  d_{i} =", rows)

d1, d2, d3 = (koszul_differential(i, ring) for i in (1, 2, 3))
print("d_1 d_2 = 0:", (d1 @ d2).is_zero(), "   d_2 d_3 = 0:", (d2 @ d3).is_zero())

# wedge products carry shuffle signs and quotient-ring coefficients
e1 = KoszulElement.basis(ring, (1,))
e2 = KoszulElement.basis(ring, (2,))
print("\ne1 ^ e2 =", e1.wedge(e2).to_string())
print("e2 ^ e1 =", e2.wedge(e1).to_string())
xe1 = parse_koszul_element("x*e[1]", ring)
ye2 = parse_koszul_element("y*e[2]", ring)
print("(x e1) ^ (y e2) =", xe1.wedge(ye2).to_string())

# flattening realizes matrices over R as exact F_p-linear maps
M = RingMatrix(ring, 1, 1, {(0, 0): x})
print("\nmultiplication by x as a 7x7 matrix over F_p:")
print(M.flatten())
