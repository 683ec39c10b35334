"""Rings of binary matrices and the word-level cost metric.

Multiplication by a ring element is an n x n GF(2) matrix; its naive XOR
count (row weights minus one) prices scalar multiplications.  Word XORs cost
n gates each, and a repeated scalar product is computed once.
"""

from mdsforge import catalogs, companion, poly_parse, ring, xor_count
from mdsforge.slp import cost, depth, extract_matrix

r8 = ring("x^8+x^2+1")
print("modulus x^8+x^2+1: multiplication by a costs",
      r8.scalar_xor_count(2), "XOR;",
      "a^-1 costs", r8.scalar_xor_count(r8.inv(2)))
print("the ring has a zero divisor:", "a^4+a+1 is a unit?",
      r8.is_unit(r8.parse_element("a^4+a+1")))

aes_ring = ring("x^8+x^4+x^3+x+1")
print("\nAES field: multiplication by a costs",
      xor_count(companion(aes_ring.modulus)), "XOR")

program = catalogs.load_slp("aes_mixcolumns")
print("MixColumns as a 12-step word program:",
      "cost", cost(program), "=", "12*8 word XORs + 4 scalar products * 3")
print("depth", depth(program), "XOR levels")

demo = catalogs.load_slp("demo_cost49")
print("\nsix-step demo program: cost", cost(demo),
      "(the repeated a*x2 product is paid once)")
print("its matrix:")
m = extract_matrix(demo)
for i in range(m.k):
    print("  ", ", ".join(m.ring.element_text(e) for e in m.rows[i]))
