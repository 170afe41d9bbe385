"""
Formulas: parsing, printing, substitution, and size accounting
==============================================================

Formulas are s-expressions over integer linear terms.  This script walks
through the core round trip and the shape report used everywhere else.
"""

from pavc import parse, to_text, substitute, shape, free_vars

# parse and print are exact inverses on the canonical form
f = parse("(exists t (and (<= (+ x y) t) (< t (+ x 7))))")
print("parsed:       ", to_text(f))
print("free variables:", sorted(free_vars(f)))

# substitution folds constants into the atoms
g = substitute(f, {"y": 12})
print("after y := 12:", to_text(g))

# the shape report counts variables, inequalities (an equality counts as
# two), quantifier alternations, and the bit length phi
sh = shape(f)
print("total_vars               =", sh.total_vars)
print("num_inequalities         =", sh.num_inequalities)
print("quantifier alternations  =", sh.num_quantifier_alternations)
print("phi bits                 =", sh.phi_bits)
print("short (<=10 vars, <=18 ineqs)?", sh.is_short(10, 18))

# every operator and variable occurrence costs 1; an integer n costs
# bit_length(|n|) + 1, so bigger constants make longer formulas
small = shape(parse("(<= x 3)")).phi_bits
big = shape(parse("(<= x 3000000)")).phi_bits
print("phi of (<= x 3):        ", small)
print("phi of (<= x 3000000):  ", big)
