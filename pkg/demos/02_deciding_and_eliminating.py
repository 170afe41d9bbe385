"""
Deciding sentences and eliminating quantifiers
==============================================

Any sentence over (Z, <, +) is decidable.  The engine eliminates
quantifiers innermost-first, producing an equivalent quantifier-free
formula whose only extra atom kind is divisibility.
"""

from pavc import decide, eliminate_quantifiers, eval_point, parse, to_text

# a true sentence: every integer has a successor
print(decide(parse("(forall x (exists y (= y (+ x 1))))")))

# a false one: there is no integer strictly between 0 and 1
print(decide(parse("(exists x (and (< 0 x) (< x 1)))")))

# elimination on an open formula keeps the free variables; parity of y
# survives as a divisibility atom
f = parse("(exists x (= (* 2 x) y))")
qf = eliminate_quantifiers(f)
print("exists x. 2x = y   ==>  ", to_text(qf))
for y in range(-3, 4):
    print(f"  y={y:+d}: {eval_point(qf, {'y': y})}")

# a squeeze with no integer slack simplifies all the way to truth
g = parse("(forall x (exists y (and (<= x y) (< y (+ x 1)))))")
print("squeeze sentence ==>", to_text(eliminate_quantifiers(g)))

# coefficients force modulus reasoning: 5x < y < 3x needs a negative x,
# and the eliminated form keeps that knowledge without the quantifier
h = parse("(exists x (and (< (* 5 x) y) (< y (* 3 x))))")
qf = eliminate_quantifiers(h)
got = [y for y in range(-12, 13) if eval_point(qf, {"y": y})]
want = [y for y in range(-12, 13)
        if any(5 * x < y < 3 * x for x in range(-40, 41))]
print("solutions in [-12, 12]:", got)
print("brute force agrees:    ", got == want)
