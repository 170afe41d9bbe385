"""
Continued fractions and convergents
===================================

Exact big-integer continued fraction expansions, their convergents, and
the determinant identity that makes consecutive convergents coprime.
"""

from fractions import Fraction

from pavc import convergents, determinant_step, from_rational, to_rational

cf = from_rational(45, 16)
print("45/16 =", list(cf.terms))

cs = convergents(cf)
for k, c in enumerate(cs):
    print(f"  convergent {k}: {c.p}/{c.q} = {Fraction(c.p, c.q)}")

# p_{k+1} q_k - p_k q_{k+1} alternates between +1 and -1
for a, b in zip(cs, cs[1:]):
    print("  determinant:", determinant_step(a, b))

# the expansion is canonical and reconstructs its input exactly
print("reconstructed:", to_rational(cf))

# golden-ratio flavor: ratios of consecutive Fibonacci numbers expand to
# all ones (with the canonical trailing 2), and every convergent is a
# smaller Fibonacci ratio
fib = from_rational(89, 55)
print("89/55 =", list(fib.terms))
print("its convergents:", [(c.p, c.q) for c in convergents(fib)])
