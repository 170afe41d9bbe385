"""
Building small formulas with provably high VC-dimension
=======================================================

The construction: encode the 2^d lexicographic subsets of {1..d} into a
single code set T, then write one partitioned formula F(x; y) whose
parameter sweeps carve out exactly those subsets.  Shattering {1..d} is
then immediate, so the measured VC-dimension is at least d.
"""

from pavc import (
    build_code_set,
    collapse_image,
    encode_naive,
    family_from_formula,
    largest_terms,
    lex_subset,
    print_partitioned,
    select_modulus,
    shape,
    spread_values,
    vc_dimension,
)

d = 3

# the 2^d subsets in descending lexicographic order
for j in range(1 << d):
    print(f"S_{j} =", sorted(lex_subset(d, j)) or "{}")

# interleaved into one set of integers: t = i + d*j encodes "i in S_j"
code = build_code_set(d)
print("code set T:", code)

# the same set arises by collapsing a d-progression "spread" layout,
# which is the route a compressed encoder would take
print("spread T':", spread_values(d))
print("collapse image:", collapse_image(d))
print("largest progression terms:", largest_terms(d))
print("prime modulus above them: ", select_modulus(d, "prime"))

# the explicit formula: object x, parameter y, two helper quantifiers
pf, meta = encode_naive(d)
print(print_partitioned(pf))
sh = shape(pf.formula)
print(f"shape: {sh.total_vars} vars, {sh.num_inequalities} inequalities, "
      f"phi = {sh.phi_bits} bits")

# sweep the parameter window and measure: the family is the full power
# set of {1..d}, so the dimension is exactly d
fam = family_from_formula(
    pf, meta.ground_window, {meta.param_var: meta.param_window},
    mode="bounded", hints=meta.hint_map())
rep = vc_dimension(fam)
print("measured vc dimension:", rep.vc_dim, " witness:", rep.witness)
print("family members == lexicographic subsets:",
      fam.subsets() == {frozenset(lex_subset(d, j)) for j in range(1 << d)})
