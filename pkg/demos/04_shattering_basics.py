"""
Set families, shattering, and the shatter function
==================================================

A finite family of subsets of a finite ground set; which point sets it
shatters; its VC-dimension; and the shatter function against the
Sauer-Shelah bound.
"""

from pavc import (
    SetFamily,
    is_shattered,
    sauer_shelah_bound,
    shatter_function,
    vc_dimension,
)

# intervals [a, b] over 0..5, as a concrete family
ground = range(6)
sets = {}
for a in ground:
    for b in range(a, 6):
        sets[f"[{a},{b}]"] = [x for x in ground if a <= x <= b]
fam = SetFamily.from_sets(ground, sets.items())
print("members:", len(fam.members), "distinct traces:", len(fam.subsets()))

# two points are shattered (both in, both out, and each separately)...
ok, witness = is_shattered([1, 4], fam)
print("shatters {1,4}?", ok)
for sub, label in sorted(witness.items(), key=lambda kv: len(kv[0])):
    print(f"  {set(sub) or '{}'}  cut out by  {label}")

# ...but three are not: an interval cannot keep the middle point out
ok, _ = is_shattered([1, 3, 5], fam)
print("shatters {1,3,5}?", ok)

rep = vc_dimension(fam)
print("vc dimension:", rep.vc_dim, "witness:", rep.witness)

# the shatter function stays under the Sauer-Shelah polynomial
for n in range(len(fam.ground) + 1):
    pi = shatter_function(fam, n)
    print(f"  pi({n}) = {pi:3d}   bound = {sauer_shelah_bound(rep.vc_dim, n)}")
