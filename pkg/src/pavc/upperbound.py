"""VC upper-bound certificates computed from quantifier-free atom inventories.

A quantifier-free formula with parameters selects sets by thresholding a
fixed finite list of atoms.  Each atom contributes a small per-atom budget
and the whole family on n points realizes at most (n+1)^ell sign patterns,
so any shattered set satisfies 2^n <= (n+1)^ell.  The certificate stores
ell and the largest n satisfying that inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .evaluator import DEFAULT_MAX_COEFF_BITS, eliminate_quantifiers
from .formula import (
    DIV,
    Atom,
    Formula,
    PartitionedFormula,
    atoms_of,
    bitlen,
    is_quantifier_free,
    to_text,
)

# exact big-int scan beyond this gets slow; floats are confirmed exactly
# at the boundary up to _CONFIRM_LIMIT
_EXACT_LIMIT = 4096
_CONFIRM_LIMIT = 65536


class UpperBoundError(ValueError):
    pass


def atom_capacity(a: Atom) -> int:
    """Per-atom budget: 1 for an order atom, log2(modulus) for divisibility.

    A congruence atom with modulus c can only distinguish residues, and
    c residue classes carve out at most max(1, floor(log2 c)) shatterable
    dimensions worth of patterns.
    """
    if a.kind == DIV:
        return max(1, a.modulus.bit_length() - 1)
    return 1


@dataclass(frozen=True)
class AtomInventory:
    """Distinct atoms of a quantifier-free formula with their budgets."""

    entries: tuple[tuple[Atom, int], ...]
    num_inequality: int
    num_congruence: int

    @property
    def ell(self) -> int:
        return sum(b for _, b in self.entries)


def inventory(f: Formula) -> AtomInventory:
    if not is_quantifier_free(f):
        raise UpperBoundError("inventory requires a quantifier-free formula")
    distinct = list(dict.fromkeys(atoms_of(f)))
    entries = tuple((a, atom_capacity(a)) for a in distinct)
    cong = sum(1 for a in distinct if a.kind == DIV)
    return AtomInventory(entries, len(distinct) - cong, cong)


def _holds_exact(n: int, ell: int) -> bool:
    return 2 ** n <= (n + 1) ** ell


def _holds_float(n: int, ell: int) -> bool:
    return float(n) <= ell * math.log2(n + 1.0)


def capacity_bound(ell: int) -> int:
    """Largest n with 2^n <= (n+1)^ell; 0 when ell is 0.

    The predicate is monotone (true up to the answer, false after), so a
    doubling scan plus binary search finds the edge.  Floats are safe for
    large ell: near the edge the defect changes by about 1 per step while
    rounding error stays far below that, and for moderate ell the float
    answer is reconfirmed with exact arithmetic anyway.
    """
    if ell < 0:
        raise UpperBoundError("ell must be nonnegative")
    if ell == 0:
        return 0
    test = _holds_exact if ell <= _EXACT_LIMIT else _holds_float

    hi = 1
    while test(hi, ell):
        hi <<= 1
    lo = hi >> 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if test(mid, ell):
            lo = mid
        else:
            hi = mid

    if test is _holds_float and ell <= _CONFIRM_LIMIT:
        while _holds_exact(lo + 1, ell):
            lo += 1
        while not _holds_exact(lo, ell):
            lo -= 1
    return lo


@dataclass(frozen=True)
class UpperBoundCertificate:
    ell: int
    bound: int

    def check(self) -> bool:
        """Re-verify the defining inequalities of the stored bound."""
        if self.ell == 0:
            return self.bound == 0
        if self.ell > _CONFIRM_LIMIT:
            return self.bound == capacity_bound(self.ell)
        return (_holds_exact(self.bound, self.ell)
                and not _holds_exact(self.bound + 1, self.ell))


def certificate(inv: AtomInventory) -> UpperBoundCertificate:
    ell = inv.ell
    return UpperBoundCertificate(ell, capacity_bound(ell))


def upper_bound_via_qe(
    pf: PartitionedFormula,
    *,
    max_atoms: int | None = None,
    max_coeff_bits: int = DEFAULT_MAX_COEFF_BITS,
) -> tuple[UpperBoundCertificate, dict]:
    """Eliminate quantifiers, then certify a VC upper bound from the atoms.

    Returns the certificate together with elimination statistics.  The
    bound applies to the family carved out by the object variables as the
    parameter variables range over all integers.
    """
    before = len(list(dict.fromkeys(atoms_of(pf.formula))))
    qf = eliminate_quantifiers(pf.formula, max_atoms=max_atoms,
                               max_coeff_bits=max_coeff_bits)
    inv = inventory(qf)
    worst_bits = 0
    for a, _ in inv.entries:
        worst_bits = max(worst_bits, a.left.max_coeff_bits(),
                         a.right.max_coeff_bits())
        if a.kind == DIV:
            worst_bits = max(worst_bits, bitlen(a.modulus))
    stats = {
        "atoms_before": before,
        "atoms_after": len(inv.entries),
        "num_inequality": inv.num_inequality,
        "num_congruence": inv.num_congruence,
        "max_coeff_bits_after": worst_bits,
    }
    return certificate(inv), stats


def certificate_report(cert: UpperBoundCertificate, inv: AtomInventory | None = None,
                       qe_stats: dict | None = None,
                       max_listed: int = 100) -> dict:
    """JSON-ready summary; atom listing is truncated past max_listed."""
    out: dict = {"ell": cert.ell, "vc_upper_bound": cert.bound,
                 "certificate_valid": cert.check()}
    if inv is not None:
        listed = [{"atom": to_text(a), "capacity": b}
                  for a, b in inv.entries[:max_listed]]
        out["num_inequality"] = inv.num_inequality
        out["num_congruence"] = inv.num_congruence
        out["atoms"] = listed
        out["atoms_truncated"] = len(inv.entries) > max_listed
    if qe_stats is not None:
        out["qe_stats"] = dict(qe_stats)
    return out
