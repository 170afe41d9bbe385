"""Finite set families, shattering, VC-dimension, and the shatter function.

Families live on a sorted integer ground window.  Members are stored as
bitmasks over ground indices, so trace computations are single AND
operations.  Duplicate member sets are allowed in the input and are
deduplicated wherever only distinct traces matter.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Iterable, Mapping, Sequence

from .evaluator import eliminate_quantifiers, eval_bounded, eval_point
from .formula import PartitionedFormula

DEFAULT_VC_CAP = 20
DEFAULT_MAX_SUBSETS = 200_000


class VcLabError(ValueError):
    pass


@dataclass(frozen=True)
class SetFamily:
    """A labelled family of subsets of a finite integer ground set."""

    ground: tuple[int, ...]
    members: tuple[tuple[str, int], ...]  # (label, bitmask over ground indices)

    def __post_init__(self):
        if list(self.ground) != sorted(set(self.ground)):
            raise VcLabError("ground must be sorted and duplicate-free")
        full = (1 << len(self.ground)) - 1
        for label, mask in self.members:
            if mask & ~full:
                raise VcLabError(f"member {label!r} leaves the ground window")

    @staticmethod
    def from_sets(ground: Iterable[int],
                  members: Iterable[tuple[str, Iterable[int]]]) -> "SetFamily":
        g = tuple(sorted(set(ground)))
        index = {v: i for i, v in enumerate(g)}
        packed = []
        for label, subset in members:
            mask = 0
            for v in subset:
                if v not in index:
                    raise VcLabError(f"member {label!r} contains {v}, "
                                     "outside the ground set")
                mask |= 1 << index[v]
            packed.append((label, mask))
        return SetFamily(g, tuple(packed))

    def member_set(self, mask: int) -> frozenset[int]:
        return frozenset(v for i, v in enumerate(self.ground) if mask >> i & 1)

    def distinct_masks(self) -> list[int]:
        return list(dict.fromkeys(mask for _, mask in self.members))

    def subsets(self) -> set[frozenset[int]]:
        return {self.member_set(m) for m in self.distinct_masks()}


def _points_to_mask(fam: SetFamily, points: Iterable[int]) -> int:
    index = {v: i for i, v in enumerate(fam.ground)}
    mask = 0
    for p in points:
        if p not in index:
            raise VcLabError(f"point {p} is outside the ground set")
        mask |= 1 << index[p]
    return mask


def is_shattered(points: Iterable[int], fam: SetFamily,
                 cap: int = DEFAULT_VC_CAP
                 ) -> tuple[bool, dict[frozenset[int], str] | None]:
    """Whether the family cuts out every subset of `points`.

    Returns (True, witness) with one member label per realized subset,
    or (False, None).  Refuses point sets larger than `cap`.
    """
    pts = sorted(set(points))
    if len(pts) > cap:
        raise VcLabError(f"shattering check capped at {cap} points")
    target_mask = _points_to_mask(fam, pts)
    needed = 1 << len(pts)
    seen: dict[int, str] = {}
    for label, mask in fam.members:
        tr = mask & target_mask
        if tr not in seen:
            seen[tr] = label
            if len(seen) == needed:
                break
    if len(seen) < needed:
        return (False, None)
    index = {v: i for i, v in enumerate(fam.ground)}
    witness = {
        frozenset(p for p in pts if tr >> index[p] & 1): label
        for tr, label in seen.items()
    }
    return (True, witness)


@dataclass(frozen=True)
class ShatterReport:
    """vc_dim is exact when capped is False; otherwise the search stopped
    at the cap and the true dimension is >= vc_dim."""

    vc_dim: int
    capped: bool
    witness: tuple[int, ...]
    pi_table: tuple[tuple[int, int], ...]

    def vc_display(self) -> str:
        return f">= {self.vc_dim}" if self.capped else str(self.vc_dim)


def _distinct_traces(masks: Sequence[int], subset_mask: int) -> int:
    return len({m & subset_mask for m in masks})


def vc_dimension(fam: SetFamily, cap: int = DEFAULT_VC_CAP,
                 max_subsets: int = DEFAULT_MAX_SUBSETS) -> ShatterReport:
    """Exact VC-dimension of the finite family (or `>= cap` if it survives
    every tested size).  Includes the shatter-function table."""
    masks = fam.distinct_masks()
    n = len(fam.ground)
    best_witness: tuple[int, ...] = ()
    dim = 0
    capped = False
    size = 1
    while True:
        if size > min(cap, n):
            capped = size > cap
            break
        found = None
        for idx_combo in combinations(range(n), size):
            sub = 0
            for i in idx_combo:
                sub |= 1 << i
            if _distinct_traces(masks, sub) == 1 << size:
                found = idx_combo
                break
        if found is None:
            break
        dim = size
        best_witness = tuple(fam.ground[i] for i in found)
        size += 1
    return ShatterReport(
        vc_dim=dim,
        capped=capped,
        witness=best_witness,
        pi_table=tuple((k, shatter_function(fam, k, max_subsets))
                       for k in range(0, n + 1)),
    )


def shatter_function(fam: SetFamily, n: int,
                     max_subsets: int = DEFAULT_MAX_SUBSETS) -> int:
    """pi(n): the largest number of distinct traces on any n ground points."""
    size = len(fam.ground)
    if n < 0:
        raise VcLabError("shatter function needs n >= 0")
    if n > size:
        raise VcLabError(f"n={n} exceeds the ground size {size}")
    if comb(size, n) > max_subsets:
        raise VcLabError(f"C({size},{n}) subsets exceed the cap {max_subsets}")
    masks = fam.distinct_masks()
    if not masks:
        return 0
    best = 0
    limit = 1 << n
    for idx_combo in combinations(range(size), n):
        sub = 0
        for i in idx_combo:
            sub |= 1 << i
        best = max(best, _distinct_traces(masks, sub))
        if best == limit:
            break
    return best


def sauer_shelah_bound(d: int, n: int) -> int:
    """sum_{i<=d} C(n, i): the maximal shatter function of VC-dimension d."""
    if d < 0 or n < 0:
        raise VcLabError("need d >= 0 and n >= 0")
    return sum(comb(n, i) for i in range(0, min(d, n) + 1))


# ---------------------------------------------------------------------------
# Families defined by formulas


def _window_points(window: tuple[int, int]) -> range:
    lo, hi = window
    if lo > hi:
        raise VcLabError(f"empty window {lo}..{hi}")
    return range(lo, hi + 1)


def family_from_formula(pf: PartitionedFormula,
                        ground_window: tuple[int, int],
                        param_windows: Mapping[str, tuple[int, int]]
                        | tuple[int, int],
                        mode: str = "bounded",
                        hints: Mapping[str, tuple[int, int]] | None = None,
                        *, max_atoms: int | None = None) -> SetFamily:
    """Sweep the parameter box; each parameter point contributes the set of
    ground objects satisfying the formula.

    The object side must be a single variable (ground sets are integer
    windows).  mode "bounded" evaluates with quantifier hints; mode "qe"
    eliminates quantifiers once and evaluates the result pointwise.
    """
    if len(pf.object_vars) != 1:
        raise VcLabError("families need exactly one object variable")
    obj = pf.object_vars[0]
    if isinstance(param_windows, tuple) and len(param_windows) == 2 \
            and all(isinstance(v, int) for v in param_windows):
        if len(pf.param_vars) != 1:
            raise VcLabError("a single window needs a single parameter")
        param_windows = {pf.param_vars[0]: param_windows}
    missing = set(pf.param_vars) - set(param_windows)
    if missing:
        raise VcLabError(f"missing parameter windows: {sorted(missing)}")

    if mode == "qe":
        body = eliminate_quantifiers(pf.formula, max_atoms=max_atoms)

        def holds(env: dict[str, int]) -> bool:
            return eval_point(body, env)
    elif mode == "bounded":
        body = pf.formula

        def holds(env: dict[str, int]) -> bool:
            return eval_bounded(body, env, hints or {})
    else:
        raise VcLabError(f"unknown mode {mode!r}")

    ground = tuple(_window_points(ground_window))
    param_ranges = [_window_points(param_windows[v]) for v in pf.param_vars]
    members = []
    for combo in product(*param_ranges):
        env = dict(zip(pf.param_vars, combo))
        mask = 0
        for i, x in enumerate(ground):
            env[obj] = x
            if holds(env):
                mask |= 1 << i
        label = ",".join(str(c) for c in combo)
        members.append((label, mask))
    return SetFamily(ground, tuple(members))


def report_json(report: ShatterReport, fam: SetFamily,
                ground_window: tuple[int, int] | None = None,
                param_windows=None) -> dict:
    """JSON-ready summary; window integers rendered as decimal strings."""
    out = {
        "vc_dim": report.vc_dim,
        "vc_display": report.vc_display(),
        "capped": report.capped,
        "witness": [str(v) for v in report.witness],
        "pi_table": [[n, count] for n, count in report.pi_table],
        "family_size": len(fam.members),
        "distinct_members": len(fam.distinct_masks()),
    }
    if ground_window is not None:
        out["ground_window"] = [str(v) for v in ground_window]
    if param_windows is not None:
        if isinstance(param_windows, Mapping):
            out["param_windows"] = {
                v: [str(lo), str(hi)] for v, (lo, hi) in param_windows.items()
            }
        else:
            out["param_windows"] = [str(v) for v in param_windows]
    return out
