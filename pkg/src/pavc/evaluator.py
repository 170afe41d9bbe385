"""Evaluation and quantifier elimination for linear integer formulas.

Three evaluation routes:

* eval_point / eval_ground: direct evaluation of quantifier-free formulas.
* eval_bounded: quantifiers enumerated over per-variable hint intervals,
  with an upfront refusal when the worst-case nesting product of interval
  sizes exceeds a cap.
* eliminate_quantifiers / decide: exact semantics over all of Z, by
  innermost-first elimination.  Universals go through the dual
  (forall x F == not exists x not F).  Each existential is removed either
  by the equality-substitution shortcut (when a conjunct pins c*x to a
  term) or by the classic divisibility-aware case split: scale the
  variable's coefficients to a common delta, add (div delta x), then
  cover the solution space with boundary terms plus a periodic tail,
  instantiating offsets 1..D where D is the lcm of all div moduli.  The
  boundary set is taken from whichever side (lower or upper bounds) is
  smaller.  div atoms appear in the output; the result keeps the input's
  free variables and is quantifier-free.

Resource caps abort elimination loudly rather than letting the case
split blow up: a maximum output atom count (overridable via the
PAVC_MAX_ATOMS environment variable) and a maximum coefficient bit
length.
"""

from __future__ import annotations

import os
from collections import deque
from math import lcm
from typing import Iterable, Mapping

from .formula import (
    DIV, EQ, LE, LT, FALSE, TRUE, ZERO,
    And, Atom, Bool, Exists, Forall, Formula, FormulaError, LinearTerm, Not, Or,
    atoms_of, bitlen, free_vars, is_quantifier_free, mk_and, mk_or,
)

DEFAULT_MAX_ATOMS = 10 ** 6
DEFAULT_MAX_COEFF_BITS = 10 ** 5
DEFAULT_MAX_POINTS = 10 ** 8

MAX_ATOMS_ENV = "PAVC_MAX_ATOMS"


class EvalError(ValueError):
    pass


class MissingHintError(EvalError):
    """A quantified variable has no hint interval."""


class ResourceCapError(RuntimeError):
    """An evaluation or elimination would exceed a configured resource cap."""

    def __init__(self, kind: str, limit: int, needed: int):
        super().__init__(f"{kind} cap exceeded: needs {needed}, cap {limit}")
        self.kind = kind
        self.limit = limit
        self.needed = needed


def resolve_max_atoms(max_atoms: int | None) -> int:
    if max_atoms is not None:
        return max_atoms
    raw = os.environ.get(MAX_ATOMS_ENV)
    if raw is not None:
        try:
            return int(raw)
        except ValueError as exc:
            raise EvalError(f"bad {MAX_ATOMS_ENV} value {raw!r}") from exc
    return DEFAULT_MAX_ATOMS


def count_atoms(f: Formula) -> int:
    return sum(1 for _ in atoms_of(f))


# ---------------------------------------------------------------------------
# Direct evaluation


def _atom_holds(a: Atom, env: Mapping[str, int]) -> bool:
    if a.kind == DIV:
        return a.left.value(env) % a.modulus == 0
    l = a.left.value(env)
    r = a.right.value(env)
    if a.kind == LE:
        return l <= r
    if a.kind == LT:
        return l < r
    return l == r


def _floor_div(a: int, b: int) -> int:
    return a // b  # b > 0


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)  # b > 0


def _conjuncts(f: Formula) -> Iterable[Formula]:
    if isinstance(f, And):
        for p in f.parts:
            yield from _conjuncts(p)
    else:
        yield f


def _visible_atoms(f: Formula, blocked: frozenset[str]) -> Iterable[Atom]:
    """Positive atom conjuncts, looking through nested existentials.

    An atom conjunct sitting under an inner (exists w ...) must still hold
    whenever that existential holds, so it can prune the outer variable as
    long as it does not mention any intervening bound variable.
    """
    for part in _conjuncts(f):
        if isinstance(part, Atom):
            if not (part.left.vars() | part.right.vars()) & blocked:
                yield part
        elif isinstance(part, Exists):
            yield from _visible_atoms(part.body, blocked | {part.var})


def _exists_candidates(var: str, lo: int, hi: int, body: Formula,
                       env: Mapping[str, int]) -> Iterable[int]:
    """Shrink an existential's enumeration range using ground conjuncts.

    Only values that falsify some positive atom conjunct are removed, so
    the reduction never loses a witness.
    """
    pinned: set[int] | None = None
    for part in _visible_atoms(body, frozenset()):
        if part.kind == DIV:
            continue
        g = part.left - part.right
        c = g.coeff(var)
        rest = g.drop(var)
        if not rest.is_ground and not rest.vars() <= env.keys():
            continue
        k = rest.value(env)
        if part.kind == EQ:
            if c == 0:
                if k != 0:
                    return []
                continue
            if (-k) % c != 0:
                return []
            val = (-k) // c
            pinned = {val} if pinned is None else pinned & {val}
            continue
        slack = 1 if part.kind == LT else 0  # c*var + k + slack <= 0
        if c == 0:
            if k + slack > 0:
                return []
        elif c > 0:
            hi = min(hi, _floor_div(-k - slack, c))
        else:
            lo = max(lo, _ceil_div(k + slack, -c))
    if pinned is not None:
        return sorted(v for v in pinned if lo <= v <= hi)
    if lo > hi:
        return []
    return range(lo, hi + 1)


def _eval(f: Formula, env: dict[str, int],
          hints: Mapping[str, tuple[int, int]]) -> bool:
    if isinstance(f, Bool):
        return f.value
    if isinstance(f, Atom):
        return _atom_holds(f, env)
    if isinstance(f, Not):
        return not _eval(f.body, env, hints)
    if isinstance(f, And):
        return all(_eval(p, env, hints) for p in f.parts)
    if isinstance(f, Or):
        return any(_eval(p, env, hints) for p in f.parts)
    if isinstance(f, (Exists, Forall)):
        if f.var not in hints:
            raise MissingHintError(f"no hint interval for {f.var!r}")
        lo, hi = hints[f.var]
        if isinstance(f, Exists):
            candidates: Iterable[int] = _exists_candidates(f.var, lo, hi,
                                                           f.body, env)
        else:
            candidates = range(lo, hi + 1)
        want = isinstance(f, Exists)
        had = f.var in env
        old = env.get(f.var)
        try:
            for val in candidates:
                env[f.var] = val
                if _eval(f.body, env, hints) == want:
                    return want
        finally:
            if had:
                env[f.var] = old
            elif f.var in env:
                del env[f.var]
        return not want
    raise EvalError(f"not a formula: {f!r}")


def eval_point(f: Formula, env: Mapping[str, int]) -> bool:
    """Evaluate a quantifier-free formula at a point covering its free vars."""
    if not is_quantifier_free(f):
        raise EvalError("formula has quantifiers; use eval_bounded or decide")
    missing = free_vars(f) - set(env)
    if missing:
        raise EvalError(f"point missing variables: {sorted(missing)}")
    return _eval(f, dict(env), {})


def eval_ground(f: Formula) -> bool:
    """Evaluate a variable-free, quantifier-free formula."""
    if free_vars(f):
        raise EvalError(f"formula is not ground: free {sorted(free_vars(f))}")
    return eval_point(f, {})


def _worst_case_points(f: Formula, hints: Mapping[str, tuple[int, int]]) -> int:
    if isinstance(f, (Bool, Atom)):
        return 1
    if isinstance(f, Not):
        return _worst_case_points(f.body, hints)
    if isinstance(f, (And, Or)):
        return max(_worst_case_points(p, hints) for p in f.parts)
    if isinstance(f, (Exists, Forall)):
        if f.var not in hints:
            raise MissingHintError(f"no hint interval for {f.var!r}")
        lo, hi = hints[f.var]
        span = max(0, hi - lo + 1)
        return span * _worst_case_points(f.body, hints)
    raise EvalError(f"not a formula: {f!r}")


def eval_bounded(f: Formula, point: Mapping[str, int],
                 hints: Mapping[str, tuple[int, int]],
                 max_points: int = DEFAULT_MAX_POINTS) -> bool:
    """Evaluate with quantifiers ranging over finite hint intervals.

    `point` assigns every free variable; `hints` maps every quantified
    variable to an inclusive interval.  Refuses upfront (ResourceCapError)
    when the worst root-to-leaf product of interval sizes exceeds
    `max_points`.
    """
    missing = free_vars(f) - set(point)
    if missing:
        raise EvalError(f"point missing variables: {sorted(missing)}")
    worst = _worst_case_points(f, hints)
    if worst > max_points:
        raise ResourceCapError("enumeration points", max_points, worst)
    return _eval(f, dict(point), hints)


# ---------------------------------------------------------------------------
# Simplification


def _atom_simplified(a: Atom) -> Formula:
    if a.kind == DIV:
        if a.modulus == 1:
            return TRUE
        if a.left.is_ground:
            return TRUE if a.left.const % a.modulus == 0 else FALSE
        return a
    g = a.left - a.right
    if g.is_ground:
        if a.kind == LE:
            return TRUE if g.const <= 0 else FALSE
        if a.kind == LT:
            return TRUE if g.const < 0 else FALSE
        return TRUE if g.const == 0 else FALSE
    return a


def simplify(f: Formula) -> Formula:
    """Equivalence-preserving cleanup: constant folding, flattening,
    deduplication, double-negation and complementary-literal removal."""
    if isinstance(f, Bool):
        return f
    if isinstance(f, Atom):
        return _atom_simplified(f)
    if isinstance(f, Not):
        b = simplify(f.body)
        if isinstance(b, Bool):
            return FALSE if b.value else TRUE
        if isinstance(b, Not):
            return b.body
        return Not(b)
    if isinstance(f, (And, Or)):
        is_and = isinstance(f, And)
        absorber = FALSE if is_and else TRUE
        identity = TRUE if is_and else FALSE
        flat: dict[Formula, None] = {}
        stack = deque(f.parts)
        while stack:
            p = simplify(stack.popleft())
            if p == absorber:
                return absorber
            if p == identity:
                continue
            if (is_and and isinstance(p, And)) or (not is_and and isinstance(p, Or)):
                stack.extendleft(reversed(p.parts))
                continue
            flat[p] = None
        parts = list(flat)
        part_set = set(parts)
        for p in parts:
            if Not(p) in part_set or (isinstance(p, Not) and p.body in part_set):
                return absorber
        if not parts:
            return identity
        if len(parts) == 1:
            return parts[0]
        return And(tuple(parts)) if is_and else Or(tuple(parts))
    if isinstance(f, (Exists, Forall)):
        b = simplify(f.body)
        if isinstance(b, Bool):
            return b
        if f.var not in free_vars(b):
            return b
        return type(f)(f.var, b)
    raise EvalError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Quantifier elimination


def _nnf(f: Formula, var: str, neg: bool = False) -> Formula:
    """Negation normal form; atoms mentioning `var` are normalized so the
    only var-forms left are strict < atoms and (possibly negated) div."""
    if isinstance(f, Bool):
        return Bool(f.value != neg)
    if isinstance(f, Atom):
        has_var = var in (f.left.vars() | f.right.vars())
        if f.kind == DIV:
            return Not(f) if neg else f
        if not neg:
            if not has_var:
                return f
            if f.kind == LE:
                return Atom(LT, f.left, f.right.shifted(1))
            if f.kind == EQ:
                return And((Atom(LT, f.left, f.right.shifted(1)),
                            Atom(LT, f.right, f.left.shifted(1))))
            return f
        if f.kind == LE:
            return Atom(LT, f.right, f.left)
        if f.kind == LT:
            return Atom(LT, f.right, f.left.shifted(1))
        return Or((Atom(LT, f.left, f.right), Atom(LT, f.right, f.left)))
    if isinstance(f, Not):
        return _nnf(f.body, var, not neg)
    if isinstance(f, (And, Or)):
        parts = tuple(_nnf(p, var, neg) for p in f.parts)
        flip = isinstance(f, And) == neg
        return mk_or(parts) if flip else mk_and(parts)
    raise EvalError("quantifier elimination works innermost-first; "
                    f"unexpected node {type(f).__name__}")


def _flatten_conjuncts(f: Formula) -> list[Formula]:
    return list(_conjuncts(f))


def _rewrite_atoms(f: Formula, fn) -> Formula:
    if isinstance(f, Bool):
        return f
    if isinstance(f, Atom):
        return fn(f)
    if isinstance(f, Not):
        return Not(_rewrite_atoms(f.body, fn))
    if isinstance(f, And):
        return And(tuple(_rewrite_atoms(p, fn) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(_rewrite_atoms(p, fn) for p in f.parts))
    raise EvalError(f"unexpected node under rewrite: {type(f).__name__}")


def _try_equality_shortcut(var: str, body: Formula) -> Formula | None:
    """exists var (c*var = t and R)  ==  (div c t) and R[c*var := t].

    Applies when some top-level conjunct is an equality containing var;
    every other atom is scaled by c (positive, so inequality directions
    survive) and the pinned value substituted.
    """
    conjuncts = _flatten_conjuncts(body)
    best: tuple[int, int, LinearTerm] | None = None  # (|c|, index, t)
    for idx, part in enumerate(conjuncts):
        if isinstance(part, Atom) and part.kind == EQ:
            g = part.left - part.right
            c = g.coeff(var)
            if c == 0:
                continue
            rest = g.drop(var)
            cc, tt = (c, -rest) if c > 0 else (-c, rest)
            if best is None or cc < best[0]:
                best = (cc, idx, tt)
    if best is None:
        return None
    c, chosen, t = best

    def rewrite(a: Atom) -> Formula:
        if a.kind == DIV:
            av = a.left.coeff(var)
            if av == 0:
                return a
            w = a.left.drop(var).scaled(c) + t.scaled(av)
            return Atom(DIV, w, ZERO, a.modulus * c)
        g = a.left - a.right
        av = g.coeff(var)
        if av == 0:
            return a
        g2 = g.drop(var).scaled(c) + t.scaled(av)
        return Atom(a.kind, g2, ZERO)

    rest_parts = [
        _rewrite_atoms(p, rewrite)
        for i, p in enumerate(conjuncts) if i != chosen
    ]
    return mk_and([Atom(DIV, t, ZERO, c)] + rest_parts)


def _solved_form(a: Atom, var: str, delta: int):
    """Normalize a var-atom after scaling the var coefficient to delta.

    Returns ('lower', s) for s < delta*var, ('upper', s) for
    delta*var < s, or ('div', m, t) for m | delta*var + t.
    """
    if a.kind == DIV:
        c = a.left.coeff(var)
        t = a.left.drop(var)
        fac = delta // abs(c)
        sign = 1 if c > 0 else -1
        return ("div", a.modulus * fac, t.scaled(sign * fac))
    # LT only, by NNF
    g = a.right - a.left  # atom  <=>  0 < g
    c = g.coeff(var)
    t = g.drop(var)
    if c > 0:
        return ("lower", t.scaled(-(delta // c)))
    return ("upper", t.scaled(delta // (-c)))


def _eliminate_exists(var: str, body: Formula, max_atoms: int,
                      max_coeff_bits: int) -> Formula:
    body = simplify(body)
    if var not in free_vars(body):
        return body

    shortcut = _try_equality_shortcut(var, body)
    if shortcut is not None:
        return simplify(shortcut)

    nnf_body = _nnf(body, var)

    def drop_cancelled(a: Atom) -> Formula:
        # var occurring on both sides with equal coefficients is not a
        # real occurrence; normalize it away so the case split sees only
        # atoms with a nonzero effective coefficient.
        if a.kind == LT and var in (a.left.vars() | a.right.vars()):
            g = a.right - a.left
            if g.coeff(var) == 0:
                return Atom(LT, ZERO, g)
        return a

    nnf_body = _rewrite_atoms(nnf_body, drop_cancelled)
    var_atoms = [a for a in dict.fromkeys(atoms_of(nnf_body))
                 if (a.left.coeff(var) if a.kind == DIV
                     else (a.right - a.left).coeff(var)) != 0]
    if not var_atoms:
        return simplify(nnf_body)

    delta = 1
    for a in var_atoms:
        g = a.left if a.kind == DIV else a.right - a.left
        delta = lcm(delta, abs(g.coeff(var)))

    solved = {a: _solved_form(a, var, delta) for a in var_atoms}
    period = delta
    lowers: dict[LinearTerm, None] = {}
    uppers: dict[LinearTerm, None] = {}
    worst_bits = bitlen(delta)
    for form in solved.values():
        if form[0] == "div":
            period = lcm(period, form[1])
            worst_bits = max(worst_bits, bitlen(form[1]), form[2].max_coeff_bits())
        elif form[0] == "lower":
            lowers[form[1]] = None
            worst_bits = max(worst_bits, form[1].max_coeff_bits())
        else:
            uppers[form[1]] = None
            worst_bits = max(worst_bits, form[1].max_coeff_bits())
    if worst_bits > max_coeff_bits:
        raise ResourceCapError("coefficient bits", max_coeff_bits, worst_bits)

    use_uppers = len(uppers) < len(lowers)
    boundary = list(uppers if use_uppers else lowers)
    n_atoms = count_atoms(nnf_body) + 1
    estimate = period * (1 + len(boundary)) * n_atoms
    if estimate > max_atoms:
        raise ResourceCapError("output atoms", max_atoms, estimate)

    def instantiate(witness: LinearTerm | None, offset: int) -> Formula:
        """witness=None means the periodic tail below all lower bounds
        (or above all upper bounds when use_uppers)."""
        if witness is None:
            w_div = LinearTerm.num(offset)
        else:
            w_div = witness.shifted(offset)

        def fn(a: Atom) -> Formula:
            form = solved.get(a)
            if form is None:
                return a
            tag = form[0]
            if tag == "div":
                return Atom(DIV, w_div + form[2], ZERO, form[1])
            if witness is None:
                dropped = "lower" if not use_uppers else "upper"
                return FALSE if tag == dropped else TRUE
            if tag == "lower":
                return Atom(LT, form[1], w_div)
            return Atom(LT, w_div, form[1])

        inst = _rewrite_atoms(nnf_body, fn)
        return mk_and([inst, Atom(DIV, w_div, ZERO, delta)])

    disjuncts: list[Formula] = []
    for j in range(1, period + 1):
        off = -j if use_uppers else j
        disjuncts.append(instantiate(None, off))
    for b in boundary:
        for j in range(1, period + 1):
            off = -j if use_uppers else j
            disjuncts.append(instantiate(b, off))
    return simplify(mk_or(disjuncts))


def eliminate_quantifiers(f: Formula, *, max_atoms: int | None = None,
                          max_coeff_bits: int = DEFAULT_MAX_COEFF_BITS) -> Formula:
    """Equivalent quantifier-free formula over the same free variables.

    Output may contain div atoms.  Raises ResourceCapError when an
    elimination step would exceed the atom-count cap (default 10**6,
    PAVC_MAX_ATOMS overrides) or the coefficient bit cap.
    """
    atoms_cap = resolve_max_atoms(max_atoms)

    def walk(g: Formula) -> Formula:
        if isinstance(g, (Bool, Atom)):
            return g
        if isinstance(g, Not):
            return simplify(Not(walk(g.body)))
        if isinstance(g, And):
            return simplify(And(tuple(walk(p) for p in g.parts)))
        if isinstance(g, Or):
            return simplify(Or(tuple(walk(p) for p in g.parts)))
        if isinstance(g, Exists):
            inner = walk(g.body)
            return _eliminate_exists(g.var, inner, atoms_cap, max_coeff_bits)
        if isinstance(g, Forall):
            inner = walk(g.body)
            dual = _eliminate_exists(g.var, simplify(Not(inner)),
                                     atoms_cap, max_coeff_bits)
            return simplify(Not(dual))
        raise EvalError(f"not a formula: {g!r}")

    result = simplify(walk(f))
    produced = count_atoms(result)
    if produced > atoms_cap:
        raise ResourceCapError("output atoms", atoms_cap, produced)
    return result


def decide(f: Formula, *, max_atoms: int | None = None,
           max_coeff_bits: int = DEFAULT_MAX_COEFF_BITS) -> bool:
    """Truth value of a sentence over the integers."""
    if free_vars(f):
        raise EvalError(f"not a sentence: free {sorted(free_vars(f))}")
    qf = eliminate_quantifiers(f, max_atoms=max_atoms,
                               max_coeff_bits=max_coeff_bits)
    return eval_ground(qf)
