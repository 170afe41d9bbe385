"""Parser, printer, substitution, and shape metrics."""

import random

import pytest

from pavc.formula import (
    DIV,
    EQ,
    FALSE,
    LE,
    LT,
    TRUE,
    ZERO,
    And,
    Atom,
    BindingError,
    Exists,
    Forall,
    FormulaSyntaxError,
    LinearTerm,
    Not,
    Or,
    PartitionedFormula,
    FormulaError,
    ShadowingError,
    UnboundVariableError,
    bitlen,
    bound_vars,
    free_vars,
    is_quantifier_free,
    mk_and,
    mk_or,
    parse,
    parse_partitioned,
    print_partitioned,
    shape,
    subst_term,
    substitute,
    to_text,
)
from pavc.fuzz import random_qf, random_sentence


def test_bitlen_convention():
    # |n|.bit_length() + 1: sign bit plus magnitude bits
    assert bitlen(0) == 1
    assert bitlen(1) == 2
    assert bitlen(-1) == 2
    assert bitlen(7) == 4
    assert bitlen(8) == 5
    assert bitlen(-8) == 5


class TestLinearTerm:
    def test_of_merges_and_drops_zeros(self):
        t = LinearTerm.of([("x", 2), ("y", 0), ("x", -2), ("z", 3)], 5)
        assert t == LinearTerm.of({"z": 3}, 5)
        assert t.coeff("x") == 0
        assert t.vars() == frozenset({"z"})

    def test_arithmetic_matches_evaluation(self):
        rng = random.Random(101)
        for _ in range(200):
            a = LinearTerm.of({v: rng.randint(-9, 9) for v in "xyz"},
                              rng.randint(-20, 20))
            b = LinearTerm.of({v: rng.randint(-9, 9) for v in "xyz"},
                              rng.randint(-20, 20))
            k = rng.randint(-6, 6)
            env = {v: rng.randint(-50, 50) for v in "xyz"}
            assert (a + b).value(env) == a.value(env) + b.value(env)
            assert (a - b).value(env) == a.value(env) - b.value(env)
            assert (-a).value(env) == -a.value(env)
            assert a.scaled(k).value(env) == k * a.value(env)
            assert a.shifted(k).value(env) == a.value(env) + k

    def test_substitute_into_term(self):
        t = LinearTerm.of({"x": 3, "y": 1}, 2)
        r = LinearTerm.of({"y": 2}, -1)
        out = t.substitute("x", r)
        # 3*(2y - 1) + y + 2 = 7y - 1
        assert out == LinearTerm.of({"y": 7}, -1)

    def test_is_ground(self):
        assert LinearTerm.num(4).is_ground
        assert not LinearTerm.var("x").is_ground


class TestParsing:
    def test_normalizing_parse(self):
        f = parse("(<= (+ (* 1 x) 0) (+ (* 0 x) 5))")
        assert f == Atom(LE, LinearTerm.var("x"), LinearTerm.num(5))
        assert to_text(f) == "(<= x 5)"

    def test_boolean_constants_reserved(self):
        assert parse("T") is TRUE
        assert parse("F") is FALSE
        with pytest.raises(FormulaSyntaxError):
            parse("(< T 1)")

    def test_connectives_and_quantifiers(self):
        f = parse("(and (< x y) (or (= x 0) (not (<= y 3))))")
        assert isinstance(f, And)
        g = parse("(forall x (exists y (< x y)))")
        assert isinstance(g, Forall)
        assert free_vars(g) == frozenset()
        assert bound_vars(g) == {"x", "y"}

    def test_shadowing_rejected(self):
        with pytest.raises(ShadowingError):
            parse("(exists x (exists x T))")
        with pytest.raises(ShadowingError):
            parse("(and (< x 1) (exists x (< x 2)))")

    def test_div_gate(self):
        with pytest.raises(FormulaSyntaxError):
            parse("(div 2 x)")
        f = parse("(div 2 x)", allow_div=True)
        assert f == Atom(DIV, LinearTerm.var("x"), ZERO, 2)

    def test_div_needs_positive_modulus(self):
        with pytest.raises(FormulaSyntaxError):
            parse("(div 0 x)", allow_div=True)
        with pytest.raises(FormulaError):
            Atom(DIV, LinearTerm.var("x"), ZERO, -3)

    def test_syntax_error_carries_position(self):
        with pytest.raises(FormulaSyntaxError) as err:
            parse("(and (< x 1)\n  (< y ))")
        assert err.value.line == 2

    def test_declared_free_enforced(self):
        with pytest.raises(UnboundVariableError):
            parse("(< x y)", declared_free=["x"])
        parse("(< x y)", declared_free=["x", "y", "z"])

    def test_trailing_input_rejected(self):
        with pytest.raises(FormulaSyntaxError):
            parse("(< x 1) (< x 2)")

    def test_empty_input_rejected(self):
        with pytest.raises(FormulaSyntaxError):
            parse("   ")

    def test_single_part_connective_collapses(self):
        assert parse("(and (< x 1))") == parse("(< x 1)")
        assert parse("(or (< x 1))") == parse("(< x 1)")
        # the raw constructor still insists on two parts
        with pytest.raises(FormulaError):
            And((TRUE,))


def test_roundtrip_fuzz_quantifier_free():
    rng = random.Random(2024)
    for _ in range(300):
        f = random_qf(rng, ["x", "y"], allow_div=True)
        assert parse(to_text(f), allow_div=True) == f


def test_roundtrip_fuzz_sentences():
    for i in range(200):
        rng = random.Random(5555 + i)
        s = random_sentence(rng)
        assert parse(to_text(s)) == s


class TestSubstitution:
    def test_fold_constants(self):
        f = parse("(and (< x y) (exists z (= y (+ z z))))")
        g = substitute(f, {"x": 3})
        assert free_vars(g) == {"y"}
        assert to_text(g) == "(and (< 3 y) (exists z (= y (* 2 z))))"

    def test_binding_bound_var_rejected(self):
        f = parse("(exists z (< z x))")
        with pytest.raises(BindingError):
            substitute(f, {"z": 1})
        with pytest.raises(BindingError):
            substitute(f, {"nope": 1})

    def test_subst_term_skips_shadowed_scope(self):
        # var bound inside is left untouched
        f = Exists("x", Atom(LT, LinearTerm.var("x"), LinearTerm.num(3)))
        assert subst_term(f, "x", LinearTerm.num(9)) == f


class TestPartition:
    def test_parse_print_roundtrip(self):
        text = "#objects: x\n#params: y\n(< x y)\n"
        pf = parse_partitioned(text)
        assert pf.object_vars == ("x",)
        assert pf.param_vars == ("y",)
        assert print_partitioned(pf) == text

    def test_comment_lines_skipped(self):
        pf = parse_partitioned(
            "# emitted artifact\n#objects: x\n#params: y\n# body\n(< x y)\n")
        assert pf.formula == parse("(< x y)")

    def test_partition_must_cover_free_vars(self):
        with pytest.raises(FormulaError):
            PartitionedFormula(parse("(< x y)"), ("x",), ())
        with pytest.raises(FormulaError):
            PartitionedFormula(parse("(< x 1)"), ("x",), ("ghost",))
        with pytest.raises(FormulaError):
            PartitionedFormula(parse("(< x y)"), ("x", "y"), ("y",))

    def test_missing_headers_rejected(self):
        with pytest.raises(FormulaSyntaxError):
            parse_partitioned("(< x y)\n")


class TestShape:
    def test_atom_counting(self):
        # <=/< count 1, =/div count 2
        f = parse("(and (<= x 1) (< x 2) (= x 3))")
        assert shape(f).num_inequalities == 4
        g = parse("(div 4 x)", allow_div=True)
        assert shape(g).num_inequalities == 2

    def test_total_vars_counts_distinct_names(self):
        f = parse("(or (exists z (< z x)) (exists z (< x z)))")
        assert shape(f).total_vars == 2

    def test_alternations(self):
        assert shape(parse("(exists x (exists y (< x y)))")) \
            .num_quantifier_alternations == 0
        assert shape(parse("(forall x (exists y (< x y)))")) \
            .num_quantifier_alternations == 1
        # negation flips polarity: exists not exists is one alternation
        f = parse("(exists x (not (exists y (< x y))))")
        assert shape(f).num_quantifier_alternations == 1
        g = parse("(not (exists x (not (forall y (< x y)))))")
        assert shape(g).num_quantifier_alternations == 0

    def test_phi_additivity(self):
        a = parse("(< x 1)")
        b = parse("(<= y 2)")
        both = And((a, b))
        assert shape(both).phi_bits == 1 + shape(a).phi_bits + shape(b).phi_bits
        quant = Exists("x", a)
        assert shape(quant).phi_bits == 2 + shape(a).phi_bits

    def test_phi_term_costs(self):
        # (< x 1): 1 (op) + [bitlen(1)+1] (x entry) + bitlen(1) (const 1)
        f = parse("(< x 1)")
        assert shape(f).phi_bits == 1 + (bitlen(1) + 1) + bitlen(1)
        # zero constant next to coefficients costs nothing
        g = parse("(< (* 2 x) (+ (* 1 y) 0))")
        assert shape(g).phi_bits == 1 + (bitlen(2) + 1) + (bitlen(1) + 1)

    def test_is_short_thresholds(self):
        f = parse("(exists x (< x y))")
        rep = shape(f)
        assert rep.is_short(10, 18)
        assert not rep.is_short(1, 18)


def test_mk_connective_collapse():
    a = parse("(< x 1)")
    assert mk_and([]) is TRUE
    assert mk_or([]) is FALSE
    assert mk_and([a]) == a
    assert mk_or([a]) == a
    assert isinstance(mk_and([a, parse("(< x 2)")]), And)
