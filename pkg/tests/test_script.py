"""The script language: tokens, parsing, canonical printing, execution."""

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
import hypothesis.strategies as st

from gradkernel import ScriptError, parse, print_script, run
from gradkernel.script import (
    Add,
    Div,
    Mul,
    Neg,
    Num,
    Pow,
    Sub,
    Sym,
    format_expr,
    tokenize,
)


def run_text(text, order=4):
    return run(parse(text), order)


def lines_of(text, order=4):
    return [out.lines for out in run_text(text, order).outputs]


def error_of(text, order=4):
    with pytest.raises(ScriptError) as exc_info:
        run_text(text, order)
    return exc_info.value


class TestTokens:
    def test_names_carry_trailing_primes(self):
        kinds = [(t.kind, t.text) for t in tokenize("x' psi'' _a1")]
        assert kinds == [
            ("NAME", "x'"),
            ("NAME", "psi''"),
            ("NAME", "_a1"),
            ("EOF", ""),
        ]

    def test_comments_vanish(self):
        toks = tokenize("x # to the end\n y")
        assert [t.text for t in toks] == ["x", "y", ""]

    def test_arrow_is_one_token(self):
        toks = tokenize("a->b")
        assert [t.text for t in toks] == ["a", "->", "b", ""]

    def test_bad_character_reports_position(self):
        with pytest.raises(ScriptError) as exc_info:
            tokenize("var u\n  deg ?")
        assert exc_info.value.line == 2
        assert exc_info.value.column == 7
        assert "unexpected character" in str(exc_info.value)


class TestParseFolding:
    def expr(self, text):
        return parse(f"let q = {text};").statements[0].expr

    def test_negated_literal_folds(self):
        assert self.expr("-3") == Num(Fraction(-3))

    def test_literal_quotient_folds(self):
        assert self.expr("6/4") == Num(Fraction(3, 2))
        assert self.expr("-6/4") == Num(Fraction(-3, 2))

    def test_literal_zero_division_is_a_parse_error(self):
        with pytest.raises(ScriptError, match="division by zero"):
            self.expr("1/0")

    def test_symbol_division_not_folded(self):
        assert self.expr("x / 2") == Div(Sym("x"), Num(Fraction(2)))

    def test_precedence_shape(self):
        assert self.expr("x + y * z") == Add(
            Sym("x"), Mul(Sym("y"), Sym("z"))
        )
        assert self.expr("(x + y) * z") == Mul(
            Add(Sym("x"), Sym("y")), Sym("z")
        )
        assert self.expr("x - y - z") == Sub(
            Sub(Sym("x"), Sym("y")), Sym("z")
        )
        assert self.expr("-x^2") == Neg(Pow(Sym("x"), 2))

    def test_positions_do_not_affect_equality(self):
        a = parse("let q = x + y;")
        b = parse("let  q =\n  x    + y ;  # comment")
        assert a == b


class TestPrinting:
    def roundtrip(self, text):
        script = parse(text)
        printed = print_script(script)
        assert parse(printed) == script
        assert print_script(parse(printed)) == printed
        return printed

    def test_expression_spacing(self):
        assert self.roundtrip("let q=x+y*z;") == "let q = x + y * z;\n"

    def test_needed_parens_survive(self):
        out = self.roundtrip("let q = (x + y) * z;")
        assert out == "let q = (x + y) * z;\n"

    def test_subtraction_parens(self):
        assert (
            self.roundtrip("let q = x - (y - z);")
            == "let q = x - (y - z);\n"
        )
        assert self.roundtrip("let q = x - y - z;") == "let q = x - y - z;\n"

    def test_folded_numbers_print_tight(self):
        assert self.roundtrip("let q = 1/2 * x;") == "let q = 1/2 * x;\n"
        assert self.roundtrip("let q = x * -3;") == "let q = x * (-3);\n"
        assert self.roundtrip("let q = -3 * x;") == "let q = -3 * x;\n"

    def test_power_parens(self):
        assert self.roundtrip("let q = x^-1;") == "let q = x^-1;\n"
        assert (
            self.roundtrip("let q = (x + y)^2;") == "let q = (x + y)^2;\n"
        )
        assert self.roundtrip("let q = (1/2)^2;") == "let q = (1/2)^2;\n"

    def test_full_feature_script_is_stable(self):
        text = (
            "base x;\n"
            "var xi deg 2;\n"
            "let f = x * xi + 1/2;\n"
            "morphism m {\n"
            "  xi -> x * xi;\n"
            "}\n"
            "atlas proj {\n"
            "  chart U0 {\n"
            "    base x laurent;\n"
            "    var xi deg 2;\n"
            "  }\n"
            "  chart U1 {\n"
            "    base y laurent;\n"
            "    var xi deg 2;\n"
            "  }\n"
            "  transition U0 U1 {\n"
            "    y -> x^-1;\n"
            "    xi -> x^-2 * xi;\n"
            "  }\n"
            "  transition U1 U0 {\n"
            "    x -> y^-1;\n"
            "    xi -> y^-2 * xi;\n"
            "  }\n"
            "  triple U0 U1 U0;\n"
            "}\n"
            "mul f, xi;\n"
            "apply m, xi;\n"
            "compose m, m;\n"
            "truncate f, 2;\n"
            "normalform xi;\n"
            "bigrade f;\n"
            "hilbert a=(2) b=(3) c=0;\n"
            "cocycle proj;\n"
            "obstruction N k=2 l=1;\n"
        )
        assert print_script(parse(text)) == text


def exprs():
    atoms = st.one_of(
        st.builds(
            Num,
            st.fractions(
                min_value=-6, max_value=6, max_denominator=4
            ),
        ),
        st.builds(Sym, st.sampled_from(["x", "y", "u", "v"])),
    )

    def extend(children):
        safe = children.filter(
            lambda e: not (isinstance(e, Num) and e.value == 0)
        )
        return st.one_of(
            st.builds(Neg, children),
            st.builds(Add, children, children),
            st.builds(Sub, children, children),
            st.builds(Mul, children, children),
            st.builds(Div, children, safe),
            st.builds(Pow, children, st.integers(-3, 3)),
        )

    return st.recursive(atoms, extend, max_leaves=12)


class TestPrinterCanonical:
    @given(exprs())
    @settings(max_examples=200)
    def test_print_parse_fixed_point(self, tree):
        # raw generated trees may normalize once (literal folding); after
        # that the printer and parser must be exact inverses
        try:
            script = parse(f"let q = {format_expr(tree)};")
        except ScriptError:
            assume(False)
        printed = print_script(script)
        reparsed = parse(printed)
        assert reparsed == script
        assert print_script(reparsed) == printed


class TestStatementGuards:
    def test_degree_zero_rejected_at_parse(self):
        with pytest.raises(ScriptError, match="degree 0"):
            parse("var u deg 0;")

    def test_truncate_order_positive(self):
        with pytest.raises(ScriptError, match="order must be positive"):
            parse("truncate x, 0;")

    def test_hilbert_weights_positive(self):
        with pytest.raises(ScriptError, match="weights must be positive"):
            parse("hilbert a=(0) b=(2) c=0;")

    def test_obstruction_case_checked(self):
        with pytest.raises(ScriptError, match="case must be N or Z"):
            parse("obstruction Q k=1 l=1;")

    def test_duplicate_declaration(self):
        err = error_of("var u deg 2;\nvar u deg 4;\nmul u, u;")
        assert "declared twice" in err.message
        assert err.line == 2

    def test_use_before_declaration(self):
        err = error_of("mul u, u;\nvar u deg 2;")
        assert "used before its declaration" in err.message
        assert err.line == 1

    def test_unknown_symbol(self):
        err = error_of("var u deg 2;\nmul u, nope;")
        assert err.message == "unknown symbol 'nope'"

    def test_binding_shadowing_rejected(self):
        err = error_of("var u deg 2;\nlet u = 3;\nmul u, u;")
        assert "already in use" in err.message
        err = error_of("var u deg 2;\nlet f = u;\nlet f = 2;\nmul f, f;")
        assert "already in use" in err.message

    def test_wrong_kind_lookup(self):
        err = error_of("var u deg 2;\nlet f = u;\napply f, u;")
        assert err.message == "'f' is not a morphism"

    def test_truncate_beyond_script_order(self):
        err = error_of("var u deg 2;\ntruncate u, 9;", order=4)
        assert "script order is 4" in err.message


class TestMorphismChecks:
    def test_image_degree_enforced(self):
        err = error_of(
            "var u deg 2;\n"
            "morphism m {\n"
            "  u -> u + 1;\n"
            "}\n"
            "apply m, u;"
        )
        assert (
            err.message
            == "image of 'u' must be homogeneous of degree 2, "
            "found degrees [0, 2]"
        )

    def test_unknown_image_symbol(self):
        err = error_of("var u deg 2;\nmorphism m {\n  w -> u;\n}\n")
        assert err.message == "unknown symbol 'w'"

    def test_double_mapping(self):
        err = error_of(
            "var u deg 2;\nmorphism m {\n  u -> u;\n  u -> 2 * u;\n}\n"
        )
        assert "mapped twice" in err.message

    def test_transition_body_sees_only_source_chart(self):
        err = error_of(
            "atlas a {\n"
            "  chart A {\n"
            "    base x laurent;\n"
            "    var xi deg 2;\n"
            "  }\n"
            "  chart B {\n"
            "    base y laurent;\n"
            "    var xi deg 2;\n"
            "  }\n"
            "  transition A B {\n"
            "    y -> y^-1;\n"
            "    xi -> xi;\n"
            "  }\n"
            "}\n"
        )
        assert err.message == "unknown symbol 'y'"


class TestOddLint:
    def test_literal_square_rejected(self):
        err = error_of("var e deg 1;\nmul e^2, 1;")
        assert err.message == "odd symbol 'e' raised to power 2"

    def test_literal_repetition_rejected(self):
        err = error_of("var e deg 1;\nvar u deg 2;\nmul e * u * e, 1;")
        assert err.message == "odd symbol 'e' repeated in a product"

    def test_hidden_repetition_is_zero_not_error(self):
        out = lines_of("var e deg 1;\nlet f = e;\nmul f, e;")
        assert out == [["0"]]


class TestEvaluation:
    def test_mul(self):
        assert lines_of("var u deg 2;\nmul u + 1, u - 1;") == [["-1 + u^2"]]

    def test_division_rules(self):
        assert lines_of("var u deg 2;\nmul u / 2, 2;") == [["u"]]
        err = error_of("var u deg 2;\nmul u / (u + 1), 1;")
        assert "nonzero rational constants" in err.message
        err = error_of("base x;\nlet z = x - x;\nmul x / z, 1;")
        assert err.message == "division by zero"

    def test_negative_power_rules(self):
        assert lines_of("base x;\nmul x^-2, x;") == [["x^-1"]]
        err = error_of("base x;\nmul (x + 1)^-1, 1;")
        assert "single invertible base monomial" in err.message

    def test_apply_and_compose(self):
        text = (
            "base x;\n"
            "var zeta deg -1;\n"
            "var psi deg 1;\n"
            "morphism shear {\n"
            "  x -> x + zeta * psi;\n"
            "}\n"
            "apply shear, x^2;\n"
            "apply shear, x^-1;\n"
            "compose shear, shear;\n"
        )
        out = lines_of(text)
        assert out[0] == ["x^2 + 2*x*zeta*psi"]
        assert out[1] == ["x^-1 - x^-2*zeta*psi"]
        assert out[2] == [
            "{",
            "  x -> x + 2*zeta*psi;",
            "  zeta -> zeta;",
            "  psi -> psi;",
            "}",
        ]

    def test_truncate_bigrade_normalform(self):
        text = (
            "var u deg 2;\n"
            "var em deg -2;\n"
            "truncate u * em + u, 2;\n"
            "bigrade u * em + u;\n"
            "bigrade 0;\n"
            "normalform u + u^2 * em;\n"
        )
        assert lines_of(text) == [
            ["u"],
            ["(2,0) u", "(2,2) u*em"],
            ["0"],
            ["basis {u*em}", "lead u: 1 + (u*em)"],
        ]

    def test_normalform_needs_one_degree(self):
        err = error_of("var u deg 2;\nnormalform u + 1;")
        assert "mixes degrees" in err.message

    def test_hilbert(self):
        assert lines_of("hilbert a=(2) b=(3) c=0;") == [["{(3;2)}"]]
        assert lines_of("hilbert a=(2) b=(3) c=1;") == [["{(2;1)}"]]

    def test_obstruction(self):
        assert lines_of("obstruction N k=2 l=1;") == [
            ["dim = 2, nontrivial (2k-l=3 >= 2)"]
        ]
        assert lines_of("obstruction Z k=1 l=1;") == [
            ["dim = 0, trivial (k+l=2 < 4)"]
        ]


ATLAS_TEXT = (
    "atlas proj {\n"
    "  chart U0 {\n"
    "    base x laurent;\n"
    "    var xi deg 2;\n"
    "  }\n"
    "  chart U1 {\n"
    "    base y laurent;\n"
    "    var xi deg 2;\n"
    "  }\n"
    "  transition U0 U1 {\n"
    "    y -> x^-1;\n"
    "    xi -> x^-2 * xi;\n"
    "  }\n"
    "  transition U1 U0 {\n"
    "    x -> y^-1;\n"
    "    xi -> y^-2 * xi;\n"
    "  }\n"
    "  triple U0 U1 U0;\n"
    "  triple U1 U0 U1;\n"
    "}\n"
    "cocycle proj;\n"
)


class TestCocycleCommand:
    def test_passing_atlas(self):
        result = run_text(ATLAS_TEXT)
        assert result.outputs[0].lines == [
            "transitions: pass",
            "triple (U0,U1,U0): pass",
            "triple (U1,U0,U1): pass",
            "cocycle: pass",
        ]
        assert not result.any_check_failed

    def test_failing_atlas(self):
        broken = ATLAS_TEXT.replace("xi -> y^-2 * xi;", "xi -> y^-1 * xi;")
        result = run_text(broken)
        assert result.outputs[0].lines == [
            "transitions: fail (U0,U1) xi; (U1,U0) xi",
            "triple (U0,U1,U0): fail xi",
            "triple (U1,U0,U1): fail xi",
            "cocycle: fail",
        ]
        assert result.any_check_failed

    def test_unlocalized_chart_rejected(self):
        unlocalized = ATLAS_TEXT.replace("base x laurent;", "base x;")
        err = error_of(unlocalized)
        assert "not localized" in err.message

    def test_unknown_chart_in_transition(self):
        err = error_of(
            "atlas a {\n"
            "  chart A {\n"
            "    base x;\n"
            "  }\n"
            "  transition A B {\n"
            "    y -> x;\n"
            "  }\n"
            "}\n"
        )
        assert err.message == "unknown chart 'B'"
