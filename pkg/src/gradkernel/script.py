"""The declaration language: parsing, printing, and execution.

A script declares one ambient variable table (``var``/``base``), binds series
and morphisms by name, optionally declares atlases with their own per-chart
tables, and runs commands.  Parsing produces a plain AST whose equality
ignores source positions, so pretty-printing and re-parsing gives back an
equal Script; the printer is the one canonical formatter.

Scope rules: symbol declarations may appear anywhere but must precede their
first use; bindings and symbols share one namespace.  Transition bodies see
only their source chart's symbols.

The evaluator is strict about two things scripts get no leeway on: morphism
images must be homogeneous of the declared degree, and a literal product or
power that repeats an odd symbol is rejected rather than silently evaluated
to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .atlas import (
    Atlas,
    Chart,
    LineBundleSpec,
    check_cocycle,
    obstruction_condition,
    obstruction_dimension,
    verify_transitions,
)
from .bigrading import associated_graded
from .coefficients import Coefficient
from .diophantine import hilbert_basis, minimal_inhomogeneous
from .errors import GradedAlgebraError, ScriptError
from .grading import VariableTable
from .morphisms import (
    GradedMorphism,
    check_degree_preserving,
    compose,
    pullback,
)
from .normalform import to_normal_form
from .render import (
    format_bigraded,
    format_morphism,
    format_normal_form,
    format_series,
    format_solution_set,
)
from .series import GradedSeries, truncate

# -- tokens ----------------------------------------------------------------

_PUNCT = ("->", "+", "-", "*", "/", "^", "=", ";", ",", "(", ")", "{", "}")


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, INT, PUNCT, EOF
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("INT", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            while j < n and source[j] == "'":
                j += 1
            tokens.append(Token("NAME", source[i:j], line, col))
            col += j - i
            i = j
            continue
        two = source[i : i + 2]
        if two == "->":
            tokens.append(Token("PUNCT", two, line, col))
            i += 2
            col += 2
            continue
        if ch in "+-*/^=;,(){}":
            tokens.append(Token("PUNCT", ch, line, col))
            i += 1
            col += 1
            continue
        raise ScriptError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


# -- AST -------------------------------------------------------------------


def _pos():
    return field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Num:
    value: Fraction
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class Sym:
    name: str
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class Neg:
    operand: object
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class Add:
    left: object
    right: object
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class Sub:
    left: object
    right: object
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class Mul:
    left: object
    right: object
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class Div:
    left: object
    right: object
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class VarDecl:
    name: str
    degree: int
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class BaseDecl:
    name: str
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class LetStmt:
    name: str
    expr: object
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class Mapping:
    symbol: str
    expr: object
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class MorphismStmt:
    name: str
    mappings: tuple
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class ChartBaseDecl:
    name: str
    laurent: bool
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class ChartStmt:
    name: str
    items: tuple
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class TransitionStmt:
    source: str
    target: str
    mappings: tuple
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class TripleStmt:
    names: tuple
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class AtlasStmt:
    name: str
    items: tuple
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class MulCmd:
    left: object
    right: object
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class ApplyCmd:
    morphism: str
    expr: object
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class ComposeCmd:
    first: str
    second: str
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class TruncateCmd:
    expr: object
    order: int
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class NormalFormCmd:
    expr: object
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class BigradeCmd:
    expr: object
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class HilbertCmd:
    a: tuple
    b: tuple
    c: int
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class CocycleCmd:
    atlas: str
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class ObstructionCmd:
    case: str
    k: int
    l: int
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class Script:
    statements: tuple


_COMMAND_WORDS = {
    "mul",
    "apply",
    "compose",
    "truncate",
    "normalform",
    "hilbert",
    "bigrade",
    "cocycle",
    "obstruction",
}


# -- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "EOF":
            self.i += 1
        return t

    def error(self, message: str, tok: Token | None = None):
        t = tok or self.tok
        raise ScriptError(message, t.line, t.col)

    def expect_punct(self, text: str) -> Token:
        t = self.tok
        if t.kind != "PUNCT" or t.text != text:
            self.error(f"expected {text!r}, found {t.text or 'end of input'!r}")
        return self.advance()

    def expect_name(self, what: str = "name") -> Token:
        t = self.tok
        if t.kind != "NAME":
            self.error(f"expected {what}, found {t.text or 'end of input'!r}")
        return self.advance()

    def expect_int(self) -> tuple[int, Token]:
        sign = 1
        t = self.tok
        if t.kind == "PUNCT" and t.text == "-":
            self.advance()
            sign = -1
        t = self.tok
        if t.kind != "INT":
            self.error(f"expected integer, found {t.text or 'end of input'!r}")
        self.advance()
        return sign * int(t.text), t

    def at_punct(self, text: str) -> bool:
        return self.tok.kind == "PUNCT" and self.tok.text == text

    def at_name(self, text: str) -> bool:
        return self.tok.kind == "NAME" and self.tok.text == text

    # expressions

    def parse_expr(self):
        node = self.parse_term()
        while self.tok.kind == "PUNCT" and self.tok.text in ("+", "-"):
            op = self.advance()
            right = self.parse_term()
            cls = Add if op.text == "+" else Sub
            node = cls(node, right, line=op.line, col=op.col)
        return node

    def parse_term(self):
        node = self.parse_unary()
        while self.tok.kind == "PUNCT" and self.tok.text in ("*", "/"):
            op = self.advance()
            right = self.parse_unary()
            if op.text == "/":
                node = self._fold_div(node, right, op)
            else:
                node = Mul(node, right, line=op.line, col=op.col)
        return node

    @staticmethod
    def _fold_div(left, right, op: Token):
        if isinstance(left, Num) and isinstance(right, Num):
            if right.value == 0:
                raise ScriptError("division by zero", op.line, op.col)
            return Num(left.value / right.value, line=op.line, col=op.col)
        return Div(left, right, line=op.line, col=op.col)

    def parse_unary(self):
        if self.at_punct("-"):
            op = self.advance()
            inner = self.parse_unary()
            if isinstance(inner, Num):
                return Num(-inner.value, line=op.line, col=op.col)
            return Neg(inner, line=op.line, col=op.col)
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        if self.at_punct("^"):
            op = self.advance()
            expo, _ = self.expect_int()
            return Pow(base, expo, line=op.line, col=op.col)
        return base

    def parse_atom(self):
        t = self.tok
        if t.kind == "INT":
            self.advance()
            return Num(Fraction(int(t.text)), line=t.line, col=t.col)
        if t.kind == "NAME":
            self.advance()
            return Sym(t.text, line=t.line, col=t.col)
        if self.at_punct("("):
            self.advance()
            node = self.parse_expr()
            self.expect_punct(")")
            return node
        self.error(
            f"expected an expression, found {t.text or 'end of input'!r}"
        )

    # statements

    def parse_script(self) -> Script:
        statements = []
        while self.tok.kind != "EOF":
            statements.append(self.parse_statement())
        return Script(tuple(statements))

    def parse_statement(self):
        t = self.tok
        if t.kind != "NAME":
            self.error(f"expected a statement, found {t.text!r}")
        word = t.text
        if word == "var":
            return self.parse_var()
        if word == "base":
            return self.parse_base()
        if word == "let":
            return self.parse_let()
        if word == "morphism":
            return self.parse_morphism()
        if word == "atlas":
            return self.parse_atlas()
        if word in _COMMAND_WORDS:
            return self.parse_command()
        self.error(f"unknown statement {word!r}")

    def parse_var(self):
        t = self.advance()
        name = self.expect_name("symbol name").text
        if not self.at_name("deg"):
            self.error("expected 'deg'")
        self.advance()
        degree, dt = self.expect_int()
        if degree == 0:
            self.error("graded symbols cannot have degree 0", dt)
        self.expect_punct(";")
        return VarDecl(name, degree, line=t.line, col=t.col)

    def parse_base(self):
        t = self.advance()
        name = self.expect_name("symbol name").text
        self.expect_punct(";")
        return BaseDecl(name, line=t.line, col=t.col)

    def parse_let(self):
        t = self.advance()
        name = self.expect_name("binding name").text
        self.expect_punct("=")
        expr = self.parse_expr()
        self.expect_punct(";")
        return LetStmt(name, expr, line=t.line, col=t.col)

    def parse_mapping_block(self) -> tuple:
        self.expect_punct("{")
        mappings = []
        while not self.at_punct("}"):
            sym = self.expect_name("symbol name")
            self.expect_punct("->")
            expr = self.parse_expr()
            self.expect_punct(";")
            mappings.append(
                Mapping(sym.text, expr, line=sym.line, col=sym.col)
            )
        self.expect_punct("}")
        return tuple(mappings)

    def parse_morphism(self):
        t = self.advance()
        name = self.expect_name("morphism name").text
        mappings = self.parse_mapping_block()
        return MorphismStmt(name, mappings, line=t.line, col=t.col)

    def parse_atlas(self):
        t = self.advance()
        name = self.expect_name("atlas name").text
        self.expect_punct("{")
        items = []
        while not self.at_punct("}"):
            w = self.tok
            if w.kind != "NAME":
                self.error(f"expected an atlas item, found {w.text!r}")
            if w.text == "chart":
                items.append(self.parse_chart())
            elif w.text == "transition":
                self.advance()
                src = self.expect_name("chart name").text
                dst = self.expect_name("chart name").text
                mappings = self.parse_mapping_block()
                items.append(
                    TransitionStmt(src, dst, mappings, line=w.line, col=w.col)
                )
            elif w.text == "triple":
                self.advance()
                names = tuple(
                    self.expect_name("chart name").text for _ in range(3)
                )
                self.expect_punct(";")
                items.append(TripleStmt(names, line=w.line, col=w.col))
            else:
                self.error(f"unknown atlas item {w.text!r}")
        self.expect_punct("}")
        return AtlasStmt(name, tuple(items), line=t.line, col=t.col)

    def parse_chart(self):
        t = self.advance()
        name = self.expect_name("chart name").text
        self.expect_punct("{")
        items = []
        while not self.at_punct("}"):
            w = self.tok
            if w.kind == "NAME" and w.text == "base":
                self.advance()
                sym = self.expect_name("symbol name").text
                laurent = False
                if self.at_name("laurent"):
                    self.advance()
                    laurent = True
                self.expect_punct(";")
                items.append(
                    ChartBaseDecl(sym, laurent, line=w.line, col=w.col)
                )
            elif w.kind == "NAME" and w.text == "var":
                items.append(self.parse_var())
            else:
                self.error(f"expected a chart declaration, found {w.text!r}")
        self.expect_punct("}")
        return ChartStmt(name, tuple(items), line=t.line, col=t.col)

    def parse_command(self):
        t = self.advance()
        word = t.text
        if word == "mul":
            left = self.parse_expr()
            self.expect_punct(",")
            right = self.parse_expr()
            self.expect_punct(";")
            return MulCmd(left, right, line=t.line, col=t.col)
        if word == "apply":
            name = self.expect_name("morphism name").text
            self.expect_punct(",")
            expr = self.parse_expr()
            self.expect_punct(";")
            return ApplyCmd(name, expr, line=t.line, col=t.col)
        if word == "compose":
            first = self.expect_name("morphism name").text
            self.expect_punct(",")
            second = self.expect_name("morphism name").text
            self.expect_punct(";")
            return ComposeCmd(first, second, line=t.line, col=t.col)
        if word == "truncate":
            expr = self.parse_expr()
            self.expect_punct(",")
            order, ot = self.expect_int()
            if order < 1:
                self.error("truncation order must be positive", ot)
            self.expect_punct(";")
            return TruncateCmd(expr, order, line=t.line, col=t.col)
        if word == "normalform":
            expr = self.parse_expr()
            self.expect_punct(";")
            return NormalFormCmd(expr, line=t.line, col=t.col)
        if word == "bigrade":
            expr = self.parse_expr()
            self.expect_punct(";")
            return BigradeCmd(expr, line=t.line, col=t.col)
        if word == "hilbert":
            a = self.parse_labeled_tuple("a")
            b = self.parse_labeled_tuple("b")
            if not self.at_name("c"):
                self.error("expected 'c'")
            self.advance()
            self.expect_punct("=")
            c, _ = self.expect_int()
            self.expect_punct(";")
            return HilbertCmd(a, b, c, line=t.line, col=t.col)
        if word == "cocycle":
            name = self.expect_name("atlas name").text
            self.expect_punct(";")
            return CocycleCmd(name, line=t.line, col=t.col)
        if word == "obstruction":
            case = self.expect_name("case (N or Z)")
            if case.text not in ("N", "Z"):
                self.error("case must be N or Z", case)
            for label in ("k", "l"):
                if not self.at_name(label):
                    self.error(f"expected '{label}'")
                self.advance()
                self.expect_punct("=")
                if label == "k":
                    k, _ = self.expect_int()
                else:
                    l, _ = self.expect_int()
            self.expect_punct(";")
            return ObstructionCmd(case.text, k, l, line=t.line, col=t.col)
        self.error(f"unknown command {word!r}", t)

    def parse_labeled_tuple(self, label: str) -> tuple:
        if not self.at_name(label):
            self.error(f"expected '{label}'")
        self.advance()
        self.expect_punct("=")
        self.expect_punct("(")
        values = []
        if not self.at_punct(")"):
            v, vt = self.expect_int()
            if v < 1:
                self.error("weights must be positive", vt)
            values.append(v)
            while self.at_punct(","):
                self.advance()
                v, vt = self.expect_int()
                if v < 1:
                    self.error("weights must be positive", vt)
                values.append(v)
        self.expect_punct(")")
        return tuple(values)


def parse(source: str) -> Script:
    return _Parser(tokenize(source)).parse_script()


# -- printer ---------------------------------------------------------------


def _atomic_num(e) -> bool:
    return (
        isinstance(e, Num)
        and e.value >= 0
        and Fraction(e.value).denominator == 1
    )


def _prec(e) -> int:
    if isinstance(e, (Add, Sub)):
        return 1
    if isinstance(e, (Mul, Div)):
        return 2
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Pow):
        return 4
    if isinstance(e, Num) and not _atomic_num(e):
        return 2
    return 5


def format_expr(e, prec: int = 0) -> str:
    if isinstance(e, Num):
        v = Fraction(e.value)
        text = (
            str(v.numerator)
            if v.denominator == 1
            else f"{v.numerator}/{v.denominator}"
        )
    elif isinstance(e, Sym):
        text = e.name
    elif isinstance(e, Neg):
        text = "-" + format_expr(e.operand, 3)
    elif isinstance(e, Add):
        text = f"{format_expr(e.left, 1)} + {format_expr(e.right, 2)}"
    elif isinstance(e, Sub):
        text = f"{format_expr(e.left, 1)} - {format_expr(e.right, 2)}"
    elif isinstance(e, Mul):
        text = f"{format_expr(e.left, 2)} * {format_expr(e.right, 3)}"
    elif isinstance(e, Div):
        text = f"{format_expr(e.left, 2)} / {format_expr(e.right, 3)}"
    elif isinstance(e, Pow):
        if isinstance(e.base, Sym) or _atomic_num(e.base):
            base = format_expr(e.base, 5)
        else:
            base = f"({format_expr(e.base)})"
        text = f"{base}^{e.exponent}"
    else:
        raise TypeError(f"not an expression node: {e!r}")
    if _prec(e) < prec:
        return f"({text})"
    return text


def _print_mappings(mappings, indent: str) -> list[str]:
    return [
        f"{indent}{m.symbol} -> {format_expr(m.expr)};" for m in mappings
    ]


def print_script(script: Script) -> str:
    lines = []
    for s in script.statements:
        if isinstance(s, VarDecl):
            lines.append(f"var {s.name} deg {s.degree};")
        elif isinstance(s, BaseDecl):
            lines.append(f"base {s.name};")
        elif isinstance(s, LetStmt):
            lines.append(f"let {s.name} = {format_expr(s.expr)};")
        elif isinstance(s, MorphismStmt):
            lines.append(f"morphism {s.name} {{")
            lines.extend(_print_mappings(s.mappings, "  "))
            lines.append("}")
        elif isinstance(s, AtlasStmt):
            lines.append(f"atlas {s.name} {{")
            for item in s.items:
                if isinstance(item, ChartStmt):
                    lines.append(f"  chart {item.name} {{")
                    for decl in item.items:
                        if isinstance(decl, ChartBaseDecl):
                            flag = " laurent" if decl.laurent else ""
                            lines.append(f"    base {decl.name}{flag};")
                        else:
                            lines.append(
                                f"    var {decl.name} deg {decl.degree};"
                            )
                    lines.append("  }")
                elif isinstance(item, TransitionStmt):
                    lines.append(
                        f"  transition {item.source} {item.target} {{"
                    )
                    lines.extend(_print_mappings(item.mappings, "    "))
                    lines.append("  }")
                else:
                    lines.append(f"  triple {' '.join(item.names)};")
            lines.append("}")
        elif isinstance(s, MulCmd):
            lines.append(
                f"mul {format_expr(s.left)}, {format_expr(s.right)};"
            )
        elif isinstance(s, ApplyCmd):
            lines.append(f"apply {s.morphism}, {format_expr(s.expr)};")
        elif isinstance(s, ComposeCmd):
            lines.append(f"compose {s.first}, {s.second};")
        elif isinstance(s, TruncateCmd):
            lines.append(f"truncate {format_expr(s.expr)}, {s.order};")
        elif isinstance(s, NormalFormCmd):
            lines.append(f"normalform {format_expr(s.expr)};")
        elif isinstance(s, BigradeCmd):
            lines.append(f"bigrade {format_expr(s.expr)};")
        elif isinstance(s, HilbertCmd):
            a = ",".join(str(x) for x in s.a)
            b = ",".join(str(x) for x in s.b)
            lines.append(f"hilbert a=({a}) b=({b}) c={s.c};")
        elif isinstance(s, CocycleCmd):
            lines.append(f"cocycle {s.atlas};")
        elif isinstance(s, ObstructionCmd):
            lines.append(f"obstruction {s.case} k={s.k} l={s.l};")
        else:
            raise TypeError(f"not a statement node: {s!r}")
    return "\n".join(lines) + ("\n" if lines else "")


# -- evaluation ------------------------------------------------------------


@dataclass
class CommandOutput:
    lines: list
    data: dict
    check_failed: bool = False


@dataclass
class RunResult:
    outputs: list

    @property
    def any_check_failed(self) -> bool:
        return any(o.check_failed for o in self.outputs)


class _Scope:
    """Expression context: one table, optional bindings, a use guard."""

    def __init__(self, table, order, bindings=None, declared_at=None):
        self.table = table
        self.order = order
        self.bindings = bindings if bindings is not None else {}
        self.declared_at = declared_at or {}
        self.position = None  # statement index, for the before-use check


def _flatten_product(e, out):
    if isinstance(e, Mul):
        _flatten_product(e.left, out)
        _flatten_product(e.right, out)
    elif isinstance(e, Neg):
        _flatten_product(e.operand, out)
    elif isinstance(e, Div):
        _flatten_product(e.left, out)
    else:
        out.append(e)


def _lint_odd_literals(e, scope: _Scope):
    """Reject literal squares of odd symbols before evaluation sees them.

    Only spelled-out repetition is caught: a product chain mentioning the
    same odd symbol twice, or an odd symbol under an exponent above one.
    Repetition hidden behind bindings evaluates to zero by the sign rule
    and is not an error.
    """

    def is_odd_symbol(node):
        return (
            isinstance(node, Sym)
            and node.name not in scope.bindings
            and scope.table.has_symbol(node.name)
            and node.name not in scope.table.base
            and scope.table.is_odd(scope.table.graded_index(node.name))
        )

    if isinstance(e, (Mul, Div, Neg)):
        factors = []
        _flatten_product(e, factors)
        seen = {}
        for f in factors:
            target = None
            count = 0
            if is_odd_symbol(f):
                target, count = f, 1
            elif isinstance(f, Pow) and is_odd_symbol(f.base):
                target, count = f.base, f.exponent
            if target is not None and count > 1:
                raise ScriptError(
                    f"odd symbol {target.name!r} raised to power {count}",
                    f.line,
                    f.col,
                )
            if target is not None:
                seen[target.name] = seen.get(target.name, 0) + count
                if seen[target.name] > 1:
                    raise ScriptError(
                        f"odd symbol {target.name!r} repeated in a product",
                        target.line,
                        target.col,
                    )
        for f in factors:
            if isinstance(f, Pow):
                _lint_odd_literals(f.base, scope)
            elif not isinstance(f, (Sym, Num)):
                _lint_odd_literals(f, scope)
        if isinstance(e, Div):
            _lint_odd_literals(e.right, scope)
        return
    if isinstance(e, Pow):
        if is_odd_symbol(e.base) and e.exponent > 1:
            raise ScriptError(
                f"odd symbol {e.base.name!r} raised to power {e.exponent}",
                e.line,
                e.col,
            )
        _lint_odd_literals(e.base, scope)
        return
    if isinstance(e, (Add, Sub)):
        _lint_odd_literals(e.left, scope)
        _lint_odd_literals(e.right, scope)


def _as_rational(series: GradedSeries):
    if series.is_zero():
        return Fraction(0)
    trivial = (0,) * len(series.table.graded)
    if set(series.terms) != {trivial}:
        return None
    unit = series.terms[trivial].as_unit()
    if unit is None:
        return None
    bexpo, value = unit
    if any(bexpo):
        return None
    return value


def _eval_expr(e, scope: _Scope) -> GradedSeries:
    if isinstance(e, Num):
        return GradedSeries.from_coefficient(
            Coefficient.scalar(scope.table, e.value), scope.order
        )
    if isinstance(e, Sym):
        if e.name in scope.bindings:
            value = scope.bindings[e.name]
            if not isinstance(value, GradedSeries):
                raise ScriptError(
                    f"{e.name!r} is not a series", e.line, e.col
                )
            return value
        if scope.table.has_symbol(e.name):
            declared = scope.declared_at.get(e.name)
            if (
                declared is not None
                and scope.position is not None
                and declared > scope.position
            ):
                raise ScriptError(
                    f"symbol {e.name!r} used before its declaration",
                    e.line,
                    e.col,
                )
            return GradedSeries.generator(scope.table, e.name, scope.order)
        raise ScriptError(f"unknown symbol {e.name!r}", e.line, e.col)
    if isinstance(e, Neg):
        return -_eval_expr(e.operand, scope)
    if isinstance(e, Add):
        return _eval_expr(e.left, scope) + _eval_expr(e.right, scope)
    if isinstance(e, Sub):
        return _eval_expr(e.left, scope) - _eval_expr(e.right, scope)
    if isinstance(e, Mul):
        return _eval_expr(e.left, scope) * _eval_expr(e.right, scope)
    if isinstance(e, Div):
        divisor = _as_rational(_eval_expr(e.right, scope))
        if divisor is None:
            raise ScriptError(
                "division only by nonzero rational constants", e.line, e.col
            )
        if divisor == 0:
            raise ScriptError("division by zero", e.line, e.col)
        return _eval_expr(e.left, scope) * (Fraction(1) / divisor)
    if isinstance(e, Pow):
        base = _eval_expr(e.base, scope)
        if e.exponent >= 0:
            return base ** e.exponent
        trivial = (0,) * len(scope.table.graded)
        coef = base.terms.get(trivial)
        if set(base.terms) == {trivial} and coef.as_unit() is not None:
            return GradedSeries.from_coefficient(
                coef ** e.exponent, scope.order
            )
        raise ScriptError(
            "negative powers need a single invertible base monomial",
            e.line,
            e.col,
        )
    raise TypeError(f"not an expression node: {e!r}")


def _evaluate(e, scope: _Scope, position=None) -> GradedSeries:
    scope.position = position
    _lint_odd_literals(e, scope)
    return _eval_expr(e, scope)


class _Runner:
    def __init__(self, script: Script, order: int):
        self.script = script
        self.order = order
        self.bindings: dict[str, object] = {}
        self.outputs: list[CommandOutput] = []

    def ambient_scope(self) -> _Scope:
        base, graded = [], []
        declared_at: dict[str, int] = {}
        for idx, s in enumerate(self.script.statements):
            if isinstance(s, (VarDecl, BaseDecl)):
                if s.name in declared_at:
                    raise ScriptError(
                        f"symbol {s.name!r} declared twice", s.line, s.col
                    )
                declared_at[s.name] = idx
                if isinstance(s, VarDecl):
                    graded.append((s.name, s.degree))
                else:
                    base.append(s.name)
        try:
            table = VariableTable(tuple(base), tuple(graded))
        except (ValueError, GradedAlgebraError) as exc:
            raise ScriptError(str(exc), 1, 1) from exc
        return _Scope(table, self.order, self.bindings, declared_at)

    def bind(self, stmt, name: str, value):
        if name in self.bindings or name in self.scope.declared_at:
            raise ScriptError(
                f"name {name!r} already in use", stmt.line, stmt.col
            )
        self.bindings[name] = value

    def lookup(self, stmt, name: str, kind):
        value = self.bindings.get(name)
        if value is None:
            raise ScriptError(f"unknown name {name!r}", stmt.line, stmt.col)
        if not isinstance(value, kind):
            label = {
                GradedSeries: "a series",
                GradedMorphism: "a morphism",
                Atlas: "an atlas",
            }[kind]
            raise ScriptError(
                f"{name!r} is not {label}", stmt.line, stmt.col
            )
        return value

    def build_morphism(self, stmt, source_scope, target_table, mappings, pos):
        images = {}
        for m in mappings:
            if not target_table.has_symbol(m.symbol):
                raise ScriptError(
                    f"unknown symbol {m.symbol!r}", m.line, m.col
                )
            if m.symbol in images:
                raise ScriptError(
                    f"symbol {m.symbol!r} mapped twice", m.line, m.col
                )
            images[m.symbol] = _evaluate(m.expr, source_scope, pos)
        try:
            morphism = GradedMorphism.from_partial(
                source_scope.table, target_table, self.order, images
            )
        except (ValueError, GradedAlgebraError) as exc:
            raise ScriptError(str(exc), stmt.line, stmt.col) from exc
        report = check_degree_preserving(morphism)
        if not report.passed:
            name, expected, found = report.violations[0]
            raise ScriptError(
                f"image of {name!r} must be homogeneous of degree "
                f"{expected}, found degrees {found}",
                stmt.line,
                stmt.col,
            )
        return morphism

    def build_atlas(self, stmt: AtlasStmt) -> Atlas:
        charts: dict[str, Chart] = {}
        chart_scopes: dict[str, _Scope] = {}
        transitions = {}
        triples = []
        for item in stmt.items:
            if isinstance(item, ChartStmt):
                if item.name in charts:
                    raise ScriptError(
                        f"chart {item.name!r} declared twice",
                        item.line,
                        item.col,
                    )
                base, graded, laurent = [], [], set()
                seen = set()
                for decl in item.items:
                    if decl.name in seen:
                        raise ScriptError(
                            f"symbol {decl.name!r} declared twice",
                            decl.line,
                            decl.col,
                        )
                    seen.add(decl.name)
                    if isinstance(decl, ChartBaseDecl):
                        base.append(decl.name)
                        if decl.laurent:
                            laurent.add(decl.name)
                    else:
                        graded.append((decl.name, decl.degree))
                try:
                    table = VariableTable(tuple(base), tuple(graded))
                except (ValueError, GradedAlgebraError) as exc:
                    raise ScriptError(str(exc), item.line, item.col) from exc
                charts[item.name] = Chart(item.name, table, frozenset(laurent))
                chart_scopes[item.name] = _Scope(table, self.order)
            elif isinstance(item, TransitionStmt):
                for name in (item.source, item.target):
                    if name not in charts:
                        raise ScriptError(
                            f"unknown chart {name!r}", item.line, item.col
                        )
                key = (item.source, item.target)
                if key in transitions:
                    raise ScriptError(
                        f"transition {key} declared twice",
                        item.line,
                        item.col,
                    )
                transitions[key] = self.build_morphism(
                    item,
                    chart_scopes[item.source],
                    charts[item.target].table,
                    item.mappings,
                    None,
                )
            else:
                for name in item.names:
                    if name not in charts:
                        raise ScriptError(
                            f"unknown chart {name!r}", item.line, item.col
                        )
                triples.append(item.names)
        try:
            return Atlas(
                charts.values(), transitions, tuple(triples), self.order
            )
        except (ValueError, GradedAlgebraError) as exc:
            raise ScriptError(str(exc), stmt.line, stmt.col) from exc

    def run(self) -> RunResult:
        self.scope = self.ambient_scope()
        for idx, s in enumerate(self.script.statements):
            try:
                self.step(s, idx)
            except ScriptError:
                raise
            except GradedAlgebraError as exc:
                raise ScriptError(str(exc), s.line, s.col) from exc
        return RunResult(self.outputs)

    def step(self, s, idx: int):
        if isinstance(s, (VarDecl, BaseDecl)):
            return
        if isinstance(s, LetStmt):
            self.bind(s, s.name, _evaluate(s.expr, self.scope, idx))
            return
        if isinstance(s, MorphismStmt):
            morphism = self.build_morphism(
                s, self.scope, self.scope.table, s.mappings, idx
            )
            self.bind(s, s.name, morphism)
            return
        if isinstance(s, AtlasStmt):
            self.bind(s, s.name, self.build_atlas(s))
            return
        self.outputs.append(self.command(s, idx))

    def command(self, s, idx: int) -> CommandOutput:
        if isinstance(s, MulCmd):
            product = _evaluate(s.left, self.scope, idx) * _evaluate(
                s.right, self.scope, idx
            )
            text = format_series(product)
            return CommandOutput([text], {"command": "mul", "result": text})
        if isinstance(s, ApplyCmd):
            morphism = self.lookup(s, s.morphism, GradedMorphism)
            image = pullback(morphism, _evaluate(s.expr, self.scope, idx))
            text = format_series(image)
            return CommandOutput(
                [text],
                {"command": "apply", "morphism": s.morphism, "result": text},
            )
        if isinstance(s, ComposeCmd):
            first = self.lookup(s, s.first, GradedMorphism)
            second = self.lookup(s, s.second, GradedMorphism)
            composite = compose(first, second)
            block = format_morphism(composite)
            return CommandOutput(
                block.split("\n"),
                {
                    "command": "compose",
                    "first": s.first,
                    "second": s.second,
                    "images": {
                        name: format_series(img)
                        for name, img in sorted(composite.images.items())
                    },
                },
            )
        if isinstance(s, TruncateCmd):
            if s.order > self.order:
                raise ScriptError(
                    f"cannot truncate to {s.order}, script order is "
                    f"{self.order}",
                    s.line,
                    s.col,
                )
            result = truncate(_evaluate(s.expr, self.scope, idx), s.order)
            text = format_series(result)
            return CommandOutput(
                [text],
                {"command": "truncate", "order": s.order, "result": text},
            )
        if isinstance(s, NormalFormCmd):
            series = _evaluate(s.expr, self.scope, idx)
            try:
                nf = to_normal_form(series)
            except ValueError as exc:
                raise ScriptError(str(exc), s.line, s.col) from exc
            lines = format_normal_form(nf)
            return CommandOutput(
                lines,
                {
                    "command": "normalform",
                    "degree": nf.degree,
                    "lines": lines,
                },
            )
        if isinstance(s, BigradeCmd):
            split = associated_graded(_evaluate(s.expr, self.scope, idx))
            lines = format_bigraded(split) or ["0"]
            return CommandOutput(
                lines, {"command": "bigrade", "components": lines}
            )
        if isinstance(s, HilbertCmd):
            if s.c == 0:
                solutions = hilbert_basis(s.a, s.b)
            else:
                solutions = minimal_inhomogeneous(s.a, s.b, s.c)
            text = format_solution_set(solutions)
            return CommandOutput(
                [text],
                {
                    "command": "hilbert",
                    "a": list(s.a),
                    "b": list(s.b),
                    "c": s.c,
                    "result": text,
                },
            )
        if isinstance(s, CocycleCmd):
            atlas = self.lookup(s, s.atlas, Atlas)
            inv = verify_transitions(atlas)
            coc = check_cocycle(atlas)
            lines = []
            if inv.passed:
                lines.append("transitions: pass")
            else:
                bad = "; ".join(
                    f"({e.pair[0]},{e.pair[1]}) "
                    + " ".join(e.failed_symbols)
                    for e in inv.entries
                    if not e.ok
                )
                lines.append(f"transitions: fail {bad}")
            for entry in coc.entries:
                label = "(%s)" % ",".join(entry.triple)
                if entry.ok:
                    lines.append(f"triple {label}: pass")
                else:
                    lines.append(
                        f"triple {label}: fail "
                        + " ".join(entry.failed_symbols)
                    )
            passed = inv.passed and coc.passed
            lines.append("cocycle: pass" if passed else "cocycle: fail")
            return CommandOutput(
                lines,
                {
                    "command": "cocycle",
                    "atlas": s.atlas,
                    "transitions_pass": inv.passed,
                    "triples": [
                        {"triple": list(e.triple), "pass": e.ok}
                        for e in coc.entries
                    ],
                    "pass": passed,
                },
                check_failed=not passed,
            )
        if isinstance(s, ObstructionCmd):
            spec = LineBundleSpec(s.case, s.k, s.l)
            dim = obstruction_dimension(spec)
            label, value, threshold = obstruction_condition(spec)
            if value >= threshold:
                text = (
                    f"dim = {dim}, nontrivial ({label}={value} >= {threshold})"
                )
            else:
                text = f"dim = {dim}, trivial ({label}={value} < {threshold})"
            return CommandOutput(
                [text],
                {
                    "command": "obstruction",
                    "case": s.case,
                    "k": s.k,
                    "l": s.l,
                    "dim": dim,
                    "nontrivial": value >= threshold,
                    "result": text,
                },
            )
        raise TypeError(f"not a command node: {s!r}")


def run(script: Script, order: int = 4) -> RunResult:
    """Execute a parsed script at the given truncation order."""
    return _Runner(script, order).run()
