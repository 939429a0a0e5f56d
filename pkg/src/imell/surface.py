"""Concrete syntax.

    term    ::= value | "(" term ")"
              | "cut{" value ">" var "}" term
              | "par{" var ">" var "," var "}" term
              | "sub{" var ";" value ">" var "}" term
              | "der{" var ">" var "}" term
    value   ::= var | "(" term "," term ")" | "\\" var [":" formula] "." term
              | "!" term
    formula ::= formula "-o" formula | formula "*" formula | "!" formula
              | ATOM | "(" formula ")"

Variable kind comes from the first letter: e, f, g exponential, everything
else multiplicative (a convention of this syntax, not of the calculus; the
AST carries kinds explicitly). Atoms are capitalized identifiers. `#` starts
a comment to end of line. cut/par/sub/der are reserved words.

The parser enforces the value-slot discipline (the left of a cut or sub must
be a value) and the conclusion kinds; it happily accepts clash-shaped cuts
like cut{(m, n) > e} t, which are well-formed terms, just untypable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from . import formulas as fm
from . import terms as tm


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int) -> None:
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


_TOKEN_RE = re.compile(
    r"""
      (?P<ws>      [ \t\r\n]+ | \#[^\n]* )
    | (?P<lolli>   -o )
    | (?P<ident>   [A-Za-z][A-Za-z0-9_']* )
    | (?P<punct>   [{}()>,;.:!*\\] )
    """,
    re.VERBOSE,
)

_RESERVED = ("cut", "par", "sub", "der")


@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    col: int


def _lex(src: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, bol = 1, 0
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if not m:
            raise ParseError(f"stray character {src[pos]!r}", line, pos - bol + 1)
        text = m.group(0)
        if m.lastgroup != "ws":
            toks.append(_Tok(text, line, pos - bol + 1))
        for i, ch in enumerate(text):
            if ch == "\n":
                line += 1
                bol = pos + i + 1
        pos = m.end()
    toks.append(_Tok("<eof>", line, len(src) - bol + 1))
    return toks


class _Parser:
    def __init__(self, src: str) -> None:
        self.toks = _lex(src)
        self.i = 0

    # -- token plumbing --

    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        if tok.text != "<eof>":
            self.i += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, got {tok.text!r}", tok.line, tok.col)
        return tok

    def fail(self, msg: str) -> ParseError:
        tok = self.peek()
        return ParseError(msg, tok.line, tok.col)

    def at_ident(self) -> bool:
        return bool(re.match(r"[A-Za-z]", self.peek().text))

    # -- terms --

    def var(self) -> tm.Var:
        tok = self.next()
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_']*", tok.text):
            raise ParseError(f"expected a variable, got {tok.text!r}", tok.line, tok.col)
        if tok.text in _RESERVED:
            raise ParseError(f"{tok.text!r} is reserved", tok.line, tok.col)
        return tm.Var.of(tok.text)

    def mul_var(self, role: str) -> tm.Var:
        tok = self.peek()
        v = self.var()
        if not v.is_mul:
            raise ParseError(
                f"{role} must be multiplicative, got {v.name!r} "
                f"(names starting with e/f/g are exponential)",
                tok.line,
                tok.col,
            )
        return v

    def exp_var(self, role: str) -> tm.Var:
        tok = self.peek()
        v = self.var()
        if not v.is_exp:
            raise ParseError(
                f"{role} must be exponential (name it e.., f.. or g..), "
                f"got {v.name!r}",
                tok.line,
                tok.col,
            )
        return v

    def paren(self, require_value: bool) -> tm.Term:
        open_tok = self.expect("(")
        t = self.term()
        if self.peek().text == ",":
            self.next()
            s = self.term()
            self.expect(")")
            return tm.Pair(t, s)
        self.expect(")")
        if require_value and not tm.is_value(t):
            raise ParseError(
                "this slot holds a value; a parenthesized non-value term "
                "cannot go here (hoist its spine above the cut)",
                open_tok.line,
                open_tok.col,
            )
        return t

    def term(self) -> tm.Term:
        head = self.peek()
        if head.text == "(":
            return self.paren(require_value=False)
        if head.text in _RESERVED and self.peek(1).text == "{":
            self.next()
            self.expect("{")
            if head.text == "cut":
                v = self.value()
                self.expect(">")
                x = self.var()
                self.expect("}")
                return tm.Cut(v, x, self.term())
            if head.text == "par":
                m = self.mul_var("par conclusion")
                self.expect(">")
                x = self.var()
                self.expect(",")
                y = self.var()
                self.expect("}")
                return tm.Par(m, x, y, self.term())
            if head.text == "sub":
                m = self.mul_var("sub conclusion")
                self.expect(";")
                v = self.value()
                self.expect(">")
                x = self.var()
                self.expect("}")
                return tm.Sub(m, v, x, self.term())
            m_ = self.exp_var("der conclusion")
            self.expect(">")
            x = self.var()
            self.expect("}")
            return tm.Der(m_, x, self.term())
        return self.value()

    def value(self) -> tm.Term:
        tok = self.peek()
        if tok.text == "(":
            return self.paren(require_value=True)
        if tok.text == "\\":
            self.next()
            x = self.var()
            annot: Optional[fm.Formula] = None
            if self.peek().text == ":":
                self.next()
                annot = self.formula()
            self.expect(".")
            return tm.Lam(x, self.term(), annot)
        if tok.text == "!":
            self.next()
            return tm.Bang(self.term())
        if tok.text in _RESERVED and self.peek(1).text == "{":
            raise self.fail(
                f"{tok.text} is not a value here; the left slot of a cut or "
                f"sub holds a value (split the term first)"
            )
        if self.at_ident():
            return self.var()
        raise self.fail(f"expected a value, got {tok.text!r}")

    # -- formulas --

    def formula(self) -> fm.Formula:
        left = self.formula_tensor()
        if self.peek().text == "-o":
            self.next()
            return fm.Lolli(left, self.formula())
        return left

    def formula_tensor(self) -> fm.Formula:
        left = self.formula_unary()
        while self.peek().text == "*":
            self.next()
            left = fm.Tensor(left, self.formula_unary())
        return left

    def formula_unary(self) -> fm.Formula:
        tok = self.peek()
        if tok.text == "!":
            self.next()
            return fm.Bang(self.formula_unary())
        if tok.text == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if self.at_ident():
            self.next()
            if not tok.text[:1].isupper():
                raise ParseError(
                    f"formula atoms are capitalized, got {tok.text!r}",
                    tok.line,
                    tok.col,
                )
            return fm.Atom(tok.text)
        raise self.fail(f"expected a formula, got {tok.text!r}")

    # -- typing contexts --

    def typing_context(self) -> dict[tm.Var, fm.Formula]:
        ctx: dict[tm.Var, fm.Formula] = {}
        if self.peek().text == "<eof>":
            return ctx
        while True:
            tok = self.peek()
            v = self.var()
            self.expect(":")
            f = self.formula()
            if v.is_exp and not fm.is_bang(f):
                raise ParseError(
                    f"exponential variable {v.name} needs a !-formula", tok.line, tok.col
                )
            if v.is_mul and fm.is_bang(f):
                raise ParseError(
                    f"multiplicative variable {v.name} cannot have a !-formula",
                    tok.line,
                    tok.col,
                )
            if v in ctx:
                raise ParseError(f"duplicate context entry {v.name}", tok.line, tok.col)
            ctx[v] = f
            if self.peek().text != ",":
                return ctx
            self.next()

    def eof(self) -> None:
        tok = self.peek()
        if tok.text != "<eof>":
            raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)


def parse_term(src: str) -> tm.Term:
    p = _Parser(src)
    t = p.term()
    p.eof()
    return t


def parse_formula(src: str) -> fm.Formula:
    p = _Parser(src)
    f = p.formula()
    p.eof()
    return f


def parse_typing_context(src: str) -> dict[tm.Var, fm.Formula]:
    p = _Parser(src)
    ctx = p.typing_context()
    p.eof()
    return ctx


def parse_sequent(src: str) -> tuple[dict[tm.Var, fm.Formula], tm.Term]:
    """Parse "e:!X, m:Y |- term" (the turnstile may be |- or ⊢)."""
    src = src.replace("⊢", "|-")
    head, sep, tail = src.partition("|-")
    if not sep:
        raise ParseError("missing |- in sequent", 1, 1)
    return parse_typing_context(head), parse_term(tail)


# ---- printing ----


def show_term(t: tm.Term, annots: bool = True) -> str:
    match t:
        case tm.Var(name, _):
            return name
        case tm.Pair(left, right):
            return f"({show_term(left, annots)}, {show_term(right, annots)})"
        case tm.Lam(binder, body, annot):
            if annots and annot is not None:
                return f"\\{binder}: {fm.show(annot)}. {show_term(body, annots)}"
            return f"\\{binder}. {show_term(body, annots)}"
        case tm.Bang(body):
            return f"!{show_term(body, annots)}"
        case tm.Cut(value, binder, body):
            return f"cut{{{show_term(value, annots)} > {binder}}} {show_term(body, annots)}"
        case tm.Par(conclusion, left, right, body):
            return f"par{{{conclusion} > {left}, {right}}} {show_term(body, annots)}"
        case tm.Sub(conclusion, value, binder, body):
            return (
                f"sub{{{conclusion}; {show_term(value, annots)} > {binder}}} "
                f"{show_term(body, annots)}"
            )
        case tm.Der(conclusion, binder, body):
            return f"der{{{conclusion} > {binder}}} {show_term(body, annots)}"
    raise TypeError(f"not a term: {t!r}")


def show_typing_context(ctx: dict[tm.Var, fm.Formula]) -> str:
    return ", ".join(f"{v.name}: {fm.show(f)}" for v, f in ctx.items())


# ---- term files ----


def read_term_file(text: str) -> tuple[Optional[dict[tm.Var, fm.Formula]], tm.Term]:
    """A term file is UTF-8 text; a leading comment line `# ctx: ...` gives
    the typing context. Other comments are ignored by the lexer."""
    ctx = None
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("# ctx:"):
            ctx = parse_typing_context(stripped[len("# ctx:"):])
            break
        if stripped and not stripped.startswith("#"):
            break
    return ctx, parse_term(text)
