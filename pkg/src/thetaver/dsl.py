"""A small textual language for theta-constant identities.

Grammar (whitespace-insensitive, ``#`` starts a line comment)::

    identity := expr "==" expr
    expr     := term (("+" | "-") term)*
    term     := factor ("*" factor)*
    factor   := primary ("^" nat)?
    primary  := atom | const | rational | "(" expr ")" | "-" primary
    atom     := ("theta" | "dtheta") "[" rational "," rational "]" ("(" nat ")")?
              | "eta" "(" nat ")"
              | "etaq" "{" pair ("," pair)* ";" rational "}"
              | "farkasprod"
              | "lambert" "(" name ")"
    pair     := "(" nat "," int ")"
    const    := "zeta" "(" nat ")" ("^" int)? | "sqrt2" | "sqrt3" | "I"
    rational := nat ("/" nat)?

``theta[e,e'](k)`` is the theta constant with characteristic [e;e'] at k*tau;
``dtheta`` is the normalized derivative theta'/(2*pi*i); ``eta(k)`` is
q^(k/24) * prod(1 - q^(k*n)); ``etaq{(m1,e1),...; pre}`` is
q^pre * prod over factors; ``farkasprod`` is prod over n not divisible by 3 of
(1 - q^n); ``lambert(v)`` is the divisor-weighted logarithmic-derivative
series.  An omitted scale defaults to 1.  There is no division: identities
must be stated cross-multiplied.  Exponents are nonnegative integer literals
(except zeta's own exponent, which may be negative).

``parse`` turns text into an AST, ``print_ast`` renders it back so that
``parse(print_ast(x))`` is structurally ``x``, and ``elaborate`` resolves an
identity to a verifiable record, inferring the minimal grading and cyclotomic
order from the atoms present.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterator, Union

from . import numeric as nm
from .arith import LAMBERT_VARIANTS, lambert_logderiv_series
from .cyclotomic import CycloNumber, from_rational, from_root_power, imag_unit, sqrt2, sqrt3
from .qseries import QSeries
from .thetaforms import (
    Characteristic,
    EtaQuotientSpec,
    eta_quotient,
    farkas_product,
    theta_constant,
    theta_deriv_normalized,
    theta_min_grading,
    theta_phase_order,
)

__all__ = [
    "ParseError",
    "ElaborationError",
    "ORDER_CAP",
    "Rat",
    "Zeta",
    "Sqrt2",
    "Sqrt3",
    "ImagI",
    "Theta",
    "Eta",
    "EtaQ",
    "FarkasProd",
    "Lambert",
    "Neg",
    "Add",
    "Sub",
    "Mul",
    "Pow",
    "Identity",
    "parse",
    "parse_expr",
    "parse_file",
    "print_ast",
    "expression_requirements",
    "elaborate",
    "evaluate_exact",
    "evaluate_numeric",
]

# Largest cyclotomic order a single characteristic's phases may demand.
ORDER_CAP = 576

_MAX_DEPTH = 200


class ParseError(ValueError):
    """Syntax error with a 1-based source position."""

    def __init__(self, message: str, line: int, column: int, near: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.near = near
        suffix = f" (near {near!r})" if near else ""
        super().__init__(f"line {line}, column {column}: {message}{suffix}")


class ElaborationError(ValueError):
    """A parsed identity that cannot be turned into a verifiable record."""


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rat:
    value: Fraction


@dataclass(frozen=True)
class Zeta:
    order: int
    power: int = 1


@dataclass(frozen=True)
class Sqrt2:
    pass


@dataclass(frozen=True)
class Sqrt3:
    pass


@dataclass(frozen=True)
class ImagI:
    pass


@dataclass(frozen=True)
class Theta:
    eps: Fraction
    eps_prime: Fraction
    scale: int = 1
    deriv: bool = False


@dataclass(frozen=True)
class Eta:
    scale: int


@dataclass(frozen=True)
class EtaQ:
    factors: tuple[tuple[int, int], ...]
    prefactor: Fraction


@dataclass(frozen=True)
class FarkasProd:
    pass


@dataclass(frozen=True)
class Lambert:
    variant: str


@dataclass(frozen=True)
class Neg:
    inner: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[
    Rat, Zeta, Sqrt2, Sqrt3, ImagI, Theta, Eta, EtaQ, FarkasProd, Lambert,
    Neg, Add, Sub, Mul, Pow,
]


@dataclass(frozen=True)
class Identity:
    lhs: Expr
    rhs: Expr


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_SYMBOLS = ("==", "+", "-", "*", "^", "(", ")", "[", "]", "{", "}", ",", ";")


@dataclass(frozen=True)
class _Token:
    kind: str  # "name" | "number" | "symbol" | "end"
    text: str
    line: int
    column: int


def _tokenize(text: str, line_offset: int = 0) -> list[_Token]:
    tokens: list[_Token] = []
    line = 1 + line_offset
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("number", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if text.startswith("==", i):
            tokens.append(_Token("symbol", "==", line, col))
            col += 2
            i += 2
            continue
        if ch == "=":
            raise ParseError("single '=' is not an operator; use '=='", line, col, ch)
        if ch == "/":
            tokens.append(_Token("symbol", "/", line, col))
            col += 1
            i += 1
            continue
        if ch in "+-*^()[]{},;":
            tokens.append(_Token("symbol", ch, line, col))
            col += 1
            i += 1
            continue
        raise ParseError("unexpected character", line, col, ch)
    tokens.append(_Token("end", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self._tokens = tokens
        self._pos = 0
        self._depth = 0

    def _peek(self) -> _Token:
        return self._tokens[self._pos]

    def _next(self) -> _Token:
        tok = self._tokens[self._pos]
        if tok.kind != "end":
            self._pos += 1
        return tok

    def _error(self, message: str, tok: _Token | None = None) -> ParseError:
        tok = tok or self._peek()
        near = tok.text if tok.kind != "end" else "end of input"
        return ParseError(message, tok.line, tok.column, near)

    def _expect(self, text: str) -> _Token:
        tok = self._peek()
        if tok.kind == "symbol" and tok.text == text:
            return self._next()
        raise self._error(f"expected {text!r}")

    def _at_symbol(self, text: str) -> bool:
        tok = self._peek()
        return tok.kind == "symbol" and tok.text == text

    def _eat_symbol(self, text: str) -> bool:
        if self._at_symbol(text):
            self._next()
            return True
        return False

    def _nat(self, what: str) -> int:
        tok = self._peek()
        if tok.kind != "number":
            raise self._error(f"expected {what}")
        self._next()
        return int(tok.text)

    def _int(self, what: str) -> int:
        sign = -1 if self._eat_symbol("-") else 1
        return sign * self._nat(what)

    def _rational(self, what: str = "a rational") -> Fraction:
        tok = self._peek()
        num = self._nat(what)
        if self._eat_symbol("/"):
            den_tok = self._peek()
            den = self._nat("a denominator")
            if den == 0:
                raise self._error("zero denominator", den_tok)
            _ = tok
            return Fraction(num, den)
        return Fraction(num)

    # grammar rules -----------------------------------------------------

    def parse_identity(self) -> Identity:
        lhs = self.parse_expression()
        self._expect("==")
        rhs = self.parse_expression()
        self._finish()
        return Identity(lhs, rhs)

    def parse_bare_expression(self) -> Expr:
        node = self.parse_expression()
        self._finish()
        return node

    def _finish(self) -> None:
        tok = self._peek()
        if tok.kind != "end":
            raise self._error("unexpected trailing input")

    def parse_expression(self) -> Expr:
        self._depth += 1
        if self._depth > _MAX_DEPTH:
            raise self._error("expression nests too deeply")
        try:
            node = self._term()
            while True:
                if self._eat_symbol("+"):
                    node = Add(node, self._term())
                elif self._eat_symbol("-"):
                    node = Sub(node, self._term())
                else:
                    return node
        finally:
            self._depth -= 1

    def _term(self) -> Expr:
        node = self._factor()
        while self._eat_symbol("*"):
            node = Mul(node, self._factor())
        return node

    def _factor(self) -> Expr:
        node = self._primary()
        if self._at_symbol("^"):
            caret = self._next()
            if self._at_symbol("-"):
                raise self._error(
                    "exponents must be nonnegative (only zeta(N)^k may be negative)"
                )
            exponent = self._nat("a nonnegative integer exponent")
            _ = caret
            node = Pow(node, exponent)
        return node

    def _primary(self) -> Expr:
        self._depth += 1
        if self._depth > _MAX_DEPTH:
            raise self._error("expression nests too deeply")
        try:
            tok = self._peek()
            if tok.kind == "symbol" and tok.text == "-":
                self._next()
                return Neg(self._primary())
            if tok.kind == "symbol" and tok.text == "(":
                self._next()
                node = self.parse_expression()
                self._expect(")")
                return node
            if tok.kind == "number":
                return Rat(self._rational())
            if tok.kind == "name":
                return self._named(tok)
            raise self._error("expected an expression")
        finally:
            self._depth -= 1

    def _named(self, tok: _Token) -> Expr:
        name = tok.text
        self._next()
        if name in ("theta", "dtheta"):
            self._expect("[")
            eps = self._rational("a rational characteristic")
            self._expect(",")
            eps_prime = self._rational("a rational characteristic")
            self._expect("]")
            scale = 1
            if self._eat_symbol("("):
                scale_tok = self._peek()
                scale = self._nat("a positive integer scale")
                if scale < 1:
                    raise self._error("scale must be at least 1", scale_tok)
                self._expect(")")
            return Theta(eps, eps_prime, scale, deriv=(name == "dtheta"))
        if name == "eta":
            self._expect("(")
            scale_tok = self._peek()
            scale = self._nat("a positive integer scale")
            if scale < 1:
                raise self._error("scale must be at least 1", scale_tok)
            self._expect(")")
            return Eta(scale)
        if name == "etaq":
            self._expect("{")
            factors = [self._etaq_pair()]
            while self._eat_symbol(","):
                factors.append(self._etaq_pair())
            self._expect(";")
            prefactor = self._rational("a rational prefactor exponent")
            self._expect("}")
            return EtaQ(tuple(factors), prefactor)
        if name == "farkasprod":
            return FarkasProd()
        if name == "lambert":
            self._expect("(")
            var_tok = self._peek()
            if var_tok.kind != "name" or var_tok.text not in LAMBERT_VARIANTS:
                raise self._error(
                    f"expected a lambert variant {'/'.join(LAMBERT_VARIANTS)}", var_tok
                )
            self._next()
            self._expect(")")
            return Lambert(var_tok.text)
        if name == "zeta":
            self._expect("(")
            order_tok = self._peek()
            order = self._nat("a positive root order")
            if order < 1:
                raise self._error("root order must be at least 1", order_tok)
            self._expect(")")
            power = 1
            if self._eat_symbol("^"):
                power = self._int("an integer exponent")
            return Zeta(order, power)
        if name == "sqrt2":
            return Sqrt2()
        if name == "sqrt3":
            return Sqrt3()
        if name == "I":
            return ImagI()
        raise self._error(f"unknown name {name!r}", tok)

    def _etaq_pair(self) -> tuple[int, int]:
        self._expect("(")
        scale_tok = self._peek()
        scale = self._nat("a positive integer scale")
        if scale < 1:
            raise self._error("scale must be at least 1", scale_tok)
        self._expect(",")
        exponent = self._int("an integer exponent")
        self._expect(")")
        return (scale, exponent)


def parse(text: str, line_offset: int = 0) -> Identity:
    """Parse one ``lhs == rhs`` identity."""
    return _Parser(_tokenize(text, line_offset)).parse_identity()


def parse_expr(text: str, line_offset: int = 0) -> Expr:
    """Parse a bare expression (used for guards and series inspection)."""
    return _Parser(_tokenize(text, line_offset)).parse_bare_expression()


def parse_file(text: str) -> list[tuple[int, Identity]]:
    """Parse an identity file: one identity per line, or blocks separated by
    blank lines when an identity spans several lines.  Returns (line, ast)
    pairs; comments are dropped."""
    stripped: list[str] = []
    for raw in text.split("\n"):
        body = raw.split("#", 1)[0]
        stripped.append(body)
    results: list[tuple[int, Identity]] = []
    block: list[tuple[int, str]] = []

    def flush() -> None:
        if not block:
            return
        lines = [(no, body) for no, body in block if body.strip()]
        block.clear()
        if not lines:
            return
        if all("==" in body for _, body in lines):
            for no, body in lines:
                results.append((no, parse(body, line_offset=no - 1)))
        else:
            first = lines[0][0]
            joined = "\n".join(body for _, body in lines)
            results.append((first, parse(joined, line_offset=first - 1)))

    for no, body in enumerate(stripped, start=1):
        if body.strip():
            block.append((no, body))
        else:
            flush()
    flush()
    return results


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

_PREC_ADD = 1
_PREC_MUL = 2
_PREC_POW = 3
_PREC_PRIMARY = 4


def _frac_str(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _print(node: Expr) -> tuple[str, int]:
    """Render a node, returning (text, precedence of the rendered form)."""
    if isinstance(node, Rat):
        return _frac_str(node.value), _PREC_PRIMARY
    if isinstance(node, Zeta):
        if node.power == 1:
            return f"zeta({node.order})", _PREC_PRIMARY
        # the caret here belongs to the const rule, so as a Pow base this
        # form must be parenthesized; report it at pow precedence
        return f"zeta({node.order})^{node.power}", _PREC_POW
    if isinstance(node, Sqrt2):
        return "sqrt2", _PREC_PRIMARY
    if isinstance(node, Sqrt3):
        return "sqrt3", _PREC_PRIMARY
    if isinstance(node, ImagI):
        return "I", _PREC_PRIMARY
    if isinstance(node, Theta):
        name = "dtheta" if node.deriv else "theta"
        text = f"{name}[{_frac_str(node.eps)},{_frac_str(node.eps_prime)}]"
        if node.scale != 1:
            text += f"({node.scale})"
        return text, _PREC_PRIMARY
    if isinstance(node, Eta):
        return f"eta({node.scale})", _PREC_PRIMARY
    if isinstance(node, EtaQ):
        pairs = ",".join(f"({m},{e})" for m, e in node.factors)
        return f"etaq{{{pairs}; {_frac_str(node.prefactor)}}}", _PREC_PRIMARY
    if isinstance(node, FarkasProd):
        return "farkasprod", _PREC_PRIMARY
    if isinstance(node, Lambert):
        return f"lambert({node.variant})", _PREC_PRIMARY
    if isinstance(node, Neg):
        inner, prec = _print(node.inner)
        if prec < _PREC_PRIMARY and not isinstance(node.inner, Neg):
            inner = f"({inner})"
        return f"-{inner}", _PREC_PRIMARY
    if isinstance(node, Pow):
        base, prec = _print(node.base)
        # a zeta base would fuse with the caret into the const rule; nested
        # pows are not grammatical; anything below primary needs grouping too
        if isinstance(node.base, Zeta) or (
            prec < _PREC_PRIMARY and not isinstance(node.base, Neg)
        ):
            base = f"({base})"
        return f"{base}^{node.exponent}", _PREC_POW
    if isinstance(node, Mul):
        left, lp = _print(node.left)
        if lp < _PREC_MUL:
            left = f"({left})"
        right, rp = _print(node.right)
        if rp <= _PREC_ADD or isinstance(node.right, Mul):
            right = f"({right})"
        return f"{left} * {right}", _PREC_MUL
    if isinstance(node, (Add, Sub)):
        op = "+" if isinstance(node, Add) else "-"
        left, lp = _print(node.left)
        if lp < _PREC_ADD:
            left = f"({left})"
        right, rp = _print(node.right)
        if rp <= _PREC_ADD and isinstance(node.right, (Add, Sub)):
            right = f"({right})"
        return f"{left} {op} {right}", _PREC_ADD
    raise TypeError(f"not an expression node: {node!r}")


def print_ast(node: Expr | Identity) -> str:
    """Canonical text; parsing it back yields a structurally equal tree."""
    if isinstance(node, Identity):
        return f"{_print(node.lhs)[0]} == {_print(node.rhs)[0]}"
    return _print(node)[0]


# ---------------------------------------------------------------------------
# Elaboration: minimal grading / order, and evaluation
# ---------------------------------------------------------------------------


def _walk(node: Expr) -> Iterator[Expr]:
    yield node
    if isinstance(node, Neg):
        yield from _walk(node.inner)
    elif isinstance(node, (Add, Sub, Mul)):
        yield from _walk(node.left)
        yield from _walk(node.right)
    elif isinstance(node, Pow):
        yield from _walk(node.base)


def _theta_char(node: Theta) -> Characteristic:
    return Characteristic(node.eps, node.eps_prime, node.scale)


def expression_requirements(*nodes: Expr | Identity) -> tuple[int, int]:
    """Minimal (grading, cyclotomic order) for the atoms in the given trees.

    Raises ElaborationError when a single characteristic's phases need a
    cyclotomic order above ORDER_CAP.
    """
    grading = 1
    order = 1
    for root in nodes:
        parts = (root.lhs, root.rhs) if isinstance(root, Identity) else (root,)
        for part in parts:
            for node in _walk(part):
                if isinstance(node, Theta):
                    ch = _theta_char(node)
                    need = theta_phase_order(ch)
                    if need > ORDER_CAP:
                        label = "dtheta" if node.deriv else "theta"
                        raise ElaborationError(
                            f"{label}[{_frac_str(node.eps)},{_frac_str(node.eps_prime)}]"
                            f" needs cyclotomic order {need},"
                            f" above the supported cap {ORDER_CAP}"
                        )
                    grading = lcm(grading, theta_min_grading(ch))
                    order = lcm(order, need)
                elif isinstance(node, Eta):
                    grading = lcm(grading, 12 // gcd(12, node.scale))
                elif isinstance(node, EtaQ):
                    grading = lcm(grading, (2 * node.prefactor).denominator)
                elif isinstance(node, Lambert):
                    order = lcm(order, 4 if node.variant == "half" else 8)
                elif isinstance(node, Zeta):
                    k = node.power % node.order
                    order = lcm(order, node.order // gcd(node.order, k) if k else 1)
                elif isinstance(node, Sqrt2):
                    order = lcm(order, 8)
                elif isinstance(node, Sqrt3):
                    order = lcm(order, 12)
                elif isinstance(node, ImagI):
                    order = lcm(order, 4)
    return grading, order


def evaluate_exact(
    node: Expr,
    grading: int,
    cutoff: int,
    cache: dict | None = None,
) -> QSeries:
    """Evaluate an expression to a truncated series at the given grading.

    ``cutoff`` is in grading units (the series knowledge bound).  ``cache``
    maps (atom, grading, cutoff) to built series and may be shared between
    expressions to reuse theta expansions.
    """
    if isinstance(node, (Theta, Eta, EtaQ, FarkasProd, Lambert)):
        key = (node, grading, cutoff)
        if cache is not None and key in cache:
            return cache[key]
        if isinstance(node, Theta):
            builder = theta_deriv_normalized if node.deriv else theta_constant
            series = builder(_theta_char(node), grading, cutoff)
        elif isinstance(node, Eta):
            series = eta_quotient(
                EtaQuotientSpec(((node.scale, 1),), Fraction(node.scale, 24)),
                grading,
                cutoff,
            )
        elif isinstance(node, EtaQ):
            series = eta_quotient(
                EtaQuotientSpec(node.factors, node.prefactor), grading, cutoff
            )
        elif isinstance(node, FarkasProd):
            series = farkas_product(grading, cutoff)
        else:
            series = lambert_logderiv_series(node.variant, grading, cutoff)
        if cache is not None:
            cache[key] = series
        return series
    if isinstance(node, Rat):
        return QSeries.monomial(grading, 0, from_rational(node.value), cutoff)
    if isinstance(node, Zeta):
        return QSeries.monomial(grading, 0, from_root_power(node.order, node.power), cutoff)
    if isinstance(node, Sqrt2):
        return QSeries.monomial(grading, 0, sqrt2(), cutoff)
    if isinstance(node, Sqrt3):
        return QSeries.monomial(grading, 0, sqrt3(), cutoff)
    if isinstance(node, ImagI):
        return QSeries.monomial(grading, 0, imag_unit(), cutoff)
    if isinstance(node, Neg):
        return -evaluate_exact(node.inner, grading, cutoff, cache)
    if isinstance(node, Add):
        return evaluate_exact(node.left, grading, cutoff, cache) + evaluate_exact(
            node.right, grading, cutoff, cache
        )
    if isinstance(node, Sub):
        return evaluate_exact(node.left, grading, cutoff, cache) - evaluate_exact(
            node.right, grading, cutoff, cache
        )
    if isinstance(node, Mul):
        return evaluate_exact(node.left, grading, cutoff, cache) * evaluate_exact(
            node.right, grading, cutoff, cache
        )
    if isinstance(node, Pow):
        return evaluate_exact(node.base, grading, cutoff, cache) ** node.exponent
    raise TypeError(f"not an expression node: {node!r}")


def evaluate_numeric(node: Expr, tau: complex, tol: float = 1e-12) -> complex:
    """Evaluate an expression at a point of the upper half-plane."""
    if isinstance(node, Theta):
        if node.deriv:
            return nm.dtheta_value(node.eps, node.eps_prime, node.scale, tau, tol)
        return nm.theta_value(node.eps, node.eps_prime, node.scale, tau, tol)
    if isinstance(node, Eta):
        return nm.eta_value(node.scale, tau)
    if isinstance(node, EtaQ):
        return nm.eta_quotient_value(node.factors, node.prefactor, tau)
    if isinstance(node, FarkasProd):
        return nm.farkas_product_value(tau)
    if isinstance(node, Lambert):
        return nm.lambert_value(node.variant, tau)
    if isinstance(node, Rat):
        return complex(float(node.value))
    if isinstance(node, Zeta):
        return cmath_exp_unit(node.power, node.order)
    if isinstance(node, Sqrt2):
        return complex(math.sqrt(2.0))
    if isinstance(node, Sqrt3):
        return complex(math.sqrt(3.0))
    if isinstance(node, ImagI):
        return 1j
    if isinstance(node, Neg):
        return -evaluate_numeric(node.inner, tau, tol)
    if isinstance(node, Add):
        return evaluate_numeric(node.left, tau, tol) + evaluate_numeric(node.right, tau, tol)
    if isinstance(node, Sub):
        return evaluate_numeric(node.left, tau, tol) - evaluate_numeric(node.right, tau, tol)
    if isinstance(node, Mul):
        return evaluate_numeric(node.left, tau, tol) * evaluate_numeric(node.right, tau, tol)
    if isinstance(node, Pow):
        return evaluate_numeric(node.base, tau, tol) ** node.exponent
    raise TypeError(f"not an expression node: {node!r}")


def cmath_exp_unit(power: int, order: int) -> complex:
    """exp(2*pi*i*power/order)."""
    angle = 2.0 * math.pi * (power % order) / order
    return complex(math.cos(angle), math.sin(angle))


def elaborate(
    ast: Identity,
    *,
    name: str = "anonymous",
    grading: int | None = None,
    cutoff_x: int | None = None,
    comment: str = "",
):
    """Resolve a parsed identity to an IdentityRecord.

    The minimal grading and cyclotomic order are inferred from the atoms; an
    explicit ``grading`` must be a multiple of the inferred one.  ``cutoff_x``
    is the verification depth in x-exponents (records carry a default).
    """
    from .identities import DEFAULT_CUTOFF_X, IdentityRecord

    min_grading, order = expression_requirements(ast)
    if grading is None:
        grading = min_grading
    elif grading % min_grading:
        raise ElaborationError(
            f"grading {grading} is not a multiple of the required {min_grading}"
        )
    return IdentityRecord(
        name=name,
        text=print_ast(ast),
        mode="both",
        grading=grading,
        cutoff_x=DEFAULT_CUTOFF_X if cutoff_x is None else cutoff_x,
        order=order,
        comment=comment,
    )
