"""Signatures, formulas, parsing, rendering and subformula machinery.

Formulas are immutable and hash-consed: building the same tree twice yields
the same object, so equality tests and set membership are cheap pointer
operations.  All construction goes through ``var`` and ``app``.
"""

from __future__ import annotations

import re
from itertools import product

from .errors import ArityError, FormulaSyntaxError, UnknownConnective


class Signature:
    """A map from connective names to arities."""

    def __init__(self, connectives):
        self.connectives = dict(connectives)

    def arity(self, name):
        return self.connectives[name]

    def __contains__(self, name):
        return name in self.connectives

    def __repr__(self):
        return "Signature(%r)" % (self.connectives,)


SIG_PP = Signature({"and": 2, "or": 2, "neg": 1, "circ": 1, "top": 0, "bot": 0})
SIG_PP_IMP = Signature(
    {"and": 2, "or": 2, "neg": 1, "circ": 1, "imp": 2, "top": 0, "bot": 0}
)


class Formula:
    """A variable (args is None) or a connective application (args a tuple)."""

    __slots__ = ("head", "args", "size", "_hash")
    _table = {}

    def __new__(cls, head, args):
        key = (head, args)
        hit = cls._table.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        self.head = head
        self.args = args
        self.size = 1 if args is None else 1 + sum(a.size for a in args)
        self._hash = hash(key)
        cls._table[key] = self
        return self

    @property
    def is_var(self):
        return self.args is None

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __ne__(self, other):
        return self is not other

    def __lt__(self, other):
        return canon_key(self) < canon_key(other)

    def __repr__(self):
        return "Formula(%s)" % render_formula(self)


def var(name):
    return Formula(name, None)


def app(head, *args):
    return Formula(head, tuple(args))


def canon_key(f):
    """Deterministic ordering key used everywhere a formula order is needed."""
    return (f.size, render_formula(f))


# --- derived connectives -------------------------------------------------

_P = var("p")
_Q = var("q")

MACROS = {
    "up": (("p",), app("circ", app("imp", app("neg", _P), _P))),
    "down": (("p",), app("circ", app("imp", _P, app("neg", _P)))),
    "hneg": (("p",), app("imp", _P, app("neg", app("imp", _P, _P)))),
    "nabla": (("p",), app("or", _P, app("neg", app("circ", _P)))),
    "wimp": (
        ("p", "q"),
        app("or", app("or", app("neg", _P), app("neg", app("circ", _P))), _Q),
    ),
    "iff": (("p", "q"), app("and", app("imp", _P, _Q), app("imp", _Q, _P))),
}
# delta(p) is hneg applied to neg p
MACROS["delta"] = (
    ("p",),
    app(
        "imp",
        app("neg", _P),
        app("neg", app("imp", app("neg", _P), app("neg", _P))),
    ),
)


def up_(f):
    return substitute(MACROS["up"][1], {"p": f})


def down_(f):
    return substitute(MACROS["down"][1], {"p": f})


def delta_(f):
    return substitute(MACROS["delta"][1], {"p": f})


# --- parsing -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(=>|[a-z][a-z0-9_]*|[~@&|(),])")

_KEYWORDS = {"top", "bot"}


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise FormulaSyntaxError("unexpected character %r" % text[pos], pos)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    tokens.append((None, len(text)))
    return tokens


_SYMBOL_CONN = {"~": "neg", "@": "circ", "&": "and", "|": "or", "=>": "imp"}


class _Parser:
    def __init__(self, text, sig):
        self.tokens = _tokenize(text)
        self.i = 0
        self.sig = sig

    def peek(self):
        return self.tokens[self.i][0]

    def pos(self):
        return self.tokens[self.i][1]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, sym):
        tok, pos = self.take()
        if tok != sym:
            raise FormulaSyntaxError("expected %r, found %r" % (sym, tok), pos)

    def _conn(self, symbol, pos):
        name = _SYMBOL_CONN[symbol]
        if name not in self.sig:
            raise UnknownConnective(
                "connective %r (%r) not in signature" % (symbol, name)
            )
        return name

    def formula(self):
        left = self.or_term()
        if self.peek() == "=>":
            _, pos = self.take()
            name = self._conn("=>", pos)
            right = self.formula()
            return app(name, left, right)
        return left

    def or_term(self):
        f = self.and_term()
        while self.peek() == "|":
            _, pos = self.take()
            name = self._conn("|", pos)
            f = app(name, f, self.and_term())
        return f

    def and_term(self):
        f = self.unary()
        while self.peek() == "&":
            _, pos = self.take()
            name = self._conn("&", pos)
            f = app(name, f, self.unary())
        return f

    def unary(self):
        tok = self.peek()
        if tok in ("~", "@"):
            _, pos = self.take()
            name = self._conn(tok, pos)
            return app(name, self.unary())
        return self.atom()

    def atom(self):
        tok, pos = self.take()
        if tok == "(":
            f = self.formula()
            self.expect(")")
            return f
        if tok is None:
            raise FormulaSyntaxError("unexpected end of input", pos)
        if not re.fullmatch(r"[a-z][a-z0-9_]*", tok or ""):
            raise FormulaSyntaxError("unexpected token %r" % tok, pos)
        if tok in _KEYWORDS:
            if tok not in self.sig:
                raise UnknownConnective("constant %r not in signature" % tok)
            return app(tok)
        if self.peek() == "(":
            return self.macro_call(tok, pos)
        return var(tok)

    def macro_call(self, name, pos):
        if name not in MACROS:
            raise UnknownConnective("unknown macro %r" % name)
        params, body = MACROS[name]
        self.expect("(")
        args = [self.formula()]
        while self.peek() == ",":
            self.take()
            args.append(self.formula())
        self.expect(")")
        if len(args) != len(params):
            raise ArityError(
                "macro %r expects %d arguments, got %d"
                % (name, len(params), len(args))
            )
        return substitute(body, dict(zip(params, args)))


def parse_formula(text, sig=SIG_PP_IMP):
    p = _Parser(text, sig)
    f = p.formula()
    tok, pos = p.take()
    if tok is not None:
        raise FormulaSyntaxError("trailing input %r" % tok, pos)
    return f


def parse_formula_set(text, sig=SIG_PP_IMP):
    """Comma-separated formulas; the empty string is the empty set."""
    if text.strip() == "":
        return frozenset()
    out = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append(text[start:i])
            start = i + 1
    out.append(text[start:])
    return frozenset(parse_formula(part, sig) for part in out)


# --- rendering -----------------------------------------------------------

_PREC = {"imp": 1, "or": 2, "and": 3, "neg": 4, "circ": 4}
_SYM = {"neg": "~", "circ": "@", "and": " & ", "or": " | ", "imp": " => "}


_RENDER_CACHE = {}


def render_formula(f):
    hit = _RENDER_CACHE.get(f)
    if hit is None:
        hit = _RENDER_CACHE[f] = _render(f)
    return hit


def _render(f):
    if f.is_var:
        return f.head
    head = f.head
    if head in ("top", "bot"):
        return head
    if head in ("neg", "circ"):
        arg = f.args[0]
        body = render_formula(arg)
        if not arg.is_var and arg.head not in ("top", "bot") and _PREC[arg.head] < 4:
            body = "(" + body + ")"
        return _SYM[head] + body
    prec = _PREC[head]
    left, right = f.args
    ls = render_formula(left)
    rs = render_formula(right)
    # imp is right-associative; & and | are left-associative
    if _needs_parens(left, prec, left_side=True, assoc_right=(head == "imp")):
        ls = "(" + ls + ")"
    if _needs_parens(right, prec, left_side=False, assoc_right=(head == "imp")):
        rs = "(" + rs + ")"
    return ls + _SYM[head] + rs


def _needs_parens(child, parent_prec, left_side, assoc_right):
    if child.is_var or child.head in ("top", "bot"):
        return False
    cp = _PREC[child.head]
    if cp > parent_prec:
        return False
    if cp < parent_prec:
        return True
    # equal precedence: parenthesize against the associativity direction
    return left_side if assoc_right else not left_side


# --- structural operations -----------------------------------------------

def substitute(f, mapping):
    if f.is_var:
        return mapping.get(f.head, f)
    if not f.args:
        return f
    return Formula(f.head, tuple(substitute(a, mapping) for a in f.args))


def subformulas(fs):
    """Subformula closure of a formula or an iterable of formulas."""
    if isinstance(fs, Formula):
        fs = (fs,)
    out = set()
    stack = list(fs)
    while stack:
        f = stack.pop()
        if f in out:
            continue
        out.add(f)
        if f.args:
            stack.extend(f.args)
    return out


def variables(fs):
    return {g.head for g in subformulas(fs) if g.is_var}


def decompose(f):
    return subformulas(f), variables(f)


def generalized_subformulas(base, xi):
    """sub(base) plus all instantiations of xi members into sub(base)."""
    subs = subformulas(base)
    ordered = sorted(subs, key=canon_key)
    out = set(subs)
    for phi in sorted(xi, key=canon_key):
        vs = sorted(variables(phi))
        if not vs:
            out.add(phi)
            continue
        for combo in product(ordered, repeat=len(vs)):
            out.add(substitute(phi, dict(zip(vs, combo))))
    return out


def big_and(fs):
    """Right-associated conjunction; empty set yields top."""
    items = list(fs)
    if not items:
        return app("top")
    out = items[-1]
    for f in reversed(items[:-1]):
        out = app("and", f, out)
    return out


def big_or(fs):
    """Right-associated disjunction; empty set yields bot."""
    items = list(fs)
    if not items:
        return app("bot")
    out = items[-1]
    for f in reversed(items[:-1]):
        out = app("or", f, out)
    return out
