"""Formula syntax: AST nodes, parser, printer, desugaring, modal depth.

Surface grammar (ASCII):

    formula := iff
    iff     := imp ( "<->" imp )*          left-associative
    imp     := or ( "->" imp )?            right-associative
    or      := and ( "|" and )*
    and     := unary ( "&" unary )*
    unary   := ( "!" | "U" | "O" | "W" | "K" | "[" formula "]" ) unary | atom
    atom    := "true" | "false" | IDENT | "(" formula ")"

IDENT is [a-z][a-z0-9_]*.  "U" is the unknown-truth modality, "O" its
dual ("safe truth"), "W" the false-belief modality, "K" the plain box,
and "[psi] phi" an announcement.  Unary prefixes bind tighter than "&",
then "|", then "->", then "<->".
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields, replace

__all__ = [
    "Formula", "Atom", "Top", "Bot", "Not", "And", "Or", "Imp", "Iff",
    "Bullet", "Circ", "Wrong", "Box", "Announce",
    "ParseError", "parse", "pretty", "desugar", "modal_depth",
    "atoms_of", "has_announcement", "children", "subformula_at", "replace_at",
]

_ATOM_RE = re.compile(r"[a-z][a-z0-9_]*")


@dataclass(frozen=True)
class Formula:
    """Base class for formula nodes.  Instances are immutable and hashable."""


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def __post_init__(self) -> None:
        if not _ATOM_RE.fullmatch(self.name) or self.name in ("true", "false"):
            msg = f"bad atom name: {self.name!r}"
            raise ValueError(msg)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Bullet(Formula):
    """Unknown truth: the child is true here but its extension is no neighborhood."""

    child: Formula


@dataclass(frozen=True)
class Circ(Formula):
    """Dual of Bullet: if the child is true here, its extension is a neighborhood."""

    child: Formula


@dataclass(frozen=True)
class Wrong(Formula):
    """False belief: the child's extension is a neighborhood but the child fails here."""

    child: Formula


@dataclass(frozen=True)
class Box(Formula):
    child: Formula


@dataclass(frozen=True)
class Announce(Formula):
    announced: Formula
    body: Formula


def children(f: Formula) -> tuple[Formula, ...]:
    """Formula children of a node, in field order."""
    return tuple(v for fld in fields(f)
                 if isinstance(v := getattr(f, fld.name), Formula))


def subformula_at(f: Formula, path: tuple[int, ...]) -> Formula:
    for i in path:
        f = children(f)[i]
    return f


def replace_at(f: Formula, path: tuple[int, ...], new: Formula) -> Formula:
    """Copy of f with the subformula at path replaced by new."""
    if not path:
        return new
    kids = children(f)
    names = [fld.name for fld in fields(f)
             if isinstance(getattr(f, fld.name), Formula)]
    i = path[0]
    return replace(f, **{names[i]: replace_at(kids[i], path[1:], new)})


# --- parsing ---------------------------------------------------------------

class ParseError(Exception):
    """Malformed formula text.

    offset is the byte offset of the offending token in the UTF-8 input;
    expected is the set of token kinds acceptable at that point.
    """

    def __init__(self, message: str, offset: int, expected: frozenset[str]):
        super().__init__(message)
        self.offset = offset
        self.expected = expected


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int  # character offset


_MODALITIES = {"U": Bullet, "O": Circ, "W": Wrong, "K": Box}
_PUNCT = ("<->", "->", "!", "&", "|", "(", ")", "[", "]")
# token kinds that may start an operand
_STARTERS = frozenset(("!", "U", "O", "W", "K", "[", "(", "ident", "true", "false"))


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def _tokenize(text: str) -> list[_Token]:
    toks: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if text.startswith("<->", i):
            toks.append(_Token("<->", "<->", i))
            i += 3
            continue
        if text.startswith("->", i):
            toks.append(_Token("->", "->", i))
            i += 2
            continue
        if c in "!&|()[]":
            toks.append(_Token(c, c, i))
            i += 1
            continue
        if c in _MODALITIES:
            toks.append(_Token(c, c, i))
            i += 1
            continue
        m = _ATOM_RE.match(text, i)
        if m:
            word = m.group()
            kind = word if word in ("true", "false") else "ident"
            toks.append(_Token(kind, word, i))
            i = m.end()
            continue
        msg = f"unexpected character {c!r} at byte {_byte_offset(text, i)}"
        raise ParseError(msg, _byte_offset(text, i), _STARTERS)
    toks.append(_Token("eof", "", n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def _peek(self) -> _Token:
        return self.toks[self.i]

    def _next(self) -> _Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def _fail(self, expected: frozenset[str]) -> ParseError:
        t = self._peek()
        off = _byte_offset(self.text, t.pos)
        what = "end of input" if t.kind == "eof" else repr(t.text)
        opts = ", ".join(sorted(expected))
        msg = f"unexpected {what} at byte {off}; expected one of: {opts}"
        return ParseError(msg, off, expected)

    def _expect(self, kind: str) -> _Token:
        if self._peek().kind != kind:
            raise self._fail(frozenset((kind,)))
        return self._next()

    def parse(self) -> Formula:
        f = self._iff()
        if self._peek().kind != "eof":
            raise self._fail(frozenset(("eof",)))
        return f

    def _iff(self) -> Formula:
        f = self._imp()
        while self._peek().kind == "<->":
            self._next()
            f = Iff(f, self._imp())
        return f

    def _imp(self) -> Formula:
        f = self._or()
        if self._peek().kind == "->":
            self._next()
            return Imp(f, self._imp())
        return f

    def _or(self) -> Formula:
        f = self._and()
        while self._peek().kind == "|":
            self._next()
            f = Or(f, self._and())
        return f

    def _and(self) -> Formula:
        f = self._unary()
        while self._peek().kind == "&":
            self._next()
            f = And(f, self._unary())
        return f

    def _unary(self) -> Formula:
        t = self._peek()
        if t.kind == "!":
            self._next()
            return Not(self._unary())
        if t.kind in _MODALITIES:
            self._next()
            return _MODALITIES[t.kind](self._unary())
        if t.kind == "[":
            self._next()
            announced = self._iff()
            self._expect("]")
            return Announce(announced, self._unary())
        return self._atom()

    def _atom(self) -> Formula:
        t = self._peek()
        if t.kind == "ident":
            self._next()
            return Atom(t.text)
        if t.kind == "true":
            self._next()
            return Top()
        if t.kind == "false":
            self._next()
            return Bot()
        if t.kind == "(":
            self._next()
            f = self._iff()
            self._expect(")")
            return f
        raise self._fail(_STARTERS)


def parse(text: str) -> Formula:
    """Parse surface text into a Formula; raises ParseError on bad input."""
    return _Parser(text).parse()


# --- printing --------------------------------------------------------------

_LEVEL_IFF, _LEVEL_IMP, _LEVEL_OR, _LEVEL_AND, _LEVEL_UNARY, _LEVEL_ATOM = range(1, 7)


def _level(f: Formula) -> int:
    if isinstance(f, (Atom, Top, Bot)):
        return _LEVEL_ATOM
    if isinstance(f, (Not, Bullet, Circ, Wrong, Box, Announce)):
        return _LEVEL_UNARY
    if isinstance(f, And):
        return _LEVEL_AND
    if isinstance(f, Or):
        return _LEVEL_OR
    if isinstance(f, Imp):
        return _LEVEL_IMP
    return _LEVEL_IFF


def _wrap(f: Formula, need_above: int) -> str:
    s = pretty(f)
    return f"({s})" if _level(f) < need_above else s


def pretty(f: Formula) -> str:
    """Minimal-parenthesis rendering; round-trips through parse."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Not):
        return f"! {_wrap(f.child, _LEVEL_UNARY)}"
    if isinstance(f, Bullet):
        return f"U {_wrap(f.child, _LEVEL_UNARY)}"
    if isinstance(f, Circ):
        return f"O {_wrap(f.child, _LEVEL_UNARY)}"
    if isinstance(f, Wrong):
        return f"W {_wrap(f.child, _LEVEL_UNARY)}"
    if isinstance(f, Box):
        return f"K {_wrap(f.child, _LEVEL_UNARY)}"
    if isinstance(f, Announce):
        return f"[{pretty(f.announced)}] {_wrap(f.body, _LEVEL_UNARY)}"
    if isinstance(f, And):
        return f"{_wrap(f.left, _LEVEL_AND)} & {_wrap(f.right, _LEVEL_AND + 1)}"
    if isinstance(f, Or):
        return f"{_wrap(f.left, _LEVEL_OR)} | {_wrap(f.right, _LEVEL_OR + 1)}"
    if isinstance(f, Imp):
        # right-associative: bare Imp allowed on the right only
        return f"{_wrap(f.left, _LEVEL_IMP + 1)} -> {_wrap(f.right, _LEVEL_IMP)}"
    if isinstance(f, Iff):
        return f"{_wrap(f.left, _LEVEL_IFF)} <-> {_wrap(f.right, _LEVEL_IFF + 1)}"
    msg = f"not a formula: {f!r}"
    raise TypeError(msg)


# --- desugaring ------------------------------------------------------------

CORE = "core"
FULL = "full"


def desugar(f: Formula, target: str = CORE) -> Formula:
    """Rewrite into the target fragment.

    "core" keeps only Atom, Top, Not, And, Bullet, Wrong and Announce:
    Bot becomes ! true, Or/Imp/Iff expand through !,&, O phi becomes
    ! U phi, and K phi becomes the Or-free unfolding of
    W phi | (O phi & phi).  "full" returns the formula unchanged.
    """
    if target == FULL:
        return f
    if target != CORE:
        msg = f"unknown desugar target: {target!r}"
        raise ValueError(msg)
    return _core(f)


def _core(f: Formula) -> Formula:
    if isinstance(f, (Atom, Top)):
        return f
    if isinstance(f, Bot):
        return Not(Top())
    if isinstance(f, Not):
        return Not(_core(f.child))
    if isinstance(f, And):
        return And(_core(f.left), _core(f.right))
    if isinstance(f, Or):
        return Not(And(Not(_core(f.left)), Not(_core(f.right))))
    if isinstance(f, Imp):
        return Not(And(_core(f.left), Not(_core(f.right))))
    if isinstance(f, Iff):
        left, right = _core(f.left), _core(f.right)
        return And(Not(And(left, Not(right))), Not(And(right, Not(left))))
    if isinstance(f, Bullet):
        return Bullet(_core(f.child))
    if isinstance(f, Circ):
        return Not(Bullet(_core(f.child)))
    if isinstance(f, Wrong):
        return Wrong(_core(f.child))
    if isinstance(f, Box):
        c = _core(f.child)
        return Not(And(Not(Wrong(c)), Not(And(Not(Bullet(c)), c))))
    if isinstance(f, Announce):
        return Announce(_core(f.announced), _core(f.body))
    msg = f"not a formula: {f!r}"
    raise TypeError(msg)


# --- measures --------------------------------------------------------------

def modal_depth(f: Formula) -> int:
    """Nesting depth of U/O/W/K/announcement operators."""
    if isinstance(f, (Atom, Top, Bot)):
        return 0
    kid_depth = max(modal_depth(c) for c in children(f))
    if isinstance(f, (Bullet, Circ, Wrong, Box, Announce)):
        return 1 + kid_depth
    return kid_depth


def atoms_of(f: Formula) -> tuple[str, ...]:
    """Sorted atom names occurring in f."""
    acc: set[str] = set()

    def walk(g: Formula) -> None:
        if isinstance(g, Atom):
            acc.add(g.name)
        for c in children(g):
            walk(c)

    walk(f)
    return tuple(sorted(acc))


def has_announcement(f: Formula) -> bool:
    if isinstance(f, Announce):
        return True
    return any(has_announcement(c) for c in children(f))
