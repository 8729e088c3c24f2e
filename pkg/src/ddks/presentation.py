"""Presentations: a small text DSL, words, and Todd-Coxeter enumeration.

The DSL is line-insensitive::

    # S3
    group "S3" {
        gens x, y;
        rel x^2 = 1;
        rel y^3 = (x*y)^2 = 1;     # chained equalities give one relator per '='
        rel [x, y^-1] = y;         # commutator sugar, [a,b] = a b a^-1 b^-1
    }

The ``group "<label>" { ... }`` wrapper is optional.  ``gens x1..x6`` is
shorthand for ``gens x1, x2, x3, x4, x5, x6``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .group import FiniteGroup

DEFAULT_MAX_COSETS = 1 << 16


class PresentationError(ValueError):
    pass


class PresentationSyntaxError(PresentationError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class CosetLimitExceeded(RuntimeError):
    pass


# -- words ---------------------------------------------------------------------


@dataclass(frozen=True)
class Word:
    """A reduced word: ``(generator index, nonzero exponent)`` pairs, no two
    adjacent pairs on the same generator."""

    syllables: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> Word:
        out: list[list[int]] = []
        for g, e in pairs:
            if e == 0:
                continue
            if out and out[-1][0] == g:
                out[-1][1] += e
                if out[-1][1] == 0:
                    out.pop()
            else:
                out.append([g, e])
        return cls(tuple((g, e) for g, e in out))

    @classmethod
    def gen(cls, g: int, e: int = 1) -> Word:
        return cls.of([(g, e)])

    def __mul__(self, other: Word) -> Word:
        return Word.of(self.syllables + other.syllables)

    def inverse(self) -> Word:
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __pow__(self, k: int) -> Word:
        if k < 0:
            return self.inverse() ** (-k)
        w = Word()
        for _ in range(k):
            w = w * self
        return w

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def is_identity(self) -> bool:
        return not self.syllables

    def letters(self) -> list[int]:
        """Flatten to letters; generator ``g`` is ``2g``, its inverse ``2g+1``."""
        out = []
        for g, e in self.syllables:
            out.extend([2 * g + (e < 0)] * abs(e))
        return out

    def generators(self) -> set[int]:
        return {g for g, _ in self.syllables}

    def format(self, names: Sequence[str]) -> str:
        if not self.syllables:
            return "1"
        parts = []
        for g, e in self.syllables:
            parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
        return "*".join(parts)


def comm_word(a: Word, b: Word) -> Word:
    return a * b * a.inverse() * b.inverse()


@dataclass
class Presentation:
    generators: list[str]
    relators: list[Word]
    label: str | None = None
    equations: list[tuple[Word, Word]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.generators:
            raise PresentationError("empty generator list")
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("generator names must be unique")
        ng = len(self.generators)
        for r in self.relators:
            if any(g >= ng or g < 0 for g in r.generators()):
                raise PresentationError("relator references an undeclared generator")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def format(self) -> str:
        lines = [f'group "{self.label or ""}" {{', f"    gens {', '.join(self.generators)};"]
        if self.equations:
            for a, b in self.equations:
                lines.append(f"    rel {a.format(self.generators)} = {b.format(self.generators)};")
        else:
            for r in self.relators:
                lines.append(f"    rel {r.format(self.generators)} = 1;")
        lines.append("}")
        return "\n".join(lines)


# -- parser --------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+) |
    (?P<comment>\#[^\n]*) |
    (?P<string>"[^"\n]*") |
    (?P<range>[A-Za-z_][A-Za-z_]*\d+\.\.[A-Za-z_][A-Za-z_]*\d+) |
    (?P<int>-?\d+) |
    (?P<name>[A-Za-z_][A-Za-z0-9_]*) |
    (?P<sym>[*^()\[\],;={}])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PresentationSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, s, line, pos - line_start + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            line_start = pos + s.rfind("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = _tokenize(text)
        self.i = 0
        self.names: dict[str, int] = {}
        self.gens: list[str] = []

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None) -> PresentationSyntaxError:
        tok = tok or self.cur
        return PresentationSyntaxError(msg, tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.cur.kind in ("sym", "name") and self.cur.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            got = self.cur.text or "end of input"
            raise self.error(f"expected {text!r}, got {got!r}")

    def parse(self) -> Presentation:
        P = self.parse_block()
        if self.cur.kind != "eof":
            raise self.error("trailing input after group block")
        return P

    def parse_all(self) -> list[Presentation]:
        out = []
        while self.cur.kind != "eof":
            if not (self.cur.kind == "name" and self.cur.text == "group"):
                raise self.error("expected 'group' block")
            out.append(self.parse_block())
        return out

    def parse_block(self) -> Presentation:
        self.names = {}
        self.gens = []
        label = None
        braced = False
        if self.accept("group"):
            if self.cur.kind != "string":
                raise self.error("expected quoted group label")
            label = self.cur.text[1:-1]
            self.i += 1
            self.expect("{")
            braced = True
        equations: list[tuple[Word, Word]] = []
        relators: list[Word] = []
        while True:
            tok = self.cur
            if braced and self.accept("}"):
                break
            if tok.kind == "eof":
                if braced:
                    raise self.error("missing closing '}'")
                break
            if self.accept("gens"):
                self.parse_gens()
            elif self.accept("rel"):
                if not self.gens:
                    raise self.error("relation before any 'gens' declaration", tok)
                sides = [self.parse_word()]
                while self.accept("="):
                    sides.append(self.parse_word())
                if len(sides) < 2:
                    raise self.error("expected '=' in relation")
                for a, b in zip(sides, sides[1:]):
                    equations.append((a, b))
                    relators.append(a * b.inverse())
                self.expect(";")
            else:
                raise self.error(f"expected 'gens' or 'rel', got {tok.text!r}")
        if not self.gens:
            raise PresentationError("empty generator list")
        return Presentation(list(self.gens), relators, label=label, equations=equations)

    def parse_gens(self) -> None:
        while True:
            tok = self.cur
            if tok.kind == "range":
                lo, hi = tok.text.split("..")
                ml = re.fullmatch(r"([A-Za-z_]+)(\d+)", lo)
                mh = re.fullmatch(r"([A-Za-z_]+)(\d+)", hi)
                if ml.group(1) != mh.group(1) or int(ml.group(2)) > int(mh.group(2)):
                    raise self.error("bad generator range", tok)
                names = [f"{ml.group(1)}{k}" for k in range(int(ml.group(2)), int(mh.group(2)) + 1)]
                self.i += 1
            elif tok.kind == "name" and tok.text not in ("gens", "rel", "group"):
                names = [tok.text]
                self.i += 1
            else:
                raise self.error("expected generator name", tok)
            for nm in names:
                if nm in self.names:
                    raise self.error(f"duplicate generator {nm!r}", tok)
                self.names[nm] = len(self.gens)
                self.gens.append(nm)
            if not self.accept(","):
                break
        self.expect(";")

    def parse_word(self) -> Word:
        w = self.parse_term()
        while self.accept("*"):
            w = w * self.parse_term()
        return w

    def parse_term(self) -> Word:
        w = self.parse_atom()
        if self.accept("^"):
            if self.cur.kind != "int":
                raise self.error("expected integer exponent")
            w = w ** int(self.cur.text)
            self.i += 1
        return w

    def parse_atom(self) -> Word:
        tok = self.cur
        if tok.kind == "int" and tok.text == "1":
            self.i += 1
            return Word()
        if tok.kind == "name":
            if tok.text not in self.names:
                raise self.error(f"undeclared generator {tok.text!r}", tok)
            self.i += 1
            return Word.gen(self.names[tok.text])
        if self.accept("("):
            w = self.parse_word()
            self.expect(")")
            return w
        if self.accept("["):
            a = self.parse_word()
            self.expect(",")
            b = self.parse_word()
            self.expect("]")
            return comm_word(a, b)
        got = tok.text or "end of input"
        raise self.error(f"expected a word, got {got!r}", tok)


def parse_presentation(text: str) -> Presentation:
    """Parse DSL text into a :class:`Presentation`."""
    return _Parser(text).parse()


def parse_presentations(text: str) -> list[Presentation]:
    """Parse a file holding any number of ``group "label" { ... }`` blocks."""
    return _Parser(text).parse_all()


# -- Todd-Coxeter --------------------------------------------------------------


class _CosetTable:
    """HLT coset enumeration over the trivial subgroup with immediate
    coincidence processing."""

    def __init__(self, ngens: int, max_cosets: int) -> None:
        self.ncols = 2 * ngens
        self.rows: list[list[int]] = [[-1] * self.ncols]
        self.parent: list[int] = [0]
        self.live = 1
        self.max_cosets = max_cosets

    def find(self, c: int) -> int:
        p = self.parent
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def define(self, c: int, x: int) -> int:
        if self.live >= self.max_cosets:
            raise CosetLimitExceeded(
                f"coset limit {self.max_cosets} exceeded (group infinite or limit too small)"
            )
        d = len(self.rows)
        self.rows.append([-1] * self.ncols)
        self.parent.append(d)
        self.live += 1
        self.rows[c][x] = d
        self.rows[d][x ^ 1] = c
        return d

    def _merge(self, a: int, b: int, queue: list[int]) -> None:
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.parent[b] = a
        self.live -= 1
        queue.append(b)

    def coincidence(self, a: int, b: int) -> None:
        queue: list[int] = []
        self._merge(a, b, queue)
        rows = self.rows
        k = 0
        while k < len(queue):
            c = queue[k]
            k += 1
            for x in range(self.ncols):
                d = rows[c][x]
                if d == -1:
                    continue
                rows[d][x ^ 1] = -1
                c1, d1 = self.find(c), self.find(d)
                if rows[c1][x] != -1:
                    self._merge(d1, rows[c1][x], queue)
                elif rows[d1][x ^ 1] != -1:
                    self._merge(c1, rows[d1][x ^ 1], queue)
                else:
                    rows[c1][x] = d1
                    rows[d1][x ^ 1] = c1

    def scan_and_fill(self, c: int, word: Sequence[int]) -> None:
        rows = self.rows
        f = b = c
        i, j = 0, len(word) - 1
        while True:
            while i <= j and rows[f][word[i]] != -1:
                f = rows[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and rows[b][word[j] ^ 1] != -1:
                b = rows[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                rows[f][word[i]] = b
                rows[b][word[i] ^ 1] = f
                return
            self.define(f, word[i])

    def run(self, relators: list[list[int]]) -> None:
        c = 0
        while c < len(self.rows):
            for rel in relators:
                if self.parent[c] != c:
                    break
                self.scan_and_fill(c, rel)
            if self.parent[c] == c:
                for x in range(self.ncols):
                    if self.parent[c] != c:
                        break
                    if self.rows[c][x] == -1:
                        self.define(c, x)
            c += 1

    def standardize(self) -> tuple[list[list[int]], list[tuple[int, int]]]:
        """Renumber live cosets in BFS order from coset 0.

        Returns the compacted table and, per new coset, ``(parent, column)`` of
        its defining edge (``(-1, -1)`` for coset 0).
        """
        new = {0: 0}
        order = [0]
        tree = [(-1, -1)]
        k = 0
        while k < len(order):
            c = order[k]
            k += 1
            for x in range(self.ncols):
                d = self.find(self.rows[c][x])
                if d not in new:
                    new[d] = len(order)
                    order.append(d)
                    tree.append((new[c], x))
        table = [[new[self.find(self.rows[c][x])] for x in range(self.ncols)] for c in order]
        return table, tree


def todd_coxeter(P: Presentation, max_cosets: int = DEFAULT_MAX_COSETS) -> FiniteGroup:
    """Enumerate the regular representation of the presented group.

    The result's element ``k`` is the ``k``-th coset in BFS order, so the
    numbering depends only on the presentation (including generator order).
    ``G.generators`` maps each generator name to its element identifier.
    """
    ct = _CosetTable(P.ngens, max_cosets)
    rels = [r.letters() for r in P.relators if not r.is_identity()]
    rels.sort(key=len)
    ct.run(rels)
    table, tree = ct.standardize()
    n = len(table)
    perms = np.asarray(table, dtype=np.int32).T  # perms[x][c] = c . x
    mult = np.empty((n, n), dtype=np.int32)
    mult[:, 0] = np.arange(n)
    for h in range(1, n):
        p, x = tree[h]
        mult[:, h] = perms[x][mult[:, p]]
    gens = {name: int(table[0][2 * i]) for i, name in enumerate(P.generators)}
    return FiniteGroup(mult, label=P.label, generators=gens)


def evaluate_word(G: FiniteGroup, assignment: Mapping[int, int] | Sequence[int], w: Word) -> int:
    """Image of ``w`` under generator index -> element assignment."""
    r = 0
    rows = G.rows
    for g, e in w.syllables:
        try:
            x = assignment[g]
        except (KeyError, IndexError):
            raise PresentationError(f"generator {g} is unassigned") from None
        if x is None:
            raise PresentationError(f"generator {g} is unassigned")
        if e < 0:
            x, e = G.inv[x], -e
        for _ in range(e):
            r = rows[r][x]
    return r


def group_from_text(text: str, max_cosets: int = DEFAULT_MAX_COSETS) -> FiniteGroup:
    P = parse_presentation(text)
    G = todd_coxeter(P, max_cosets)
    G.presentation = P  # type: ignore[attr-defined]
    return G
