"""Minimal s-expression reader shared by the formula, signature and model formats."""

from __future__ import annotations

from dataclasses import dataclass

from folmt.errors import ParseError


@dataclass(frozen=True)
class Atom:
    text: str
    pos: int


@dataclass(frozen=True)
class SList:
    items: tuple
    pos: int

    def head(self) -> str | None:
        if self.items and isinstance(self.items[0], Atom):
            return self.items[0].text
        return None


SExp = Atom | SList


def _tokens(text: str):
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield c, i
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "();":
                j += 1
            yield text[i:j], i
            i = j


def read_all(text: str) -> list[SExp]:
    """Read every top-level s-expression in ``text``."""
    stack: list[tuple[list, int]] = []
    out: list[SExp] = []
    for tok, pos in _tokens(text):
        if tok == "(":
            stack.append(([], pos))
        elif tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'", pos)
            items, start = stack.pop()
            node = SList(tuple(items), start)
            (stack[-1][0] if stack else out).append(node)
        else:
            node = Atom(tok, pos)
            (stack[-1][0] if stack else out).append(node)
    if stack:
        raise ParseError("unbalanced '('", stack[-1][1])
    return out


def read_one(text: str) -> SExp:
    exps = read_all(text)
    if len(exps) != 1:
        pos = exps[1].pos if len(exps) > 1 else 0
        raise ParseError(f"expected exactly one expression, found {len(exps)}", pos)
    return exps[0]


def expect_nat(node: SExp, what: str = "natural number") -> int:
    if not isinstance(node, Atom) or not node.text.isdigit():
        raise ParseError(f"expected {what}", node.pos)
    return int(node.text)


def expect_name(node: SExp) -> str:
    if not isinstance(node, Atom):
        raise ParseError("expected a symbol name", node.pos)
    return node.text
