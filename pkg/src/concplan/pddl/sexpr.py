"""S-expression reader with source positions."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..model import PlanningError


@dataclass(frozen=True)
class Span:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


class PddlError(PlanningError):
    """Any error while reading PDDL; always carries a source span."""

    def __init__(self, message: str, span: Span | None = None, source: str = ""):
        self.span = span
        self.message = message
        self.source = source
        where = f"{source}:" if source else ""
        where += f"{span}: " if span else ""
        super().__init__(f"{where}{message}")


class PddlSyntaxError(PddlError):
    pass


class UndeclaredNameError(PddlError):
    pass


class ArityError(PddlError):
    pass


class NameClashError(PddlError):
    pass


class UnsupportedError(PddlError):
    pass


@dataclass(frozen=True)
class Sym:
    text: str
    span: Span

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class SList:
    items: tuple
    span: Span

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __iter__(self):
        return iter(self.items)

    def head(self) -> str | None:
        if self.items and isinstance(self.items[0], Sym):
            return self.items[0].text
        return None


_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s()]+")


def tokenize(text: str):
    line, line_start = 1, 0
    for m in _TOKEN.finditer(text):
        tok = m.group()
        start = m.start()
        if tok[0].isspace() or tok[0] == ";":
            nl = tok.count("\n")
            if nl:
                line += nl
                line_start = start + tok.rfind("\n") + 1
            continue
        yield tok, Span(line, start - line_start + 1)


def read(text: str, source: str = "") -> list:
    """Parse every top-level expression; symbols are lower-cased."""
    stack: list[list] = [[]]
    spans: list[Span] = []
    for tok, span in tokenize(text):
        if tok == "(":
            stack.append([])
            spans.append(span)
        elif tok == ")":
            if len(stack) == 1:
                raise PddlSyntaxError("unbalanced ')'", span, source)
            items = stack.pop()
            stack[-1].append(SList(tuple(items), spans.pop()))
        else:
            stack[-1].append(Sym(tok.lower(), span))
    if len(stack) != 1:
        raise PddlSyntaxError("unterminated '('", spans[-1], source)
    return stack[0]


def read_one(text: str, source: str = "") -> SList:
    exprs = read(text, source)
    if len(exprs) != 1 or not isinstance(exprs[0], SList):
        span = exprs[1].span if len(exprs) > 1 else Span(1, 1)
        raise PddlSyntaxError("expected exactly one parenthesized expression", span, source)
    return exprs[0]
