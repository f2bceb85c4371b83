"""Prefix term syntax shared by diagram and cell terms.

A term is ``head[raw]`` or ``head(t1, t2, ...)``; the bracketed payload is kept
as raw text and interpreted by the caller (object words, exchanges).
"""
from __future__ import annotations

from dataclasses import dataclass


class TermSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Term:
    head: str
    arg: str | None = None
    children: tuple["Term", ...] = ()


def parse_term(text: str) -> Term:
    parser = _Parser(text)
    term = parser.term()
    parser.skip_ws()
    if parser.pos != len(text):
        raise TermSyntaxError(f"trailing input at {parser.pos}: {text[parser.pos:]!r}")
    return term


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise TermSyntaxError(f"expected {ch!r} at {self.pos} in {self.text!r}")
        self.pos += 1

    def term(self) -> Term:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        head = self.text[start:self.pos]
        if not head:
            raise TermSyntaxError(f"expected a term at {start} in {self.text!r}")
        ch = self.peek()
        if ch == "[":
            self.pos += 1
            end = self.text.find("]", self.pos)
            if end < 0:
                raise TermSyntaxError(f"unclosed '[' in {self.text!r}")
            arg = self.text[self.pos:end].strip()
            self.pos = end + 1
            return Term(head, arg)
        if ch == "(":
            self.pos += 1
            children = [self.term()]
            while self.peek() == ",":
                self.pos += 1
                children.append(self.term())
            self.expect(")")
            return Term(head, None, tuple(children))
        raise TermSyntaxError(f"term {head!r} needs '[..]' or '(..)' in {self.text!r}")
