"""Tokenizer shared by the tactic and vernacular parsers.

Supports (* nested comments *), quoted notation strings, Unicode
subscripts inside identifiers, and the forall symbol.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParseError

_SUBSCRIPTS = "₀₁₂₃₄₅₆₇₈₉"
_IDENT_START = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz_")
_IDENT_CONT = _IDENT_START | set("0123456789'") | set(_SUBSCRIPTS)

# longest match first
_SYMBOLS = [":=", "=>", "->", "::", "++", "<-", ".", ",", ":", "|", "(", ")",
            "[", "]", "=", "+", ";", "-", "*", "_"]


@dataclass(frozen=True)
class Token:
    kind: str   # IDENT NUMBER STRING QVAR FORALL SYM EOF
    value: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def advance(k):
        nonlocal i, line, col
        for _ in range(k):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = text[i]
        if c in " \t\r\n":
            advance(1)
            continue
        if text.startswith("(*", i):
            depth, start_line, start_col = 1, line, col
            advance(2)
            while i < n and depth:
                if text.startswith("(*", i):
                    depth += 1
                    advance(2)
                elif text.startswith("*)", i):
                    depth -= 1
                    advance(2)
                else:
                    advance(1)
            if depth:
                raise ParseError("unterminated comment", start_line, start_col)
            continue
        if c == '"':
            start_line, start_col = line, col
            j = text.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated string", start_line, start_col)
            toks.append(Token("STRING", text[i + 1:j], start_line, start_col))
            advance(j + 1 - i)
            continue
        if c == "∀":  # forall
            toks.append(Token("FORALL", c, line, col))
            advance(1)
            continue
        if c == "?" and i + 1 < n and text[i + 1] in _IDENT_START:
            start_line, start_col = line, col
            j = i + 1
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            toks.append(Token("QVAR", text[i + 1:j], start_line, start_col))
            advance(j - i)
            continue
        if c in _IDENT_START:
            j = i
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            word = text[i:j]
            if word == "_" :
                toks.append(Token("SYM", "_", line, col))
            elif word == "forall":
                toks.append(Token("FORALL", word, line, col))
            else:
                toks.append(Token("IDENT", word, line, col))
            advance(j - i)
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("NUMBER", text[i:j], line, col))
            advance(j - i)
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token("SYM", sym, line, col))
                advance(len(sym))
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(Token("EOF", "", line, col))
    return toks


class TokenStream:
    """Cursor over a token list with backtracking marks."""

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead=0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        t = self.peek()
        if t.kind != "EOF":
            self.pos += 1
        return t

    def at_sym(self, *values) -> bool:
        t = self.peek()
        return t.kind == "SYM" and t.value in values

    def at_ident(self, *values) -> bool:
        t = self.peek()
        return t.kind == "IDENT" and (not values or t.value in values)

    def eat_sym(self, value) -> bool:
        if self.at_sym(value):
            self.next()
            return True
        return False

    def expect_sym(self, value) -> Token:
        t = self.peek()
        if not self.at_sym(value):
            raise ParseError(f"expected {value!r}, found {t.value!r}", t.line, t.col)
        return self.next()

    def expect_ident(self, value=None) -> Token:
        t = self.peek()
        if t.kind != "IDENT" or (value is not None and t.value != value):
            want = value or "identifier"
            raise ParseError(f"expected {want}, found {t.value!r}", t.line, t.col)
        return self.next()

    def error(self, message) -> ParseError:
        t = self.peek()
        return ParseError(message, t.line, t.col)

    def mark(self) -> int:
        return self.pos

    def reset(self, mark: int):
        self.pos = mark
