"""Tokenizer for the SPL/SQL dialect.

Keywords are case-insensitive; identifiers keep their written case. Host
parameters are `:name`, cell-code literals are Q'digits' (Q'' is the root),
strings are single-quoted with '' as the escape, and `--` comments run to
end of line. Lexing is total: any input either tokenizes fully or raises
one LexError with a position.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LexError

KEYWORDS = frozenset(
    {
        "SELECT", "FROM", "WHERE", "AND", "OR", "NOT", "NULL",
        "INTERSECT", "UNION", "MINUS", "EXCEPT",
        "CREATE", "TABLE", "INSERT", "INTO", "VALUES",
        "PROCEDURE", "CALL", "SQLSTATE",
    }
)

PUNCT = ("<=", ">=", "<>", "(", ")", ",", ";", "*", "=", "<", ">", "+", "-", "/")


@dataclass(frozen=True)
class Token:
    kind: str  # KEYWORD IDENT NUMBER STRING QCODE PARAM PUNCT EOF
    text: str  # lexeme; for STRING/QCODE/PARAM the decoded payload
    line: int
    col: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.line, self.col)


def _is_ident_start(c: str) -> bool:
    return c.isalpha() or c == "_"


def _is_ident_part(c: str) -> bool:
    return c.isalnum() or c == "_"


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def advance(k: int) -> None:
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
        if c == "-" and text.startswith("--", i):
            while i < n and text[i] != "\n":
                advance(1)
            continue
        start_line, start_col = line, col
        # Q'...' cell-code literal (Q alone stays an identifier)
        if c in "Qq" and i + 1 < n and text[i + 1] == "'":
            j = i + 2
            while j < n and text[j] != "'":
                j += 1
            if j >= n:
                raise LexError("unterminated cell-code literal", (start_line, start_col))
            payload = text[i + 2 : j]
            for ch in payload:
                if ch not in "0123":
                    raise LexError(
                        f"bad digit {ch!r} in cell-code literal", (start_line, start_col)
                    )
            if len(payload) > 16:
                raise LexError("cell-code literal deeper than 16", (start_line, start_col))
            advance(j + 1 - i)
            tokens.append(Token("QCODE", payload, start_line, start_col))
            continue
        if c == "'":
            j = i + 1
            buf = []
            while True:
                if j >= n:
                    raise LexError("unterminated string literal", (start_line, start_col))
                if text[j] == "'":
                    if j + 1 < n and text[j + 1] == "'":
                        buf.append("'")
                        j += 2
                        continue
                    break
                buf.append(text[j])
                j += 1
            advance(j + 1 - i)
            tokens.append(Token("STRING", "".join(buf), start_line, start_col))
            continue
        if c == ":":
            j = i + 1
            if j >= n or not _is_ident_start(text[j]):
                raise LexError("':' must be followed by a parameter name", (start_line, start_col))
            while j < n and _is_ident_part(text[j]):
                j += 1
            name = text[i + 1 : j]
            advance(j - i)
            tokens.append(Token("PARAM", name, start_line, start_col))
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    while k < n and text[k].isdigit():
                        k += 1
                    j = k
            lexeme = text[i:j]
            advance(j - i)
            tokens.append(Token("NUMBER", lexeme, start_line, start_col))
            continue
        if _is_ident_start(c):
            j = i
            while j < n and _is_ident_part(text[j]):
                j += 1
            lexeme = text[i:j]
            advance(j - i)
            kind = "KEYWORD" if lexeme.upper() in KEYWORDS else "IDENT"
            tokens.append(Token(kind, lexeme, start_line, start_col))
            continue
        for p in PUNCT:
            if text.startswith(p, i):
                advance(len(p))
                tokens.append(Token("PUNCT", p, start_line, start_col))
                break
        else:
            raise LexError(f"illegal character {c!r}", (start_line, start_col))
    tokens.append(Token("EOF", "", line, col))
    return tokens
