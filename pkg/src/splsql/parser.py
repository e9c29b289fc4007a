"""Recursive-descent parser for the SPL/SQL dialect.

Grammar highlights (full EBNF in docs/grammar.md): set operations are
left-associative with INTERSECT binding tighter than UNION/MINUS; EXCEPT is
a synonym of MINUS; a bare table name may stand as a set-operation operand
and desugars to SELECT * FROM that table; a procedure is a header naming
SQLSTATE plus host parameters, a ';', and a single query body. The legacy
column spelling CODIGO is normalized to CODE wherever a column is named.
"""

from __future__ import annotations

from typing import Optional, Sequence, Union

from . import sqlast as ast
from .errors import ParseError
from .lexer import Token, tokenize
from .quadcode import Quadcode
from .sqlast import Kind

_KIND_NAMES = {"TEXT": Kind.TEXT, "NUMBER": Kind.NUMBER, "CODE": Kind.CODE}


def _norm_column(name: str) -> str:
    return "CODE" if name.upper() == "CODIGO" else name


class _Parser:
    def __init__(self, tokens: Sequence[Token]):
        self.tokens = list(tokens)
        self.pos = 0

    # -- token plumbing --------------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        tok = self.peek()
        if tok.kind != kind:
            return False
        return text is None or tok.text.upper() == text

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return tok.kind == "KEYWORD" and tok.text.upper() in words

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        if self.at(kind, text):
            return self.next()
        return None

    def expect(self, kind: str, text: Optional[str] = None, what: Optional[str] = None) -> Token:
        if self.at(kind, text):
            return self.next()
        tok = self.peek()
        expected = what or (text if text else kind)
        found = tok.text if tok.kind != "EOF" else "end of input"
        raise ParseError(
            f"expected {expected}, found {found!r}", tok.span, expected=[expected]
        )

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok.kind == "KEYWORD" and tok.text.upper() == word:
            return self.next()
        found = tok.text if tok.kind != "EOF" else "end of input"
        raise ParseError(f"expected {word}, found {found!r}", tok.span, expected=[word])

    def expect_ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind == "IDENT":
            return self.next()
        found = tok.text if tok.kind != "EOF" else "end of input"
        raise ParseError(f"expected {what}, found {found!r}", tok.span, expected=[what])

    # -- statements -------------------------------------------------------------

    def parse_statement(self) -> ast.Statement:
        tok = self.peek()
        if tok.kind == "KEYWORD":
            word = tok.text.upper()
            if word == "CREATE":
                return self.create_table()
            if word == "INSERT":
                return self.insert()
            if word == "PROCEDURE":
                return self.procedure_decl()
            if word == "CALL":
                return self.call()
            if word == "SELECT":
                return self.query()
        if tok.kind == "PUNCT" and tok.text == "(":
            return self.query()
        found = tok.text if tok.kind != "EOF" else "end of input"
        raise ParseError(
            f"expected a statement, found {found!r}",
            tok.span,
            expected=["SELECT", "CREATE", "INSERT", "PROCEDURE", "CALL", "("],
        )

    def create_table(self) -> ast.CreateTable:
        start = self.expect_keyword("CREATE")
        self.expect_keyword("TABLE")
        name = self.expect_ident("table name")
        self.expect("PUNCT", "(")
        columns = [self.column_def()]
        while self.accept("PUNCT", ","):
            columns.append(self.column_def())
        self.expect("PUNCT", ")")
        return ast.CreateTable(name.text, tuple(columns), span=start.span)

    def column_def(self) -> ast.ColumnDef:
        name = self.expect_ident("column name")
        kind = self.kind_name()
        return ast.ColumnDef(_norm_column(name.text), kind, span=name.span)

    def kind_name(self) -> Kind:
        tok = self.expect_ident("column kind (TEXT, NUMBER, CODE or CHAR(n))")
        word = tok.text.upper()
        if word == "CHAR":
            self.expect("PUNCT", "(")
            self.expect("NUMBER")
            self.expect("PUNCT", ")")
            return Kind.TEXT
        kind = _KIND_NAMES.get(word)
        if kind is None:
            raise ParseError(
                f"unknown column kind {tok.text!r}",
                tok.span,
                expected=["TEXT", "NUMBER", "CODE", "CHAR"],
            )
        return kind

    def insert(self) -> ast.Insert:
        start = self.expect_keyword("INSERT")
        self.expect_keyword("INTO")
        name = self.expect_ident("table name")
        self.expect_keyword("VALUES")
        rows = [self.value_row()]
        while self.accept("PUNCT", ","):
            rows.append(self.value_row())
        return ast.Insert(name.text, tuple(rows), span=start.span)

    def value_row(self) -> tuple[ast.Literal, ...]:
        self.expect("PUNCT", "(")
        values = [self.literal()]
        while self.accept("PUNCT", ","):
            values.append(self.literal())
        self.expect("PUNCT", ")")
        return tuple(values)

    def literal(self) -> ast.Literal:
        tok = self.peek()
        if tok.kind == "STRING":
            self.next()
            return ast.Literal(tok.text, Kind.TEXT, span=tok.span)
        if tok.kind == "QCODE":
            self.next()
            return ast.Literal(Quadcode(tok.text), Kind.CODE, span=tok.span)
        if tok.kind == "NUMBER":
            self.next()
            return ast.Literal(float(tok.text), Kind.NUMBER, span=tok.span)
        if tok.kind == "PUNCT" and tok.text == "-" and self.peek(1).kind == "NUMBER":
            self.next()
            num = self.next()
            return ast.Literal(-float(num.text), Kind.NUMBER, span=tok.span)
        if tok.kind == "KEYWORD" and tok.text.upper() == "NULL":
            self.next()
            return ast.Literal(None, None, span=tok.span)
        found = tok.text if tok.kind != "EOF" else "end of input"
        raise ParseError(
            f"expected a literal, found {found!r}",
            tok.span,
            expected=["string", "number", "Q'...'", "NULL"],
        )

    def procedure_decl(self) -> ast.ProcedureDecl:
        start = self.expect_keyword("PROCEDURE")
        name = self.expect_ident("procedure name")
        self.expect("PUNCT", "(")
        self.expect_keyword("SQLSTATE")
        params = []
        while self.accept("PUNCT", ","):
            params.append(self.param_decl())
        self.expect("PUNCT", ")")
        self.expect("PUNCT", ";")
        body = self.query()
        return ast.ProcedureDecl(name.text, tuple(params), body, span=start.span)

    def param_decl(self) -> ast.ParamDecl:
        tok = self.peek()
        if tok.kind != "PARAM":
            found = tok.text if tok.kind != "EOF" else "end of input"
            raise ParseError(
                f"expected :parameter, found {found!r}", tok.span, expected=[":name"]
            )
        self.next()
        type_tok = self.expect_ident("parameter type (CHAR(n) or CODE)")
        word = type_tok.text.upper()
        if word == "CHAR":
            self.expect("PUNCT", "(")
            length = self.expect("NUMBER")
            self.expect("PUNCT", ")")
            return ast.ParamDecl(tok.text, "CHAR", int(float(length.text)), span=tok.span)
        if word == "CODE":
            return ast.ParamDecl(tok.text, "CODE", span=tok.span)
        raise ParseError(
            f"unknown parameter type {type_tok.text!r}",
            type_tok.span,
            expected=["CHAR", "CODE"],
        )

    def call(self) -> ast.Call:
        start = self.expect_keyword("CALL")
        name = self.expect_ident("procedure name")
        self.expect("PUNCT", "(")
        args = []
        if not self.at("PUNCT", ")"):
            args.append(self.literal())
            while self.accept("PUNCT", ","):
                args.append(self.literal())
        self.expect("PUNCT", ")")
        return ast.Call(name.text, tuple(args), span=start.span)

    # -- queries ------------------------------------------------------------------

    def query(self) -> ast.Query:
        node = self.intersect_expr()
        while self.at_keyword("UNION", "MINUS", "EXCEPT"):
            op_tok = self.next()
            op = "MINUS" if op_tok.text.upper() == "EXCEPT" else op_tok.text.upper()
            right = self.intersect_expr()
            node = ast.SetOp(op, node, right, span=op_tok.span)
        return node

    def intersect_expr(self) -> ast.Query:
        node = self.query_primary()
        while self.at_keyword("INTERSECT"):
            op_tok = self.next()
            right = self.query_primary()
            node = ast.SetOp("INTERSECT", node, right, span=op_tok.span)
        return node

    def query_primary(self) -> ast.Query:
        tok = self.peek()
        if tok.kind == "KEYWORD" and tok.text.upper() == "SELECT":
            return self.select_core()
        if tok.kind == "PUNCT" and tok.text == "(":
            self.next()
            inner = self.query()
            self.expect("PUNCT", ")")
            return inner
        if tok.kind == "IDENT":
            # bare table name as a set-operation operand
            self.next()
            return ast.Select(None, (ast.TableRef(tok.text, span=tok.span),), span=tok.span)
        found = tok.text if tok.kind != "EOF" else "end of input"
        raise ParseError(
            f"expected a query, found {found!r}",
            tok.span,
            expected=["SELECT", "(", "table name"],
        )

    def select_core(self) -> ast.Select:
        start = self.expect_keyword("SELECT")
        if self.accept("PUNCT", "*"):
            projection = None
        else:
            cols = [_norm_column(self.expect_ident("column name").text)]
            while self.accept("PUNCT", ","):
                cols.append(_norm_column(self.expect_ident("column name").text))
            projection = tuple(cols)
        self.expect_keyword("FROM")
        items = [self.from_item()]
        while self.accept("PUNCT", ","):
            items.append(self.from_item())
        where = None
        if self.at_keyword("WHERE"):
            self.next()
            where = self.expr()
        return ast.Select(projection, tuple(items), where, span=start.span)

    def from_item(self) -> ast.FromItem:
        tok = self.peek()
        if tok.kind == "IDENT":
            self.next()
            return ast.TableRef(tok.text, span=tok.span)
        if tok.kind == "PUNCT" and tok.text == "(":
            self.next()
            inner = self.query()
            self.expect("PUNCT", ")")
            return ast.SubqueryRef(inner, span=tok.span)
        found = tok.text if tok.kind != "EOF" else "end of input"
        raise ParseError(
            f"expected a table name or subquery, found {found!r}",
            tok.span,
            expected=["table name", "("],
        )

    # -- expressions ----------------------------------------------------------------

    def expr(self) -> ast.Expr:
        return self.or_expr()

    def or_expr(self) -> ast.Expr:
        node = self.and_expr()
        while self.at_keyword("OR"):
            tok = self.next()
            node = ast.BinLogic("OR", node, self.and_expr(), span=tok.span)
        return node

    def and_expr(self) -> ast.Expr:
        node = self.not_expr()
        while self.at_keyword("AND"):
            tok = self.next()
            node = ast.BinLogic("AND", node, self.not_expr(), span=tok.span)
        return node

    def not_expr(self) -> ast.Expr:
        if self.at_keyword("NOT"):
            tok = self.next()
            return ast.Not(self.not_expr(), span=tok.span)
        return self.comparison()

    def comparison(self) -> ast.Expr:
        node = self.additive()
        tok = self.peek()
        if tok.kind == "PUNCT" and tok.text in ("=", "<>", "<", "<=", ">", ">="):
            self.next()
            right = self.additive()
            return ast.Compare(tok.text, node, right, span=tok.span)
        return node

    def additive(self) -> ast.Expr:
        node = self.multiplicative()
        while self.at("PUNCT", "+") or self.at("PUNCT", "-"):
            tok = self.next()
            node = ast.Arith(tok.text, node, self.multiplicative(), span=tok.span)
        return node

    def multiplicative(self) -> ast.Expr:
        node = self.unary()
        while self.at("PUNCT", "*") or self.at("PUNCT", "/"):
            tok = self.next()
            node = ast.Arith(tok.text, node, self.unary(), span=tok.span)
        return node

    def unary(self) -> ast.Expr:
        if self.at("PUNCT", "-"):
            tok = self.next()
            return ast.Neg(self.unary(), span=tok.span)
        return self.atom()

    def atom(self) -> ast.Expr:
        tok = self.peek()
        if tok.kind in ("STRING", "QCODE", "NUMBER") or (
            tok.kind == "KEYWORD" and tok.text.upper() == "NULL"
        ):
            return self.literal()
        if tok.kind == "PARAM":
            self.next()
            return ast.Param(tok.text, span=tok.span)
        if tok.kind == "IDENT":
            self.next()
            if self.at("PUNCT", "("):
                self.next()
                args = []
                if not self.at("PUNCT", ")"):
                    args.append(self.expr())
                    while self.accept("PUNCT", ","):
                        args.append(self.expr())
                self.expect("PUNCT", ")")
                return ast.Func(tok.text.upper(), tuple(args), span=tok.span)
            return ast.Column(_norm_column(tok.text), span=tok.span)
        if tok.kind == "PUNCT" and tok.text == "(":
            self.next()
            inner = self.expr()
            self.expect("PUNCT", ")")
            return inner
        found = tok.text if tok.kind != "EOF" else "end of input"
        raise ParseError(
            f"expected an expression, found {found!r}",
            tok.span,
            expected=["literal", "column", ":parameter", "function", "("],
        )

    # -- entry points ------------------------------------------------------------------

    def statement_then_end(self) -> ast.Statement:
        stmt = self.parse_statement()
        self.accept("PUNCT", ";")
        tok = self.peek()
        if tok.kind != "EOF":
            raise ParseError(
                f"unexpected input after statement: {tok.text!r}",
                tok.span,
                expected=[";", "end of input"],
            )
        return stmt

    def script(self) -> list[ast.Statement]:
        statements = []
        while True:
            while self.accept("PUNCT", ";"):
                pass
            if self.peek().kind == "EOF":
                return statements
            statements.append(self.parse_statement())
            if self.peek().kind == "EOF":
                return statements
            self.expect("PUNCT", ";")


def parse_statement(source: Union[str, Sequence[Token]]) -> ast.Statement:
    """Parse exactly one statement (an optional trailing ';' is allowed)."""
    tokens = tokenize(source) if isinstance(source, str) else source
    return _Parser(tokens).statement_then_end()


def parse_script(source: Union[str, Sequence[Token]]) -> list[ast.Statement]:
    """Parse a ';'-separated sequence of statements."""
    tokens = tokenize(source) if isinstance(source, str) else source
    return _Parser(tokens).script()


def iter_statements(source: Union[str, Sequence[Token]]):
    """Yield statements one at a time, so earlier ones can run before a later
    statement turns out to be malformed."""
    tokens = tokenize(source) if isinstance(source, str) else source
    p = _Parser(tokens)
    while True:
        while p.accept("PUNCT", ";"):
            pass
        if p.peek().kind == "EOF":
            return
        yield p.parse_statement()
        if p.peek().kind == "EOF":
            return
        p.expect("PUNCT", ";")
