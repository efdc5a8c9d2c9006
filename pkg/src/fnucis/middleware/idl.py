"""Interface-definition parser and document model.

The contract language is deliberately small:

    // comment to end of line
    record Pair { a: i32; b: i32; }
    enum Color { RED, GREEN }
    interface Echo {
        echo(p: Pair) -> Pair;
        fail(code: string) -> bool throws no-such-thing, broken;
    }

Builtin type names: bool, i32, i64, f64, string, bytes, plus the
parameterized forms optional<T> and list<T>. Any other name must resolve
to a record or enum declared in the same document. Error codes in a
throws clause may contain hyphens; declaration names may not.

A parsed document is validated before it is returned: unique names per
scope, resolvable type references, no recursive records, no directly
nested optionals (the dynamic value model could not represent them).
`pretty_print` emits a canonical rendering; parsing that rendering yields
a structurally identical document.
"""

from __future__ import annotations

from dataclasses import dataclass, field

BUILTIN_KINDS = ("bool", "i32", "i64", "f64", "string", "bytes")
_WRAPPER_KINDS = ("optional", "list")


class IdlSyntaxError(Exception):
    """Source text does not parse. Carries 1-based line and column."""

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col
        self.reason = message


class IdlValidationError(Exception):
    """Parsed document violates a structural rule (name clash, unresolved type, recursive record)."""

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


@dataclass(frozen=True)
class IdlType:
    """A type expression: a builtin kind, a wrapper, or a named reference.

    kind is one of BUILTIN_KINDS, "optional", "list", "record", or "enum".
    Wrappers carry `inner`; named references carry `name`. Freshly parsed
    named references start as kind="named" and are resolved to record/enum
    during validation.
    """

    kind: str
    inner: "IdlType | None" = None
    name: str | None = None

    def render(self) -> str:
        if self.kind in _WRAPPER_KINDS:
            assert self.inner is not None
            return f"{self.kind}<{self.inner.render()}>"
        if self.kind in ("record", "enum", "named"):
            return str(self.name)
        return self.kind


BOOL = IdlType("bool")
I32 = IdlType("i32")
I64 = IdlType("i64")
F64 = IdlType("f64")
STRING = IdlType("string")
BYTES = IdlType("bytes")


def optional_of(inner: IdlType) -> IdlType:
    return IdlType("optional", inner=inner)


def list_of(inner: IdlType) -> IdlType:
    return IdlType("list", inner=inner)


def record_ref(name: str) -> IdlType:
    return IdlType("record", name=name)


def enum_ref(name: str) -> IdlType:
    return IdlType("enum", name=name)


@dataclass(frozen=True)
class FieldDef:
    name: str
    type: IdlType


@dataclass(frozen=True)
class RecordDef:
    name: str
    fields: tuple[FieldDef, ...]


@dataclass(frozen=True)
class EnumDef:
    name: str
    cases: tuple[str, ...]


@dataclass(frozen=True)
class Param:
    name: str
    type: IdlType


@dataclass(frozen=True)
class MethodSignature:
    name: str
    params: tuple[Param, ...]
    returns: IdlType
    errors: tuple[str, ...] = ()


@dataclass(frozen=True)
class InterfaceDef:
    name: str
    methods: tuple[MethodSignature, ...]

    def method(self, name: str) -> MethodSignature | None:
        for m in self.methods:
            if m.name == name:
                return m
        return None


@dataclass
class IdlDocument:
    interfaces: list[InterfaceDef] = field(default_factory=list)
    records: list[RecordDef] = field(default_factory=list)
    enums: list[EnumDef] = field(default_factory=list)

    def __post_init__(self):
        self._records = {r.name: r for r in self.records}
        self._enums = {e.name: e for e in self.enums}
        self._interfaces = {i.name: i for i in self.interfaces}

    def record(self, name: str) -> RecordDef:
        return self._records[name]

    def enum(self, name: str) -> EnumDef:
        return self._enums[name]

    def interface(self, name: str) -> InterfaceDef:
        return self._interfaces[name]

    def has_record(self, name: str) -> bool:
        return name in self._records

    def has_enum(self, name: str) -> bool:
        return name in self._enums

    def has_interface(self, name: str) -> bool:
        return name in self._interfaces


# --- tokenizer ---------------------------------------------------------------

_PUNCT = {
    "{": "LBRACE",
    "}": "RBRACE",
    "(": "LPAREN",
    ")": "RPAREN",
    "<": "LT",
    ">": "GT",
    ":": "COLON",
    ";": "SEMI",
    ",": "COMMA",
}


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT | ARROW | one of _PUNCT values | EOF
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "/" and source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        if source.startswith("->", i):
            tokens.append(_Token("ARROW", "->", line, col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT:
            tokens.append(_Token(_PUNCT[ch], ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isalpha() or ch == "_":
            start = i
            start_col = col
            while i < n:
                c = source[i]
                if c.isalnum() or c == "_":
                    i += 1
                    col += 1
                elif c == "-" and i + 1 < n and (source[i + 1].isalnum() or source[i + 1] == "_"):
                    # hyphenated identifiers (error codes); never eats the "->" arrow
                    i += 2
                    col += 2
                else:
                    break
            tokens.append(_Token("IDENT", source[start:i], line, start_col))
            continue
        raise IdlSyntaxError(line, col, f"unexpected character {ch!r}")
    tokens.append(_Token("EOF", "", line, col))
    return tokens


# --- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise IdlSyntaxError(tok.line, tok.col, f"expected {what}, got {tok.text or 'end of input'!r}")
        return tok

    def name(self, what: str) -> str:
        tok = self.expect("IDENT", what)
        if "-" in tok.text:
            raise IdlSyntaxError(tok.line, tok.col, f"{what} may not contain '-': {tok.text!r}")
        return tok.text

    def parse_document(self) -> IdlDocument:
        interfaces: list[InterfaceDef] = []
        records: list[RecordDef] = []
        enums: list[EnumDef] = []
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                break
            if tok.kind != "IDENT":
                raise IdlSyntaxError(tok.line, tok.col, f"expected declaration, got {tok.text!r}")
            if tok.text == "record":
                records.append(self.parse_record())
            elif tok.text == "enum":
                enums.append(self.parse_enum())
            elif tok.text == "interface":
                interfaces.append(self.parse_interface())
            else:
                raise IdlSyntaxError(tok.line, tok.col, f"expected 'record', 'enum' or 'interface', got {tok.text!r}")
        return IdlDocument(interfaces=interfaces, records=records, enums=enums)

    def parse_type(self) -> IdlType:
        tok = self.expect("IDENT", "type name")
        text = tok.text
        if text in BUILTIN_KINDS:
            return IdlType(text)
        if text in _WRAPPER_KINDS:
            self.expect("LT", "'<'")
            inner = self.parse_type()
            self.expect("GT", "'>'")
            return IdlType(text, inner=inner)
        if "-" in text:
            raise IdlSyntaxError(tok.line, tok.col, f"type name may not contain '-': {text!r}")
        return IdlType("named", name=text)

    def parse_record(self) -> RecordDef:
        self.next()  # 'record'
        name = self.name("record name")
        self.expect("LBRACE", "'{'")
        fields: list[FieldDef] = []
        while self.peek().kind != "RBRACE":
            fname = self.name("field name")
            self.expect("COLON", "':'")
            ftype = self.parse_type()
            self.expect("SEMI", "';'")
            fields.append(FieldDef(fname, ftype))
        self.next()  # '}'
        return RecordDef(name, tuple(fields))

    def parse_enum(self) -> EnumDef:
        self.next()  # 'enum'
        name = self.name("enum name")
        self.expect("LBRACE", "'{'")
        cases: list[str] = []
        while self.peek().kind != "RBRACE":
            cases.append(self.name("enum case"))
            if self.peek().kind == "COMMA":
                self.next()
            elif self.peek().kind != "RBRACE":
                tok = self.peek()
                raise IdlSyntaxError(tok.line, tok.col, f"expected ',' or '}}', got {tok.text!r}")
        self.next()  # '}'
        return EnumDef(name, tuple(cases))

    def parse_interface(self) -> InterfaceDef:
        self.next()  # 'interface'
        name = self.name("interface name")
        self.expect("LBRACE", "'{'")
        methods: list[MethodSignature] = []
        while self.peek().kind != "RBRACE":
            methods.append(self.parse_method())
        self.next()  # '}'
        return InterfaceDef(name, tuple(methods))

    def parse_method(self) -> MethodSignature:
        mname = self.name("method name")
        self.expect("LPAREN", "'('")
        params: list[Param] = []
        if self.peek().kind != "RPAREN":
            while True:
                pname = self.name("parameter name")
                self.expect("COLON", "':'")
                ptype = self.parse_type()
                params.append(Param(pname, ptype))
                if self.peek().kind == "COMMA":
                    self.next()
                    continue
                break
        self.expect("RPAREN", "')'")
        self.expect("ARROW", "'->'")
        rtype = self.parse_type()
        errors: list[str] = []
        tok = self.peek()
        if tok.kind == "IDENT" and tok.text == "throws":
            self.next()
            while True:
                errors.append(self.expect("IDENT", "error code").text)
                if self.peek().kind == "COMMA":
                    self.next()
                    continue
                break
        self.expect("SEMI", "';'")
        return MethodSignature(mname, tuple(params), rtype, tuple(errors))


# --- validation --------------------------------------------------------------


def _resolve_type(t: IdlType, doc: IdlDocument, where: str) -> IdlType:
    if t.kind in BUILTIN_KINDS:
        return t
    if t.kind in _WRAPPER_KINDS:
        assert t.inner is not None
        inner = _resolve_type(t.inner, doc, where)
        if t.kind == "optional" and inner.kind == "optional":
            raise IdlValidationError("unresolved-type", f"{where}: optional may not wrap optional")
        return IdlType(t.kind, inner=inner)
    if t.kind in ("named", "record", "enum"):
        assert t.name is not None
        if doc.has_record(t.name):
            return record_ref(t.name)
        if doc.has_enum(t.name):
            return enum_ref(t.name)
        raise IdlValidationError("unresolved-type", f"{where}: unknown type {t.name!r}")
    raise IdlValidationError("unresolved-type", f"{where}: bad type kind {t.kind!r}")


def _check_unique(names: list[str], scope: str) -> None:
    seen = set()
    for n in names:
        if n in seen:
            raise IdlValidationError("name-clash", f"duplicate {scope}: {n!r}")
        seen.add(n)


def validate_document(doc: IdlDocument) -> IdlDocument:
    """Resolve all type references and enforce structural invariants.

    Returns a new document with every named reference resolved to
    record/enum kind. Raises IdlValidationError on violation.
    """
    # records and enums share the type namespace; interfaces are their own scope
    _check_unique([r.name for r in doc.records] + [e.name for e in doc.enums], "type name")
    _check_unique([i.name for i in doc.interfaces], "interface name")
    for e in doc.enums:
        if not e.cases:
            raise IdlValidationError("name-clash", f"enum {e.name!r} has no cases")
        _check_unique(list(e.cases), f"case in enum {e.name!r}")

    records = []
    for r in doc.records:
        _check_unique([f.name for f in r.fields], f"field in record {r.name!r}")
        fields = tuple(
            FieldDef(f.name, _resolve_type(f.type, doc, f"record {r.name!r} field {f.name!r}")) for f in r.fields
        )
        records.append(RecordDef(r.name, fields))

    interfaces = []
    for itf in doc.interfaces:
        _check_unique([m.name for m in itf.methods], f"method in interface {itf.name!r}")
        methods = []
        for m in itf.methods:
            where = f"interface {itf.name!r} method {m.name!r}"
            _check_unique([p.name for p in m.params], f"parameter of {where}")
            _check_unique(list(m.errors), f"error code of {where}")
            params = tuple(Param(p.name, _resolve_type(p.type, doc, where)) for p in m.params)
            returns = _resolve_type(m.returns, doc, where)
            methods.append(MethodSignature(m.name, params, returns, m.errors))
        interfaces.append(InterfaceDef(itf.name, tuple(methods)))

    resolved = IdlDocument(interfaces=interfaces, records=records, enums=doc.enums)
    _check_no_recursive_records(resolved)
    return resolved


def _record_deps(t: IdlType) -> list[str]:
    if t.kind == "record":
        return [str(t.name)]
    if t.kind in _WRAPPER_KINDS:
        assert t.inner is not None
        return _record_deps(t.inner)
    return []


def _check_no_recursive_records(doc: IdlDocument) -> None:
    graph = {r.name: [d for f in r.fields for d in _record_deps(f.type)] for r in doc.records}
    state: dict[str, int] = {}  # 1 = in progress, 2 = done

    def visit(name: str, path: list[str]) -> None:
        mark = state.get(name)
        if mark == 2:
            return
        if mark == 1:
            cycle = " -> ".join(path + [name])
            raise IdlValidationError("recursive-record", f"record nesting cycle: {cycle}")
        state[name] = 1
        for dep in graph[name]:
            visit(dep, path + [name])
        state[name] = 2

    for name in graph:
        visit(name, [])


# --- public entry points -----------------------------------------------------


def parse_idl(source: str) -> IdlDocument:
    """Parse and validate contract source text."""
    return validate_document(_Parser(_tokenize(source)).parse_document())


def pretty_print(doc: IdlDocument) -> str:
    """Render a document in canonical form (reparses to an identical structure)."""
    out: list[str] = []
    for e in doc.enums:
        out.append(f"enum {e.name} {{ {', '.join(e.cases)} }}")
    for r in doc.records:
        out.append(f"record {r.name} {{")
        for f in r.fields:
            out.append(f"    {f.name}: {f.type.render()};")
        out.append("}")
    for itf in doc.interfaces:
        out.append(f"interface {itf.name} {{")
        for m in itf.methods:
            params = ", ".join(f"{p.name}: {p.type.render()}" for p in m.params)
            throws = f" throws {', '.join(m.errors)}" if m.errors else ""
            out.append(f"    {m.name}({params}) -> {m.returns.render()}{throws};")
        out.append("}")
    return "\n".join(out) + ("\n" if out else "")
