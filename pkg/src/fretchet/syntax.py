"""Text syntax for index sets, spaces, vectors, linear terms and function
terms: a hand-written tokenizer, a recursive-descent parser and a printer
whose output parses back to a structurally equal term.

Spaces: ``R``, ``R^n``, ``0``, ``tup(S, ...)``, ``pow(X, S)``, ``ten(S, S)``.
Index sets: ``n``, ``X*Y``, ``X+Y``, parentheses.  Index elements: ``3``,
``(a, b)``, ``inl a``, ``inr b``.

Vectors: ``2.5``; tuples ``(u, v)`` (a one-tuple is ``(u,)``); copower maps
``[u, v]`` over ``⟨n⟩`` or ``[u, v; X]`` over ``X`` (empty: ``[; X : S]``);
``vzero(S)``; tensors ``tensor{ c * u (x) w, ... }`` with an optional
``tensor[S]{...}`` space.

Linear terms: ``id``, ``zero``, ``f . g``, ``f + g``, ``k *.``, ``proj i``,
``inj i``, ``par(f, ...)``, ``pow X f``, ``fanout(f, ...)``,
``red {(x, y), ...}``, ``contractL v``, ``contractR w``, the eleven unitary
names, and the derived ``dup``, ``sum n``, ``rep n``, ``scan n`` (expanded
while parsing).  Any polymorphic constructor takes optional annotations in
brackets right after its keyword, e.g. ``id[space=R^2]``,
``red[dom=3, cod=1, body=R] {...}``, ``inj[index=2] 1``.

Function terms: ``g . f``, ``par(f, ...)``, ``pow X f``, ``const v``,
``lin(h)``, primitives ``sin cos exp ln tanh`` and ``pow k``, bilinear
operators ``mul dot matvec tensor hadamard contract``, and the sugar
``f + g``, ``f - g``, ``f * g``.  Linear atoms such as ``proj 1`` may be
used directly.  ``.`` binds tighter than ``*``, which binds tighter than
``+`` and ``-``; all are left-associative.

``pow`` followed by a non-negative integer and then the start of another
term is the copower ``pow X f``; otherwise ``pow k`` is the primitive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .funterm import (
    BILINEAR_NAMES,
    FBilin,
    FComp,
    FConst,
    FLin,
    FPar,
    FPow,
    FPrim,
    FunTerm,
    PrimOp,
    fadd,
    fmul,
    fsub,
)
from .linterm import (
    UNITARIES,
    Comp,
    ContractL,
    ContractR,
    Fanout,
    Id,
    Inj,
    LinTerm,
    ParMap,
    PlusMap,
    PowMap,
    Proj,
    Red,
    ScaleMap,
    Unitary,
    ZeroMap,
    dup,
    rep,
    scan,
    sum_over,
)
from .spaces import (
    DisjSum,
    IndexSet,
    Inl,
    Inr,
    Pow,
    Prod,
    R,
    Relation,
    Scalar,
    Seg,
    SpaceTerm,
    TensorSpace,
    TupleSpace,
    VMap,
    VScalar,
    VTensor,
    VTuple,
    VZero,
    Vector,
    ZeroSpace,
    shape,
)

# ---------------------------------------------------------------------------
# Tokens
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, sym, eof
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>\*\.|[()\[\]{},;.+\-*=:^])
    """,
    re.VERBOSE,
)


def tokenize(src: str) -> list:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(line, pos - line_start + 1, "a token", src[pos])
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            out.append(Token(kind, text, line, pos - line_start + 1))
        for i, ch in enumerate(text):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


_PRIMS = ("sin", "cos", "exp", "ln", "tanh")
_DERIVED = ("dup", "sum", "rep", "scan")
_LIN_KEYWORDS = ("id", "zero", "proj", "inj", "red", "contractL", "contractR", "fanout") + UNITARIES + _DERIVED

# annotation keys per keyword: key -> "space" | "index"
_ANNOTATIONS = {
    "id": {"space": "space"},
    "zero": {"dom": "space", "cod": "space"},
    "*.": {"space": "space"},
    "proj": {"space": "space"},
    "inj": {"index": "index", "space": "space"},
    "par": {"index": "index"},
    "fanout": {"index": "index", "dom": "space"},
    "red": {"dom": "index", "cod": "index", "body": "space"},
    "contractL": {"u": "space"},
    "contractR": {"left": "space"},
    "dup": {"body": "space"},
    "sum": {"body": "space"},
    "rep": {"body": "space"},
    "scan": {"body": "space"},
    **{u: {"at": "space"} for u in UNITARIES},
}


class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("sym", "name") and t.text == text

    def fail(self, expected: str):
        t = self.tok
        raise ParseError(t.line, t.col, expected, t.text if t.kind != "eof" else "end of input")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(repr(text))
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def end(self):
        if self.tok.kind != "eof":
            self.fail("end of input")

    def integer(self, what="an integer") -> int:
        neg = self.accept("-")
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            self.fail(what)
        self.i += 1
        return -int(t.text) if neg else int(t.text)

    def number(self) -> float:
        neg = self.accept("-")
        t = self.tok
        if t.kind != "num":
            self.fail("a number")
        self.i += 1
        x = float(t.text)
        return -x if neg else x

    # -- index sets and elements -------------------------------------------

    def index(self) -> IndexSet:
        x = self.index_prod()
        while self.accept("+"):
            x = DisjSum(x, self.index_prod())
        return x

    def index_prod(self) -> IndexSet:
        x = self.index_atom()
        while self.accept("*"):
            x = Prod(x, self.index_atom())
        return x

    def index_atom(self) -> IndexSet:
        if self.accept("("):
            x = self.index()
            self.expect(")")
            return x
        return Seg(self.integer("an index set"))

    def element(self):
        if self.accept("inl"):
            return Inl(self.element())
        if self.accept("inr"):
            return Inr(self.element())
        if self.accept("("):
            a = self.element()
            self.expect(",")
            b = self.element()
            self.expect(")")
            return (a, b)
        return self.integer("an index element")

    # -- spaces -------------------------------------------------------------

    def space(self) -> SpaceTerm:
        t = self.tok
        if self.accept("R"):
            if self.accept("^"):
                return Pow(self.index_atom(), R)
            return R
        if t.kind == "num" and t.text == "0":
            self.i += 1
            return ZeroSpace()
        if self.accept("tup"):
            self.expect("(")
            comps = []
            if not self.at(")"):
                comps.append(self.space())
                while self.accept(","):
                    comps.append(self.space())
            self.expect(")")
            return TupleSpace(tuple(comps))
        if self.accept("pow"):
            self.expect("(")
            X = self.index()
            self.expect(",")
            body = self.space()
            self.expect(")")
            return Pow(X, body)
        if self.accept("ten"):
            self.expect("(")
            a = self.space()
            self.expect(",")
            b = self.space()
            self.expect(")")
            return TensorSpace(a, b)
        self.fail("a space")

    # -- vectors ------------------------------------------------------------

    def starts_vector(self) -> bool:
        t = self.tok
        return t.kind == "num" or (t.kind in ("sym", "name") and t.text in ("-", "(", "[", "vzero", "tensor"))

    def vector(self) -> Vector:
        t = self.tok
        if t.kind == "num" or self.at("-"):
            return VScalar(self.number())
        if self.accept("vzero"):
            self.expect("(")
            s = self.space()
            self.expect(")")
            return VZero(s)
        if self.accept("("):
            if self.accept(")"):
                return VTuple(())
            first = self.vector()
            if self.accept(")"):
                return first
            items = [first]
            while self.accept(","):
                if self.at(")"):
                    break
                items.append(self.vector())
            self.expect(")")
            return VTuple(tuple(items))
        if self.accept("["):
            items = []
            if not self.at(";"):
                items.append(self.vector())
                while self.accept(","):
                    items.append(self.vector())
            X = Seg(len(items))
            body = None
            if self.accept(";"):
                pos = self.tok
                X = self.index()
                if self.accept(":"):
                    body = self.space()
                if X.card() != len(items):
                    raise ParseError(pos.line, pos.col, f"an index set with {len(items)} elements")
            self.expect("]")
            if not items and body is None:
                self.fail("a body space for an empty map (`[; X : S]`)")
            return VMap(X, tuple(items), body if body is not None else (shape(items[0]) if items else None))
        if self.accept("tensor"):
            space = None
            if self.accept("["):
                space = self.space()
                self.expect("]")
            start = self.expect("{")
            terms = []
            if not self.at("}"):
                terms.append(self.tensor_term())
                while self.accept(","):
                    terms.append(self.tensor_term())
            self.expect("}")
            if space is None:
                if not terms:
                    raise ParseError(start.line, start.col, "a space for an empty tensor (`tensor[S]{}`)")
                space = TensorSpace(shape(terms[0][1]), shape(terms[0][2]))
            return VTensor(space, tuple(terms))
        self.fail("a vector")

    def tensor_term(self):
        coeff = 1.0
        # `c * u (x) w`: a leading scalar followed by `*` is the coefficient
        save = self.i
        if self.tok.kind == "num" or self.at("-"):
            c = self.number()
            if self.accept("*"):
                coeff = c
            else:
                self.i = save
        u = self.vector()
        self.expect("(")
        self.expect("x")
        self.expect(")")
        w = self.vector()
        return (coeff, u, w)

    # -- annotations --------------------------------------------------------

    def annotations(self, keyword: str) -> dict:
        out: dict = {}
        if not self.at("["):
            return out
        allowed = _ANNOTATIONS.get(keyword, {})
        self.expect("[")
        while True:
            t = self.tok
            if t.kind != "name" or t.text not in allowed:
                self.fail(f"an annotation key for {keyword} ({', '.join(allowed) or 'none'})")
            self.i += 1
            self.expect("=")
            out[t.text] = self.space() if allowed[t.text] == "space" else self.index()
            if not self.accept(","):
                break
        self.expect("]")
        return out

    # -- linear terms -------------------------------------------------------

    def lin(self) -> LinTerm:
        f = self.lin_comp()
        while self.accept("+"):
            f = PlusMap(f, self.lin_comp())
        return f

    def lin_comp(self) -> LinTerm:
        f = self.lin_atom()
        while self.accept("."):
            f = Comp(f, self.lin_atom())
        return f

    def starts_lin_atom(self) -> bool:
        t = self.tok
        if t.kind == "num" or (t.kind == "sym" and t.text in ("(", "-")):
            return True
        return t.kind == "name" and (t.text in _LIN_KEYWORDS or t.text in ("par", "pow"))

    def lin_atom(self) -> LinTerm:
        t = self.tok
        if t.kind == "num" or self.at("-"):
            k = self.number()
            self.expect("*.")
            ann = self.annotations("*.")
            return ScaleMap(k, ann.get("space"))
        if self.accept("("):
            f = self.lin()
            self.expect(")")
            return f
        if t.kind != "name":
            self.fail("a linear term")
        kw = t.text
        if kw == "par":
            self.i += 1
            ann = self.annotations("par")
            return ParMap(tuple(self.lin_list()), ann.get("index"))
        if kw == "pow":
            self.i += 1
            X = self.index_atom()
            return PowMap(X, self.lin_atom())
        if kw in _LIN_KEYWORDS:
            self.i += 1
            return self.lin_keyword(kw)
        self.fail("a linear term")

    def lin_list(self) -> list:
        self.expect("(")
        items = []
        if not self.at(")"):
            items.append(self.lin())
            while self.accept(","):
                items.append(self.lin())
        self.expect(")")
        return items

    def lin_keyword(self, kw: str) -> LinTerm:
        ann = self.annotations(kw)
        if kw == "id":
            return Id(ann.get("space"))
        if kw == "zero":
            return ZeroMap(ann.get("dom"), ann.get("cod"))
        if kw == "proj":
            return Proj(self.element(), ann.get("space"))
        if kw == "inj":
            return Inj(self.element(), ann.get("index"), ann.get("space"))
        if kw == "fanout":
            return Fanout(tuple(self.lin_list()), ann.get("index"), ann.get("dom"))
        if kw == "red":
            return self.red_body(ann)
        if kw == "contractL":
            return ContractL(self.vector(), ann.get("u"))
        if kw == "contractR":
            return ContractR(self.vector(), ann.get("left"))
        if kw in UNITARIES:
            return Unitary(kw, ann.get("at"))
        body = ann.get("body")
        if kw == "dup":
            return dup(body)
        n = self.integer("a size")
        if n < 0:
            self.fail("a non-negative size")
        return {"sum": sum_over, "rep": rep, "scan": scan}[kw](Seg(n) if kw != "scan" else n, body)

    def red_body(self, ann) -> Red:
        start = self.expect("{")
        pairs = []
        if not self.at("}"):
            pairs.append(self.pair())
            while self.accept(","):
                pairs.append(self.pair())
        self.expect("}")
        dom, cod = ann.get("dom"), ann.get("cod")
        if dom is None or cod is None:
            ints = all(isinstance(x, int) and isinstance(y, int) for x, y in pairs)
            if not pairs or not ints:
                raise ParseError(start.line, start.col, "red[dom=..., cod=...] for this relation")
            dom = dom if dom is not None else Seg(max(x for x, _ in pairs))
            cod = cod if cod is not None else Seg(max(y for _, y in pairs))
        try:
            rel = Relation(dom, cod, tuple(pairs))
        except Exception as e:
            raise ParseError(start.line, start.col, f"pairs inside {dom!r} x {cod!r} ({e})") from None
        return Red(rel, ann.get("body"))

    def pair(self):
        self.expect("(")
        a = self.element()
        self.expect(",")
        b = self.element()
        self.expect(")")
        return (a, b)

    # -- function terms -----------------------------------------------------

    def fun(self) -> FunTerm:
        f = self.fun_prod()
        while True:
            if self.accept("+"):
                f = fadd(f, self.fun_prod())
            elif self.accept("-"):
                f = fsub(f, self.fun_prod())
            else:
                return f

    def fun_prod(self) -> FunTerm:
        f = self.fun_comp()
        while self.accept("*"):
            f = fmul(f, self.fun_comp())
        return f

    def fun_comp(self) -> FunTerm:
        f = self.fun_atom()
        while self.accept("."):
            f = FComp(f, self.fun_atom())
        return f

    def starts_fun_atom(self) -> bool:
        t = self.tok
        if t.kind == "num" or (t.kind == "sym" and t.text in ("(", "-")):
            return True
        if t.kind != "name":
            return False
        return t.text in _PRIMS or t.text in BILINEAR_NAMES or t.text in _LIN_KEYWORDS or t.text in (
            "const",
            "lin",
            "par",
            "pow",
        )

    def fun_atom(self) -> FunTerm:
        t = self.tok
        if self.accept("("):
            f = self.fun()
            self.expect(")")
            return f
        if t.kind == "num" or self.at("-"):
            return FLin(self.lin_atom())
        if t.kind != "name":
            self.fail("a function term")
        kw = t.text
        if kw == "const":
            self.i += 1
            return FConst(self.vector())
        if kw == "lin":
            self.i += 1
            self.expect("(")
            h = self.lin()
            self.expect(")")
            return FLin(h)
        if kw in _PRIMS:
            self.i += 1
            return FPrim(PrimOp(kw))
        if kw in BILINEAR_NAMES:
            self.i += 1
            return FBilin(_bilin(kw))
        if kw == "par":
            self.i += 1
            ann = self.annotations("par")
            self.expect("(")
            parts = []
            if not self.at(")"):
                parts.append(self.fun())
                while self.accept(","):
                    parts.append(self.fun())
            self.expect(")")
            return FPar(tuple(parts), ann.get("index"))
        if kw == "pow":
            self.i += 1
            return self.fun_pow()
        if kw in _LIN_KEYWORDS:
            return FLin(self.lin_atom())
        self.fail("a function term")

    def fun_pow(self) -> FunTerm:
        if self.at("("):
            X = self.index_atom()
            return FPow(X, self.fun_atom())
        t = self.tok
        k = self.integer("an exponent or index set")
        if k >= 0 and self.starts_fun_atom() and not self.at("-"):
            return FPow(Seg(k), self.fun_atom())
        if k == 0:
            raise ParseError(t.line, t.col, "a nonzero exponent")
        return FPrim(PrimOp("pow", k))


def _bilin(name):
    from .funterm import BilinOp

    return BilinOp(name)


def _run(src: str, method: str):
    p = _Parser(src)
    out = getattr(p, method)()
    p.end()
    return out


def parse_index(src: str) -> IndexSet:
    return _run(src, "index")


def parse_element(src: str):
    return _run(src, "element")


def parse_space(src: str) -> SpaceTerm:
    return _run(src, "space")


def parse_vec(src: str) -> Vector:
    return _run(src, "vector")


def parse_lin(src: str) -> LinTerm:
    return _run(src, "lin")


def parse_fun(src: str) -> FunTerm:
    return _run(src, "fun")


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------


def show_index(X: IndexSet) -> str:
    return _show_index(X, 0)


def _show_index(X, prec):
    if isinstance(X, Seg):
        return str(X.n)
    if isinstance(X, Prod):
        s = f"{_show_index(X.left, 1)}*{_show_index(X.right, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(X, DisjSum):
        s = f"{_show_index(X.left, 0)}+{_show_index(X.right, 1)}"
        return f"({s})" if prec > 0 else s
    raise TypeError(f"not an index set: {X!r}")


def _index_atom(X):
    return _show_index(X, 2)


def show_element(x) -> str:
    if isinstance(x, Inl):
        return f"inl {show_element(x.value)}"
    if isinstance(x, Inr):
        return f"inr {show_element(x.value)}"
    if isinstance(x, tuple):
        return f"({show_element(x[0])}, {show_element(x[1])})"
    return str(x)


def show_space(S: SpaceTerm) -> str:
    if isinstance(S, Scalar):
        return "R"
    if isinstance(S, ZeroSpace):
        return "0"
    if isinstance(S, TupleSpace):
        return "tup(" + ", ".join(show_space(c) for c in S.components) + ")"
    if isinstance(S, Pow):
        if isinstance(S.body, Scalar) and isinstance(S.index, Seg):
            return f"R^{S.index.n}"
        return f"pow({show_index(S.index)}, {show_space(S.body)})"
    if isinstance(S, TensorSpace):
        return f"ten({show_space(S.left)}, {show_space(S.right)})"
    raise TypeError(f"not a space: {S!r}")


def _num(x: float) -> str:
    return repr(float(x))


def show_vec(v: Vector) -> str:
    if isinstance(v, VScalar):
        return _num(v.value)
    if isinstance(v, VZero):
        return f"vzero({show_space(v.space)})"
    if isinstance(v, VTuple):
        if len(v.items) == 1:
            return f"({show_vec(v.items[0])},)"
        return "(" + ", ".join(show_vec(x) for x in v.items) + ")"
    if isinstance(v, VMap):
        body = ", ".join(show_vec(x) for x in v.items)
        if not v.items:
            return f"[; {show_index(v.index)} : {show_space(v.body)}]"
        if v.index == Seg(len(v.items)):
            return f"[{body}]"
        return f"[{body}; {show_index(v.index)}]"
    if isinstance(v, VTensor):
        terms = ", ".join(f"{_num(c)} * {show_vec(a)} (x) {show_vec(b)}" for c, a, b in v.terms)
        implied = TensorSpace(shape(v.terms[0][1]), shape(v.terms[0][2])) if v.terms else None
        head = "tensor" if implied == v.space else f"tensor[{show_space(v.space)}]"
        return head + "{" + terms + "}"
    raise TypeError(f"not a vector: {v!r}")


def _ann(**kw) -> str:
    parts = []
    for key, val in kw.items():
        if val is None:
            continue
        text = show_index(val) if isinstance(val, IndexSet) else show_space(val)
        parts.append(f"{key}={text}")
    return "[" + ", ".join(parts) + "]" if parts else ""


# precedence levels for linear terms: 0 sum, 1 composition, 2 atom
def show_lin(f: LinTerm) -> str:
    return _show_lin(f, 0)


def _show_lin(f, prec):
    if isinstance(f, PlusMap):
        s = f"{_show_lin(f.f, 0)} + {_show_lin(f.g, 1)}"
        return f"({s})" if prec > 0 else s
    if isinstance(f, Comp):
        s = f"{_show_lin(f.g, 1)} . {_show_lin(f.f, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(f, Id):
        return "id" + _ann(space=f.space)
    if isinstance(f, ZeroMap):
        return "zero" + _ann(dom=f.dom, cod=f.cod)
    if isinstance(f, ScaleMap):
        return f"{_num(f.k)} *." + _ann(space=f.space)
    if isinstance(f, Proj):
        return "proj" + _ann(space=f.space) + " " + show_element(f.y)
    if isinstance(f, Inj):
        return "inj" + _ann(index=f.index, space=f.space) + " " + show_element(f.y)
    if isinstance(f, ParMap):
        return "par" + _ann(index=f.index) + "(" + ", ".join(_show_lin(p, 0) for p in f.parts) + ")"
    if isinstance(f, PowMap):
        return f"pow {_index_atom(f.index)} {_show_lin(f.f, 2)}"
    if isinstance(f, Fanout):
        return "fanout" + _ann(index=f.index, dom=f.dom) + "(" + ", ".join(_show_lin(p, 0) for p in f.parts) + ")"
    if isinstance(f, Red):
        rel = f.rel
        pairs = ", ".join(f"({show_element(x)}, {show_element(y)})" for x, y in rel.pairs)
        implied = _implied_red_sets(rel)
        dom = None if implied and implied[0] == rel.domain else rel.domain
        cod = None if implied and implied[1] == rel.codomain else rel.codomain
        return "red" + _ann(dom=dom, cod=cod, body=f.body) + " {" + pairs + "}"
    if isinstance(f, ContractL):
        return "contractL" + _ann(u=f.u) + " " + _vec_atom(f.v)
    if isinstance(f, ContractR):
        return "contractR" + _ann(left=f.left) + " " + _vec_atom(f.w)
    if isinstance(f, Unitary):
        return f.kind + _ann(at=f.at)
    raise TypeError(f"not a linear term: {f!r}")


def _vec_atom(v):
    s = show_vec(v)
    return f"({s})" if isinstance(v, VScalar) and v.value < 0 else s


def _implied_red_sets(rel):
    if not rel.pairs or not all(isinstance(x, int) and isinstance(y, int) for x, y in rel.pairs):
        return None
    return Seg(max(x for x, _ in rel.pairs)), Seg(max(y for _, y in rel.pairs))


# precedence levels for function terms: 0 sum, 1 product, 2 composition, 3 atom
def show_fun(t: FunTerm) -> str:
    return _show_fun(t, 0)


def _sugar(t):
    """Recognize ``f + g``, ``f - g`` and ``f * g`` as built by the parser."""
    if not (isinstance(t, FComp) and isinstance(t.f, FComp)):
        return None
    inner = t.f
    if not (isinstance(inner.g, FPar) and inner.g.index is None and len(inner.g.parts) == 2):
        return None
    f, g = inner.g.parts
    for op, build in (("+", fadd), ("-", fsub), ("*", fmul)):
        if build(f, g) == t:
            return op, f, g
    return None


def _show_fun(t, prec):
    sugar = _sugar(t)
    if sugar is not None:
        op, f, g = sugar
        if op == "*":
            s = f"{_show_fun(f, 1)} * {_show_fun(g, 2)}"
            return f"({s})" if prec > 1 else s
        s = f"{_show_fun(f, 0)} {op} {_show_fun(g, 1)}"
        return f"({s})" if prec > 0 else s
    if isinstance(t, FComp):
        s = f"{_show_fun(t.g, 2)} . {_show_fun(t.f, 3)}"
        return f"({s})" if prec > 2 else s
    if isinstance(t, FConst):
        s = f"const {_vec_atom(t.w)}"
        return f"({s})" if prec > 2 else s
    if isinstance(t, FPrim):
        if t.p.name == "pow":
            return f"(pow {t.p.k})" if prec > 2 else f"pow {t.p.k}"
        return t.p.name
    if isinstance(t, FBilin):
        return t.b.name
    if isinstance(t, FPar):
        return "par" + _ann(index=t.index) + "(" + ", ".join(_show_fun(p, 0) for p in t.parts) + ")"
    if isinstance(t, FPow):
        return f"pow {_index_atom(t.index)} {_show_fun(t.f, 3)}"
    if isinstance(t, FLin):
        h = t.h
        if isinstance(h, (PlusMap, Comp, ParMap, PowMap)) or (isinstance(h, ScaleMap) and h.k < 0):
            return f"lin({show_lin(h)})"
        return _show_lin(h, 2)
    raise TypeError(f"not a function term: {t!r}")


__all__ = [
    "Token",
    "tokenize",
    "parse_index",
    "parse_element",
    "parse_space",
    "parse_vec",
    "parse_lin",
    "parse_fun",
    "show_index",
    "show_element",
    "show_space",
    "show_vec",
    "show_lin",
    "show_fun",
]
