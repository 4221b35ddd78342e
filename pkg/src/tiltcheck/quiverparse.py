"""Bound quiver algebras: parsing, path bases and multiplication.

Paths compose right to left like functions.  The text ``c*b*a`` is the path
"first ``a``, then ``b``, then ``c``"; internally a :class:`Path` stores its
arrows in traversal order, so ``c*b*a`` becomes ``arrows == (a, b, c)``.
The product ``x * y`` of algebra elements means "first ``y``, then ``x``".

Algebra file grammar (line oriented, ``#`` starts a comment)::

    field Q                 |  field Fp <prime>
    vertices <id> <id> ...
    arrow <name>: <src> -> <tgt>
    relation <term> (+ <term>)*      term = [<rational>] <name>*<name>(*<name>)*

The trivial path at vertex ``v`` is written ``e_v``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactlinalg import QQ, Field, Matrix

DEFAULT_PATH_CAP = 64


class ParseError(ValueError):
    """Malformed input text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class InfiniteDimensionalError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Path:
    """A path in the quiver; ``arrows`` are arrow indices in traversal order."""

    source: int
    target: int
    arrows: tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return len(self.arrows)


class Quiver:
    def __init__(self, vertices: Sequence[str], arrows: Sequence[Arrow]):
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex ids must be unique")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be unique")
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.arrow_index = {a.name: i for i, a in enumerate(self.arrows)}
        for a in self.arrows:
            for end in (a.source, a.target):
                if end not in self.vertex_index:
                    raise ValueError(f"arrow {a.name} references undeclared vertex {end}")
        self.src = tuple(self.vertex_index[a.source] for a in self.arrows)
        self.tgt = tuple(self.vertex_index[a.target] for a in self.arrows)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def arrows_from(self, v: int) -> list[int]:
        return [k for k, s in enumerate(self.src) if s == v]

    def is_acyclic(self) -> bool:
        indeg = [0] * self.n_vertices
        for t in self.tgt:
            indeg[t] += 1
        stack = [v for v in range(self.n_vertices) if indeg[v] == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for k in self.arrows_from(v):
                indeg[self.tgt[k]] -= 1
                if indeg[self.tgt[k]] == 0:
                    stack.append(self.tgt[k])
        return seen == self.n_vertices

    def __eq__(self, other):
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash((self.vertices, self.arrows))


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths of length at least two."""

    terms: tuple[tuple[object, Path], ...]

    @property
    def source(self) -> int:
        return self.terms[0][1].source

    @property
    def target(self) -> int:
        return self.terms[0][1].target

    @property
    def is_homogeneous(self) -> bool:
        return len({p.length for _, p in self.terms}) == 1

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1


class BoundQuiverAlgebra:
    """The quotient ``kQ / I`` with a finite path basis.

    ``basis`` is sorted by (source, length, arrow names in traversal order).
    Basis elements that are not trivial paths are chosen as the smallest
    paths in that order modulo the ideal, so for monomial relations the basis
    is exactly the set of paths avoiding every relation.
    """

    def __init__(
        self,
        quiver: Quiver,
        relations: Sequence[Relation] = (),
        field: Field = QQ,
        path_cap: int = DEFAULT_PATH_CAP,
    ):
        self.quiver = quiver
        self.relations = tuple(relations)
        self.field = field
        self.path_cap = path_cap
        for r in self.relations:
            _validate_relation(quiver, r)
        self._nf: dict[tuple[int, tuple[int, ...]], dict[int, object]] = {}
        self._build_basis()
        self._mult_cache: dict[tuple[int, int], tuple[tuple[int, object], ...]] = {}
        self._hash = hash((quiver, tuple(self.basis), field))

    # -- construction --------------------------------------------------------

    def _key(self, p: Path):
        names = self.quiver.arrows
        return (p.source, p.length, tuple(names[k].name for k in p.arrows))

    def _paths_of_length(self, prev: list[Path]) -> list[Path]:
        q = self.quiver
        out = []
        for p in prev:
            for k in q.arrows_from(p.target):
                out.append(Path(p.source, q.tgt[k], p.arrows + (k,)))
        return out

    def _build_basis(self) -> None:
        q = self.quiver
        trivial = [Path(v, v) for v in range(q.n_vertices)]
        if all(r.is_homogeneous for r in self.relations):
            self._build_graded(trivial)
        elif q.is_acyclic():
            self._build_acyclic(trivial)
        else:
            raise InfiniteDimensionalError(
                "non-homogeneous relations are only supported on acyclic quivers"
            )
        basis_paths = sorted(self._basis_set, key=self._key)
        self.basis: tuple[Path, ...] = tuple(basis_paths)
        self.index = {(p.source, p.arrows): i for i, p in enumerate(self.basis)}
        # rewrite the normal forms against final basis indices
        self._nf = {
            key: {self.index[(bp.source, bp.arrows)]: c for bp, c in nf.items()}
            for key, nf in self._nf_paths.items()
        }
        del self._nf_paths

    def _reduce_level(self, paths: list[Path], ideal_vectors: list[dict]) -> tuple[list[Path], list[dict]]:
        """Split ``paths`` into basis paths and normal forms; return ideal rows."""
        order = sorted(paths, key=self._key, reverse=True)
        col = {(p.source, p.arrows): i for i, p in enumerate(order)}
        rows = []
        z = self.field.zero
        for vec in ideal_vectors:
            row = [z] * len(order)
            for p, c in vec.items():
                row[col[(p.source, p.arrows)]] += c
            rows.append(row)
        pivots: list[int] = []
        red_rows: list[tuple] = []
        if rows:
            red, pivots, rank = Matrix(self.field, rows, len(order)).rref()
            red_rows = [red.row(i) for i in range(rank)]
        piv_set = set(pivots)
        basis_here = [order[i] for i in range(len(order)) if i not in piv_set]
        for p in basis_here:
            self._nf_paths[(p.source, p.arrows)] = {p: self.field.one}
        for i, pc in enumerate(pivots):
            p = order[pc]
            nf = {}
            for j, c in enumerate(red_rows[i]):
                if c and j != pc:
                    nf[order[j]] = -c
            self._nf_paths[(p.source, p.arrows)] = nf
        self._basis_set.extend(basis_here)
        ideal_rows = [
            {order[j]: c for j, c in enumerate(r) if c} for r in red_rows
        ]
        return basis_here, ideal_rows

    def _build_graded(self, trivial: list[Path]) -> None:
        q = self.quiver
        self._nf_paths = {}
        self._basis_set: list[Path] = []
        rel_by_len: dict[int, list[dict]] = {}
        for r in self.relations:
            vec: dict[Path, object] = {}
            for c, p in r.terms:
                vec[p] = vec.get(p, self.field.zero) + c
            rel_by_len.setdefault(r.terms[0][1].length, []).append(vec)
        level = trivial
        ideal_prev: list[dict] = []
        L = 0
        while True:
            if not level:
                self.vanish_length = L
                return
            if L > self.path_cap:
                raise InfiniteDimensionalError(
                    f"paths of length {L} survive the relations (cap {self.path_cap}); "
                    "the algebra looks infinite dimensional"
                )
            gens = list(rel_by_len.get(L, []))
            for vec in ideal_prev:
                # extend every ideal element by one arrow on either side
                some = next(iter(vec))
                for k in q.arrows_from(some.target):
                    gens.append({Path(p.source, q.tgt[k], p.arrows + (k,)): c for p, c in vec.items()})
                for k in range(len(q.arrows)):
                    if q.tgt[k] == some.source:
                        gens.append({Path(q.src[k], p.target, (k,) + p.arrows): c for p, c in vec.items()})
            basis_here, ideal_rows = self._reduce_level(level, gens)
            if not basis_here:
                self.vanish_length = L if L > 0 else 1
                return
            ideal_prev = ideal_rows
            level = self._paths_of_length(level)
            L += 1

    def _build_acyclic(self, trivial: list[Path]) -> None:
        q = self.quiver
        self._nf_paths = {}
        self._basis_set = []
        all_paths: list[Path] = []
        level = trivial
        while level:
            all_paths.extend(level)
            level = self._paths_of_length(level)
        gens = []
        for r in self.relations:
            for u in all_paths:
                if u.source != r.target:
                    continue
                for v in all_paths:
                    if v.target != r.source:
                        continue
                    vec = {}
                    for c, p in r.terms:
                        path = Path(v.source, u.target, v.arrows + p.arrows + u.arrows)
                        vec[path] = vec.get(path, self.field.zero) + c
                    gens.append(vec)
        self._reduce_level(all_paths, gens)
        self.vanish_length = max(p.length for p in all_paths) + 1

    # -- basic data ----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def n_vertices(self) -> int:
        return self.quiver.n_vertices

    def vertex(self, v) -> int:
        """Index of a vertex: strings are vertex ids, plain ints are indices."""
        if isinstance(v, int) and not isinstance(v, bool):
            if not 0 <= v < self.n_vertices:
                raise KeyError(f"vertex index {v} out of range")
            return v
        try:
            return self.quiver.vertex_index[str(v)]
        except KeyError:
            raise KeyError(f"undeclared vertex {v!r}") from None

    def basis_between(self, source: int, target: int) -> list[int]:
        return [i for i, p in enumerate(self.basis) if p.source == source and p.target == target]

    def basis_from(self, source: int) -> list[int]:
        return [i for i, p in enumerate(self.basis) if p.source == source]

    def trivial_index(self, v: int) -> int:
        return self.index[(v, ())]

    def path_name(self, i: int) -> str:
        p = self.basis[i]
        if not p.arrows:
            return f"e_{self.quiver.vertices[p.source]}"
        return "*".join(self.quiver.arrows[k].name for k in reversed(p.arrows))

    def normal_form(self, p: Path) -> dict[int, object]:
        """Coordinates of an arbitrary path in the basis (sparse)."""
        if p.length >= self.vanish_length:
            return {}
        return self._nf.get((p.source, p.arrows), {})

    def mult_basis(self, i: int, j: int) -> tuple[tuple[int, object], ...]:
        """Product ``basis[i] * basis[j]`` as sparse coordinates."""
        key = (i, j)
        hit = self._mult_cache.get(key)
        if hit is not None:
            return hit
        x, y = self.basis[i], self.basis[j]
        if y.target != x.source:
            out: tuple = ()
        else:
            nf = self.normal_form(Path(y.source, x.target, y.arrows + x.arrows))
            out = tuple(sorted(nf.items()))
        self._mult_cache[key] = out
        return out

    def mult_table(self) -> dict[tuple[int, int], dict[int, object]]:
        return {
            (i, j): dict(self.mult_basis(i, j)) for i in range(self.dim) for j in range(self.dim)
        }

    # -- elements ------------------------------------------------------------

    def element(self, coords: dict | Sequence | None = None) -> "AlgebraElement":
        z = self.field.zero
        if coords is None:
            return AlgebraElement(self, (z,) * self.dim)
        if isinstance(coords, dict):
            v = [z] * self.dim
            for i, c in coords.items():
                v[i] = v[i] + self.field(c)
            return AlgebraElement(self, tuple(v))
        return AlgebraElement(self, tuple(self.field(c) for c in coords))

    def basis_element(self, i: int) -> "AlgebraElement":
        return self.element({i: 1})

    def idempotent(self, v) -> "AlgebraElement":
        return self.basis_element(self.trivial_index(self.vertex(v)))

    def one(self) -> "AlgebraElement":
        return self.element({self.trivial_index(v): 1 for v in range(self.n_vertices)})

    def path(self, text: str) -> "AlgebraElement":
        return parse_element(self, text)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, BoundQuiverAlgebra)
            and self.field == other.field
            and self.quiver == other.quiver
            and self.basis == other.basis
            and self._nf == other._nf
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"BoundQuiverAlgebra(dim={self.dim}, vertices={self.n_vertices}, field={self.field!r})"


class AlgebraElement:
    """An element of a bound quiver algebra as coordinates over its basis."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: BoundQuiverAlgebra, coords: tuple):
        self.algebra = algebra
        self.coords = coords

    def terms(self) -> list[tuple[int, object]]:
        return [(i, c) for i, c in enumerate(self.coords) if c]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, tuple(-a for a in self.coords))

    def __mul__(self, other):
        alg = self.algebra
        if not isinstance(other, AlgebraElement):
            c = alg.field(other)
            return AlgebraElement(alg, tuple(c * a for a in self.coords))
        out = [alg.field.zero] * alg.dim
        oterms = other.terms()
        for i, a in self.terms():
            for j, b in oterms:
                ab = a * b
                for k, c in alg.mult_basis(i, j):
                    out[k] = out[k] + ab * c
        return AlgebraElement(alg, tuple(out))

    def __rmul__(self, c):
        return AlgebraElement(self.algebra, tuple(self.algebra.field(c) * a for a in self.coords))

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"AlgebraElement({format_element(self)!r})"


def path_mult(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """``x * y``: first ``y``, then ``x``."""
    if x.algebra is not y.algebra and x.algebra != y.algebra:
        raise ValueError("operands live in different algebras")
    return x * y


def format_element(x: AlgebraElement) -> str:
    terms = x.terms()
    if not terms:
        return "0"
    parts = []
    for i, c in terms:
        name = x.algebra.path_name(i)
        parts.append(name if c == 1 else f"{c} {name}")
    return " + ".join(parts)


# -- text parsing ---------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>-?\d+(?:/\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9_']*)|(?P<op>[*+\-]))"
)


def _tokenize(text: str, line: int, col0: int):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", line, col0 + pos + 1)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), col0 + start + 1))
        pos = m.end()
    return toks


def _parse_terms(text: str, line: int, col0: int):
    """Parse ``[coef] name*name... (+|- ...)*`` into (coef, [names], col) triples."""
    toks = _tokenize(text, line, col0)
    if not toks:
        raise ParseError("empty expression", line, col0 + 1)
    terms = []
    i = 0
    sign = 1
    while True:
        if i < len(toks) and toks[i][0] == "op" and toks[i][1] == "-":
            sign = -sign
            i += 1
        coef = Fraction(1)
        col = toks[i][2] if i < len(toks) else col0 + len(text) + 1
        if i < len(toks) and toks[i][0] == "num":
            coef = Fraction(toks[i][1])
            i += 1
        names = []
        if i < len(toks) and toks[i][0] == "name":
            names.append(toks[i][1])
            i += 1
            while i < len(toks) and toks[i][1] == "*":
                i += 1
                if i >= len(toks) or toks[i][0] != "name":
                    raise ParseError("expected an arrow name after '*'", line, toks[i - 1][2] + 1)
                names.append(toks[i][1])
                i += 1
        elif coef != 0:
            raise ParseError("expected a path", line, col)
        terms.append((sign * coef, names, col))
        if i >= len(toks):
            return terms
        kind, val, c = toks[i]
        if kind == "op" and val in "+-":
            sign = 1 if val == "+" else -1
            i += 1
            if i >= len(toks):
                raise ParseError("dangling operator", line, c)
            continue
        raise ParseError(f"unexpected token {val!r}", line, c)


def _names_to_path(quiver: Quiver, names: Sequence[str], line: int, col: int) -> Path:
    """Written-order names (``c*b*a``) to a traversal-order path."""
    steps: list[tuple[str, object]] = []
    for nm in reversed(names):
        if nm.startswith("e_") and nm[2:] in quiver.vertex_index:
            steps.append(("e", quiver.vertex_index[nm[2:]]))
        elif nm in quiver.arrow_index:
            steps.append(("a", quiver.arrow_index[nm]))
        else:
            raise ParseError(f"unknown arrow {nm!r}", line, col)
    arrows: list[int] = []
    cur = None
    src = None
    for kind, val in steps:
        if kind == "e":
            s = t = val
        else:
            s, t = quiver.src[val], quiver.tgt[val]
        if cur is not None and s != cur:
            raise ParseError(f"path {'*'.join(names)} is not composable", line, col)
        if src is None:
            src = s
        cur = t
        if kind == "a":
            arrows.append(val)
    return Path(src, cur, tuple(arrows))


def parse_element(alg: BoundQuiverAlgebra, text: str, line: int = 0, col0: int = 0) -> AlgebraElement:
    """Parse an algebra element such as ``2 b*a + -1/2 e_3``."""
    out = alg.element()
    for coef, names, col in _parse_terms(text, line, col0):
        if not names:
            continue
        p = _names_to_path(alg.quiver, names, line, col)
        nf = alg.normal_form(p)
        c = alg.field(coef)
        out = out + alg.element({i: c * v for i, v in nf.items()})
    return out


def _validate_relation(q: Quiver, r: Relation) -> None:
    if not r.terms:
        raise ValueError("empty relation")
    s, t = r.terms[0][1].source, r.terms[0][1].target
    for _, p in r.terms:
        if p.length < 2:
            raise ValueError("relation paths must have length at least 2")
        if (p.source, p.target) != (s, t):
            raise ValueError("relation paths must be parallel")


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_algebra(text: str, field: Field | None = None, path_cap: int = DEFAULT_PATH_CAP) -> BoundQuiverAlgebra:
    """Parse algebra file text.  ``field`` overrides a ``field`` line."""
    vertices: list[str] | None = None
    arrows: list[Arrow] = []
    rel_lines: list[tuple[str, int, int]] = []
    file_field = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        kw, _, rest = body.partition(" ")
        rest_col = indent + len(kw) + 1
        if kw == "field":
            parts = rest.split()
            if parts == ["Q"]:
                file_field = QQ
            elif len(parts) == 2 and parts[0] == "Fp" and parts[1].isdigit():
                try:
                    file_field = Field(int(parts[1]))
                except ValueError as exc:
                    raise ParseError(str(exc), ln, rest_col + 1) from None
            else:
                raise ParseError("expected 'field Q' or 'field Fp <prime>'", ln, rest_col + 1)
        elif kw == "vertices":
            if vertices is not None:
                raise ParseError("duplicate vertices line", ln, indent + 1)
            vertices = rest.split()
            if not vertices:
                raise ParseError("no vertices declared", ln, rest_col + 1)
            if len(set(vertices)) != len(vertices):
                raise ParseError("duplicate vertex id", ln, rest_col + 1)
        elif kw == "arrow":
            m = re.fullmatch(r"\s*([A-Za-z][A-Za-z0-9_']*)\s*:\s*(\S+)\s*->\s*(\S+)\s*", rest)
            if not m:
                raise ParseError("expected 'arrow <name>: <src> -> <tgt>'", ln, rest_col + 1)
            name, s, t = m.groups()
            if vertices is None:
                raise ParseError("arrow declared before vertices", ln, indent + 1)
            for end, grp in ((s, 2), (t, 3)):
                if end not in vertices:
                    raise ParseError(f"dangling vertex {end!r}", ln, rest_col + m.start(grp) + 1)
            if name.startswith("e_") and name[2:] in vertices:
                raise ParseError(f"arrow name {name!r} clashes with a trivial path", ln, rest_col + 1)
            if any(a.name == name for a in arrows):
                raise ParseError(f"duplicate arrow {name!r}", ln, rest_col + 1)
            arrows.append(Arrow(name, s, t))
        elif kw == "relation":
            rel_lines.append((rest, ln, rest_col))
        else:
            raise ParseError(f"unknown keyword {kw!r}", ln, indent + 1)
    if vertices is None:
        raise ParseError("missing 'vertices' line", 1, 1)
    quiver = Quiver(vertices, arrows)
    k = field if field is not None else (file_field or QQ)
    relations = []
    for rest, ln, col in rel_lines:
        terms = []
        for coef, names, c in _parse_terms(rest, ln, col):
            if not names:
                raise ParseError("relation terms must be paths", ln, c)
            p = _names_to_path(quiver, names, ln, c)
            if p.length < 2:
                raise ParseError("relation of length < 2", ln, c)
            terms.append((k(coef), p))
        if len({(p.source, p.target) for _, p in terms}) != 1:
            raise ParseError("relation paths are not parallel", ln, col + 1)
        relations.append(Relation(tuple(terms)))
    try:
        return BoundQuiverAlgebra(quiver, relations, k, path_cap=path_cap)
    except InfiniteDimensionalError as exc:
        raise ParseError(str(exc), rel_lines[-1][1] if rel_lines else 1, 1) from None


def load_algebra(path, field: Field | None = None) -> BoundQuiverAlgebra:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read(), field=field)


def _path_text(q: Quiver, p: Path) -> str:
    if not p.arrows:
        return f"e_{q.vertices[p.source]}"
    return "*".join(q.arrows[k].name for k in reversed(p.arrows))


def serialize_algebra(alg: BoundQuiverAlgebra) -> str:
    q = alg.quiver
    lines = [f"field {alg.field.name}", "vertices " + " ".join(q.vertices)]
    for a in q.arrows:
        lines.append(f"arrow {a.name}: {a.source} -> {a.target}")
    for r in alg.relations:
        parts = []
        for c, p in r.terms:
            t = _path_text(q, p)
            parts.append(t if c == 1 else f"{c} {t}")
        lines.append("relation " + " + ".join(parts))
    return "\n".join(lines) + "\n"


def projective_module(alg: BoundQuiverAlgebra, vertex):
    """The indecomposable projective ``A e_vertex`` as a representation."""
    from .repcat import projective_module as _pm

    return _pm(alg, vertex)
