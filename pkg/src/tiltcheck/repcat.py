"""Finite-dimensional left modules over a bound quiver algebra.

A :class:`Representation` stores one vector space per vertex (by dimension)
and one matrix per arrow; the matrix of an arrow ``i -> j`` has shape
``dims[j] x dims[i]``.  Morphisms store one block per vertex.
"""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Sequence

from .exactlinalg import QQ, Field, Matrix, block_diag, hstack, vstack
from .quiverparse import BoundQuiverAlgebra, ParseError, Path


class Cancelled(RuntimeError):
    """Raised when a caller-supplied cancellation signal fires."""


def _check_cancel(cancel: Callable[[], bool] | None) -> None:
    if cancel is not None and cancel():
        raise Cancelled("computation cancelled")


class Representation:
    """A left module as a representation of the bound quiver."""

    def __init__(
        self,
        algebra: BoundQuiverAlgebra,
        dims: Sequence[int],
        maps: Sequence[Matrix] | None = None,
        name: str | None = None,
        check: bool = True,
    ):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        q = algebra.quiver
        k = algebra.field
        if len(self.dims) != q.n_vertices:
            raise ValueError("one dimension per vertex is required")
        if any(d < 0 for d in self.dims):
            raise ValueError("negative dimension")
        if maps is None:
            maps = [Matrix.zeros(k, self.dims[q.tgt[a]], self.dims[q.src[a]]) for a in range(len(q.arrows))]
        self.maps = tuple(maps)
        if len(self.maps) != len(q.arrows):
            raise ValueError("one matrix per arrow is required")
        for a, m in enumerate(self.maps):
            if m.shape != (self.dims[q.tgt[a]], self.dims[q.src[a]]):
                raise ValueError(f"arrow {q.arrows[a].name}: matrix has shape {m.shape}")
        self.name = name
        self._path_cache: dict = {}
        self._hash = None
        if check:
            self.verify_relations()

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def offsets(self) -> list[int]:
        out, s = [], 0
        for d in self.dims:
            out.append(s)
            s += d
        return out

    def path_matrix(self, p: Path) -> Matrix:
        """The action of a path, a ``dims[target] x dims[source]`` matrix."""
        key = (p.source, p.arrows)
        hit = self._path_cache.get(key)
        if hit is not None:
            return hit
        m = Matrix.identity(self.field, self.dims[p.source])
        for a in p.arrows:
            m = self.maps[a] @ m
        self._path_cache[key] = m
        return m

    def basis_action(self, i: int) -> Matrix:
        return self.path_matrix(self.algebra.basis[i])

    def element_matrix(self, x, source: int, target: int) -> Matrix:
        """Action of an algebra element from vertex ``source`` to ``target``."""
        alg = self.algebra
        out = Matrix.zeros(self.field, self.dims[target], self.dims[source])
        for i, c in x.terms():
            p = alg.basis[i]
            if p.source == source and p.target == target:
                out = out + self.path_matrix(p).scale(c)
        return out

    def verify_relations(self) -> None:
        for r in self.algebra.relations:
            acc = Matrix.zeros(self.field, self.dims[r.target], self.dims[r.source])
            for c, p in r.terms:
                acc = acc + self.path_matrix(p).scale(c)
            if not acc.is_zero():
                raise ValueError("a relation does not vanish on the representation")

    def named(self, name: str) -> "Representation":
        r = Representation(self.algebra, self.dims, self.maps, name=name, check=False)
        return r

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Representation)
            and self.algebra == other.algebra
            and self.dims == other.dims
            and self.maps == other.maps
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dims, self.maps))
        return self._hash

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"<Representation {label}dims={self.dims}>"


class ModMorphism:
    """A module homomorphism given by one block per vertex."""

    def __init__(self, source: Representation, target: Representation, blocks: Sequence[Matrix], check: bool = True):
        self.source = source
        self.target = target
        self.blocks = tuple(blocks)
        if len(self.blocks) != len(source.dims):
            raise ValueError("one block per vertex is required")
        for v, b in enumerate(self.blocks):
            if b.shape != (target.dims[v], source.dims[v]):
                raise ValueError(f"block at vertex {v} has shape {b.shape}")
        if check and not self.intertwines():
            raise ValueError("blocks do not intertwine the arrow actions")

    @property
    def field(self) -> Field:
        return self.source.field

    def intertwines(self) -> bool:
        q = self.source.algebra.quiver
        for a in range(len(q.arrows)):
            i, j = q.src[a], q.tgt[a]
            if self.blocks[j] @ self.source.maps[a] != self.target.maps[a] @ self.blocks[i]:
                return False
        return True

    @classmethod
    def identity(cls, x: Representation) -> "ModMorphism":
        return cls(x, x, [Matrix.identity(x.field, d) for d in x.dims], check=False)

    @classmethod
    def zero(cls, x: Representation, y: Representation) -> "ModMorphism":
        return cls(x, y, [Matrix.zeros(x.field, dy, dx) for dx, dy in zip(x.dims, y.dims)], check=False)

    def __matmul__(self, other: "ModMorphism") -> "ModMorphism":
        """Composition ``self o other`` (first ``other``)."""
        if other.target.dims != self.source.dims:
            raise ValueError("morphisms are not composable")
        return ModMorphism(other.source, self.target, [a @ b for a, b in zip(self.blocks, other.blocks)], check=False)

    def __add__(self, other: "ModMorphism") -> "ModMorphism":
        return ModMorphism(self.source, self.target, [a + b for a, b in zip(self.blocks, other.blocks)], check=False)

    def __sub__(self, other: "ModMorphism") -> "ModMorphism":
        return ModMorphism(self.source, self.target, [a - b for a, b in zip(self.blocks, other.blocks)], check=False)

    def __neg__(self) -> "ModMorphism":
        return ModMorphism(self.source, self.target, [-a for a in self.blocks], check=False)

    def scale(self, c) -> "ModMorphism":
        return ModMorphism(self.source, self.target, [a.scale(c) for a in self.blocks], check=False)

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks)

    def ranks(self) -> tuple[int, ...]:
        return tuple(b.rank() for b in self.blocks)

    def is_mono(self) -> bool:
        return self.ranks() == self.source.dims

    def is_epi(self) -> bool:
        return self.ranks() == self.target.dims

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_mono()

    def inverse(self) -> "ModMorphism":
        return ModMorphism(self.target, self.source, [b.inverse() for b in self.blocks], check=False)

    def power(self, n: int) -> "ModMorphism":
        out = ModMorphism.identity(self.source)
        for _ in range(n):
            out = self @ out
        return out

    def total(self) -> Matrix:
        return block_diag(self.field, *self.blocks)

    def vector(self) -> tuple:
        """All block entries flattened, vertex by vertex, row-major."""
        return tuple(x for b in self.blocks for r in b.rows for x in r)

    def __eq__(self, other):
        return (
            isinstance(other, ModMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.blocks == other.blocks
        )

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return f"<ModMorphism {self.source.dims} -> {self.target.dims}>"


def morphism_from_vector(x: Representation, y: Representation, vec: Sequence) -> ModMorphism:
    blocks = []
    pos = 0
    for dx, dy in zip(x.dims, y.dims):
        rows = []
        for _ in range(dy):
            rows.append(vec[pos:pos + dx])
            pos += dx
        blocks.append(Matrix(x.field, rows, dx))
    return ModMorphism(x, y, blocks, check=False)


# -- Hom spaces -----------------------------------------------------------------

_HOM_CACHE: dict = {}
_HOM_CACHE_LIMIT = 20000


def hom_system(x: Representation, y: Representation) -> Matrix:
    """The intertwining equations as a matrix acting on :meth:`ModMorphism.vector`."""
    q = x.algebra.quiver
    k = x.field
    offs = []
    s = 0
    for dx, dy in zip(x.dims, y.dims):
        offs.append(s)
        s += dx * dy
    nvars = s
    rows = []
    z = k.zero
    for a in range(len(q.arrows)):
        i, j = q.src[a], q.tgt[a]
        M, N = x.maps[a], y.maps[a]
        dxi, dxj, dyi, dyj = x.dims[i], x.dims[j], y.dims[i], y.dims[j]
        # (B_j M - N B_i)[r][c] = 0 for r < dyj, c < dxi
        for r in range(dyj):
            for c in range(dxi):
                row = [z] * nvars
                for t in range(dxj):
                    coef = M[t, c]
                    if coef:
                        row[offs[j] + r * dxj + t] += coef
                for t in range(dyi):
                    coef = N[r, t]
                    if coef:
                        row[offs[i] + t * dxi + c] -= coef
                rows.append(row)
    return Matrix(k, rows, nvars) if rows else Matrix.zeros(k, 0, nvars)


def hom_space(x: Representation, y: Representation) -> list[ModMorphism]:
    """A basis of ``Hom(x, y)``."""
    if x.algebra != y.algebra:
        raise ValueError("modules over different algebras")
    key = (x, y)
    hit = _HOM_CACHE.get(key)
    if hit is not None:
        return [ModMorphism(x, y, h.blocks, check=False) for h in hit]
    sysm = hom_system(x, y)
    ker = sysm.kernel_basis()
    basis = [morphism_from_vector(x, y, c) for c in ker.columns()]
    if len(_HOM_CACHE) > _HOM_CACHE_LIMIT:
        _HOM_CACHE.clear()
    _HOM_CACHE[key] = basis
    return list(basis)


def hom_dim(x: Representation, y: Representation) -> int:
    return len(hom_space(x, y))


def linear_combination(basis: Sequence[ModMorphism], coeffs: Sequence, x=None, y=None) -> ModMorphism:
    if not basis:
        return ModMorphism.zero(x, y)
    out = ModMorphism.zero(basis[0].source, basis[0].target)
    for c, f in zip(coeffs, basis):
        if c:
            out = out + f.scale(c)
    return out


# -- subobjects and quotients ---------------------------------------------------


@dataclass
class Subobject:
    module: Representation
    inclusion: ModMorphism

    @property
    def ambient(self) -> Representation:
        return self.inclusion.target


@dataclass
class Quotient:
    module: Representation
    projection: ModMorphism


@dataclass
class DirectSum:
    module: Representation
    injections: list
    projections: list


def _restrict(field, basis_src: Matrix, basis_tgt: Matrix, m: Matrix) -> Matrix:
    """Matrix of ``m`` restricted to subspaces given by column bases."""
    if basis_src.ncols == 0 or basis_tgt.ncols == 0:
        return Matrix.zeros(field, basis_tgt.ncols, basis_src.ncols)
    sol = basis_tgt.solve(m @ basis_src)
    if sol is None:
        raise ValueError("subspace is not invariant")
    return sol


def _span_closure(y: Representation, spaces: Sequence[Matrix]) -> list[Matrix]:
    """Smallest arrow-invariant family of subspaces containing ``spaces``."""
    q = y.algebra.quiver
    k = y.field
    spaces = [s.column_basis() if s.ncols else s for s in spaces]
    changed = True
    while changed:
        changed = False
        for a in range(len(q.arrows)):
            i, j = q.src[a], q.tgt[a]
            if spaces[i].ncols == 0:
                continue
            img = y.maps[a] @ spaces[i]
            if spaces[j].ncols == 0:
                cand = img.column_basis()
            else:
                cand = hstack(spaces[j], img).column_basis()
            if cand.ncols > spaces[j].ncols:
                spaces[j] = cand
                changed = True
    return spaces


def submodule(y: Representation, spaces: Sequence[Matrix], name: str | None = None) -> Subobject:
    """The submodule generated by per-vertex column spans."""
    k = y.field
    spaces = [s if s.nrows == d else Matrix.zeros(k, d, 0) for s, d in zip(spaces, y.dims)]
    spaces = _span_closure(y, list(spaces))
    q = y.algebra.quiver
    dims = [s.ncols for s in spaces]
    maps = [_restrict(k, spaces[q.src[a]], spaces[q.tgt[a]], y.maps[a]) for a in range(len(q.arrows))]
    sub = Representation(y.algebra, dims, maps, name=name, check=False)
    return Subobject(sub, ModMorphism(sub, y, spaces, check=False))


def kernel(f: ModMorphism) -> Subobject:
    k = f.field
    spaces = [b.kernel_basis() for b in f.blocks]
    x = f.source
    q = x.algebra.quiver
    dims = [s.ncols for s in spaces]
    maps = [_restrict(k, spaces[q.src[a]], spaces[q.tgt[a]], x.maps[a]) for a in range(len(q.arrows))]
    sub = Representation(x.algebra, dims, maps, check=False)
    return Subobject(sub, ModMorphism(sub, x, spaces, check=False))


def _right_inverse(field, m: Matrix) -> Matrix:
    if m.nrows == 0:
        return Matrix.zeros(field, m.ncols, 0)
    r = m.solve(Matrix.identity(field, m.nrows))
    if r is None:
        raise ValueError("matrix is not surjective")
    return r


def cokernel(f: ModMorphism) -> Quotient:
    k = f.field
    y = f.target
    q = y.algebra.quiver
    projs = []
    for b, d in zip(f.blocks, y.dims):
        if b.ncols == 0:
            projs.append(Matrix.identity(k, d))
        else:
            projs.append(b.T.kernel_basis().T if d else Matrix.zeros(k, 0, 0))
    projs = [p if p.ncols == d else Matrix.zeros(k, p.nrows, d) for p, d in zip(projs, y.dims)]
    rinv = [_right_inverse(k, p) for p in projs]
    dims = [p.nrows for p in projs]
    maps = [projs[q.tgt[a]] @ y.maps[a] @ rinv[q.src[a]] for a in range(len(q.arrows))]
    cok = Representation(y.algebra, dims, maps, check=False)
    return Quotient(cok, ModMorphism(y, cok, projs, check=False))


def image(f: ModMorphism) -> tuple[Subobject, ModMorphism]:
    """The image subobject of ``f`` and the corestriction ``source -> image``."""
    k = f.field
    spaces = [b.column_basis() if b.ncols else Matrix.zeros(k, b.nrows, 0) for b in f.blocks]
    y = f.target
    q = y.algebra.quiver
    dims = [s.ncols for s in spaces]
    maps = [_restrict(k, spaces[q.src[a]], spaces[q.tgt[a]], y.maps[a]) for a in range(len(q.arrows))]
    im = Representation(y.algebra, dims, maps, check=False)
    inc = ModMorphism(im, y, spaces, check=False)
    core = factor_through_mono(f, inc)
    return Subobject(im, inc), core


def factor_through_mono(f: ModMorphism, m: ModMorphism) -> ModMorphism:
    """The unique ``h`` with ``m o h == f`` (``m`` mono, ``im f`` inside ``im m``)."""
    k = f.field
    blocks = []
    for fb, mb in zip(f.blocks, m.blocks):
        if mb.ncols == 0:
            if not fb.is_zero():
                raise ValueError("map does not factor through the monomorphism")
            blocks.append(Matrix.zeros(k, 0, fb.ncols))
            continue
        if fb.ncols == 0:
            blocks.append(Matrix.zeros(k, mb.ncols, 0))
            continue
        h = mb.solve(fb)
        if h is None:
            raise ValueError("map does not factor through the monomorphism")
        blocks.append(h)
    return ModMorphism(f.source, m.source, blocks, check=False)


def factor_through_epi(f: ModMorphism, e: ModMorphism) -> ModMorphism:
    """The unique ``h`` with ``h o e == f`` (``e`` epi, ``ker e`` inside ``ker f``)."""
    k = f.field
    blocks = []
    for fb, eb in zip(f.blocks, e.blocks):
        if eb.nrows == 0:
            if not fb.is_zero():
                raise ValueError("map does not factor through the epimorphism")
            blocks.append(Matrix.zeros(k, fb.nrows, 0))
            continue
        if fb.nrows == 0:
            blocks.append(Matrix.zeros(k, 0, eb.nrows))
            continue
        h = eb.T.solve(fb.T)
        if h is None:
            raise ValueError("map does not factor through the epimorphism")
        blocks.append(h.T)
    return ModMorphism(e.target, f.target, blocks, check=False)


def lift_through(f: ModMorphism, g: ModMorphism) -> ModMorphism | None:
    """Some ``h`` with ``g o h == f`` (``f: X -> Z``, ``g: Y -> Z``), or ``None``."""
    basis = hom_space(f.source, g.source)
    if not basis:
        return ModMorphism.zero(f.source, g.source) if f.is_zero() else None
    cols = [(g @ h).vector() for h in basis]
    A = Matrix.from_columns(f.field, len(f.vector()), cols)
    b = Matrix.from_columns(f.field, len(f.vector()), [f.vector()])
    sol = A.solve(b)
    if sol is None:
        return None
    return linear_combination(basis, sol.col(0))


def direct_sum(xs: Sequence[Representation], algebra: BoundQuiverAlgebra | None = None) -> DirectSum:
    if not xs:
        if algebra is None:
            raise ValueError("the empty direct sum needs an algebra")
        z = zero_module(algebra)
        return DirectSum(z, [], [])
    alg = xs[0].algebra
    k = alg.field
    q = alg.quiver
    nv = q.n_vertices
    dims = [sum(x.dims[v] for x in xs) for v in range(nv)]
    maps = [block_diag(k, *[x.maps[a] for x in xs]) for a in range(len(q.arrows))]
    s = Representation(alg, dims, maps, check=False)
    inj, proj = [], []
    offs = [0] * nv
    for x in xs:
        ib, pb = [], []
        for v in range(nv):
            d, D, o = x.dims[v], dims[v], offs[v]
            rows = [[1 if (r == o + c) else 0 for c in range(d)] for r in range(D)]
            ib.append(Matrix(k, rows, d))
            pb.append(ib[-1].T if D else Matrix.zeros(k, d, 0))
            offs[v] += d
        inj.append(ModMorphism(x, s, ib, check=False))
        proj.append(ModMorphism(s, x, pb, check=False))
    return DirectSum(s, inj, proj)


def morphism_direct_sum(fs: Sequence[ModMorphism]) -> ModMorphism:
    src = direct_sum([f.source for f in fs]).module
    tgt = direct_sum([f.target for f in fs]).module
    k = fs[0].field
    blocks = [block_diag(k, *[f.blocks[v] for f in fs]) for v in range(len(src.dims))]
    return ModMorphism(src, tgt, blocks, check=False)


def stack_maps_out(x: Representation, fs: Sequence[ModMorphism], target: Representation) -> ModMorphism:
    """The map ``x -> target`` whose components (stacked vertically) are ``fs``."""
    k = x.field
    blocks = []
    for v in range(len(x.dims)):
        parts = [f.blocks[v] for f in fs]
        blocks.append(vstack(*parts) if parts else Matrix.zeros(k, 0, x.dims[v]))
    return ModMorphism(x, target, blocks, check=False)


def stack_maps_in(fs: Sequence[ModMorphism], source: Representation, y: Representation) -> ModMorphism:
    """The map ``source -> y`` whose components (side by side) are ``fs``."""
    k = y.field
    blocks = []
    for v in range(len(y.dims)):
        parts = [f.blocks[v] for f in fs]
        blocks.append(hstack(*parts) if parts else Matrix.zeros(k, y.dims[v], 0))
    return ModMorphism(source, y, blocks, check=False)


def zero_module(alg: BoundQuiverAlgebra) -> Representation:
    return Representation(alg, [0] * alg.n_vertices, name="0", check=False)


# -- standard modules -------------------------------------------------------------


def projective_module(alg: BoundQuiverAlgebra, vertex) -> Representation:
    """``P_v = A e_v``: basis at vertex ``w`` is the basis paths ``v -> w``."""
    v = alg.vertex(vertex)
    k = alg.field
    q = alg.quiver
    at = [[i for i in alg.basis_between(v, w)] for w in range(q.n_vertices)]
    pos = {i: (w, n) for w in range(q.n_vertices) for n, i in enumerate(at[w])}
    maps = []
    for a in range(len(q.arrows)):
        i, j = q.src[a], q.tgt[a]
        rows = [[k.zero] * len(at[i]) for _ in range(len(at[j]))]
        arrow_path = Path(i, j, (a,))
        for c, bi in enumerate(at[i]):
            p = alg.basis[bi]
            nf = alg.normal_form(Path(p.source, j, p.arrows + (a,)))
            for bj, coef in nf.items():
                rows[pos[bj][1]][c] += coef
        del arrow_path
        maps.append(Matrix(k, rows, len(at[i])))
    return Representation(alg, [len(x) for x in at], maps, name=f"P{q.vertices[v]}", check=False)


def simple_module(alg: BoundQuiverAlgebra, vertex) -> Representation:
    v = alg.vertex(vertex)
    dims = [1 if w == v else 0 for w in range(alg.n_vertices)]
    return Representation(alg, dims, name=f"S{alg.quiver.vertices[v]}", check=False)


def radical(x: Representation) -> Subobject:
    """Sum of the images of all arrows."""
    q = x.algebra.quiver
    k = x.field
    imgs: list[list[tuple]] = [[] for _ in x.dims]
    for a in range(len(q.arrows)):
        imgs[q.tgt[a]].extend(x.maps[a].columns())
    spaces = [Matrix.from_columns(k, d, cols) if cols else Matrix.zeros(k, d, 0) for cols, d in zip(imgs, x.dims)]
    return submodule(x, spaces)


def top_generators(x: Representation) -> list[tuple[int, tuple]]:
    """Vectors (vertex, vector) whose classes form a basis of ``x / rad x``."""
    rad = radical(x)
    k = x.field
    gens = []
    for v, d in enumerate(x.dims):
        R = rad.inclusion.blocks[v]
        have = R
        for e in range(d):
            vec = tuple(k.one if t == e else k.zero for t in range(d))
            col = Matrix.from_columns(k, d, [vec])
            cand = hstack(have, col) if have.ncols else col
            if cand.rank() > have.rank():
                gens.append((v, vec))
                have = cand
    return gens


# -- interval modules and indecomposable lists ------------------------------------


def linear_order(alg: BoundQuiverAlgebra) -> list[int] | None:
    """Vertices along a linearly oriented A_n quiver, or ``None``."""
    q = alg.quiver
    n = q.n_vertices
    if len(q.arrows) != n - 1:
        return None
    outdeg = [0] * n
    indeg = [0] * n
    nxt = {}
    for a in range(len(q.arrows)):
        outdeg[q.src[a]] += 1
        indeg[q.tgt[a]] += 1
        nxt[q.src[a]] = q.tgt[a]
    if any(d > 1 for d in outdeg) or any(d > 1 for d in indeg):
        return None
    starts = [v for v in range(n) if indeg[v] == 0]
    if len(starts) != 1:
        return None
    order = [starts[0]]
    while order[-1] in nxt:
        order.append(nxt[order[-1]])
    return order if len(order) == n else None


def interval_label(alg: BoundQuiverAlgebra, i: int, j: int) -> str:
    vs = alg.quiver.vertices
    return f"[{vs[i]}]" if i == j else f"[{vs[i]}..{vs[j]}]"


def interval_module(alg: BoundQuiverAlgebra, start, end) -> Representation:
    """The thin module supported on the line segment from ``start`` to ``end``."""
    order = linear_order(alg)
    if order is None:
        raise ValueError("interval modules need a linearly oriented quiver")
    i, j = alg.vertex(start), alg.vertex(end)
    pi, pj = order.index(i), order.index(j)
    if pi > pj:
        raise ValueError("interval endpoints are in the wrong order")
    support = set(order[pi:pj + 1])
    q = alg.quiver
    k = alg.field
    dims = [1 if v in support else 0 for v in range(q.n_vertices)]
    maps = []
    for a in range(len(q.arrows)):
        s, t = q.src[a], q.tgt[a]
        if s in support and t in support:
            maps.append(Matrix(k, [[1]], 1))
        else:
            maps.append(Matrix.zeros(k, dims[t], dims[s]))
    return Representation(alg, dims, maps, name=interval_label(alg, i, j))


class IndecomposableList:
    """An ordered, labelled list of pairwise non-isomorphic indecomposables."""

    def __init__(self, algebra: BoundQuiverAlgebra, algebra_class: str, modules: Sequence[Representation]):
        self.algebra = algebra
        self.algebra_class = algebra_class
        self.modules = tuple(modules)
        self.labels = tuple(m.name for m in self.modules)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be unique")
        self._by_label = {m.name: m for m in self.modules}
        self._hom_matrix = None

    @property
    def complete(self) -> bool:
        return self.algebra_class in ("nakayama-linear", "hereditary-linear")

    def __len__(self):
        return len(self.modules)

    def __iter__(self):
        return iter(self.modules)

    def __getitem__(self, label: str) -> Representation:
        return self._by_label[self.resolve(label)]

    def resolve(self, label: str) -> str:
        """Accept ``[2..4]``, ``[2,3,4]`` or ``[2 3 4]`` spellings of interval labels."""
        if label in self._by_label:
            return label
        m = re.fullmatch(r"\[\s*([^\]]+?)\s*\]", label.strip())
        if m:
            parts = [p for p in re.split(r"[,\s]+", m.group(1)) if p]
            if len(parts) >= 2:
                cand = f"[{parts[0]}..{parts[-1]}]"
                if cand in self._by_label and self._contiguous(parts):
                    return cand
        raise KeyError(f"unknown indecomposable label {label!r}")

    def _contiguous(self, parts: Sequence[str]) -> bool:
        order = linear_order(self.algebra)
        if order is None:
            return True
        names = [self.algebra.quiver.vertices[v] for v in order]
        try:
            i = names.index(parts[0])
        except ValueError:
            return False
        return names[i:i + len(parts)] == list(parts)

    def hom_matrix(self) -> Matrix:
        """``H[a][b] = dim Hom(M_a, M_b)`` over the list."""
        if self._hom_matrix is None:
            rows = [[hom_dim(a, b) for b in self.modules] for a in self.modules]
            self._hom_matrix = Matrix(QQ, rows, len(self.modules))
        return self._hom_matrix


def enumerate_indecomposables(
    alg: BoundQuiverAlgebra,
    user_supplied: Sequence[Representation] | None = None,
    cancel: Callable[[], bool] | None = None,
) -> IndecomposableList:
    """All indecomposables for linear Nakayama or linear hereditary algebras.

    For other algebras a user-supplied list is required and is taken as given.
    """
    if user_supplied is not None:
        return IndecomposableList(alg, "user-supplied", list(user_supplied))
    order = linear_order(alg)
    if order is None or not all(r.is_monomial for r in alg.relations):
        raise ValueError("unsupported algebra class: supply the indecomposables explicitly")
    cls = "hereditary-linear" if not alg.relations else "nakayama-linear"
    mods = []
    for pi, i in enumerate(order):
        proj = projective_module(alg, i)
        for pj in range(pi, len(order)):
            _check_cancel(cancel)
            j = order[pj]
            if proj.dims[j] == 0:
                break
            mods.append(interval_module(alg, i, j))
    return IndecomposableList(alg, cls, mods)


def hom_vector(inds: IndecomposableList, x: Representation) -> tuple[int, ...]:
    return tuple(hom_dim(z, x) for z in inds.modules)


def decompose(x: Representation, inds: IndecomposableList) -> dict[str, int]:
    """Multiplicities of listed indecomposables in ``x``.

    Uses the Hom-dimension vector ``h_Z = dim Hom(Z, x)``; over a complete
    list of indecomposables the matrix of Hom dimensions is invertible and
    ``H m = h`` has a unique solution.
    """
    H = inds.hom_matrix()
    h = hom_vector(inds, x)
    sol = H.solve(Matrix.from_columns(QQ, len(h), [h]))
    if sol is None:
        raise ValueError("module is not a sum of listed indecomposables")
    out = {}
    for label, m in zip(inds.labels, sol.col(0)):
        if m.denominator != 1 or m < 0:
            raise ValueError("module is not a sum of listed indecomposables")
        if m:
            out[label] = int(m)
    total = [0] * len(x.dims)
    for label, m in out.items():
        for v, d in enumerate(inds[label].dims):
            total[v] += m * d
    if tuple(total) != x.dims:
        raise ValueError("module is not a sum of listed indecomposables")
    return out


def is_isomorphic(
    x: Representation,
    y: Representation,
    inds: IndecomposableList | None = None,
    seed: int = 0,
    tries: int = 64,
) -> bool | None:
    """Decide ``x ~ y``; ``None`` means the bounded search was inconclusive."""
    if x.dims != y.dims:
        return False
    if x == y:
        return True
    hxy = hom_space(x, y)
    if not hxy:
        return x.total_dim == 0
    if len(hxy) != hom_dim(y, x) or len(hxy) != hom_dim(x, x) or hom_dim(x, x) != hom_dim(y, y):
        return False
    if inds is not None and inds.complete:
        return hom_vector(inds, x) == hom_vector(inds, y)
    for f in hxy:
        if f.is_iso():
            return True
    for f, g in itertools.combinations(hxy, 2):
        if (f + g).is_iso():
            return True
    rng = random.Random(seed)
    for _ in range(tries):
        coeffs = [rng.randint(-50, 50) for _ in hxy]
        if linear_combination(hxy, coeffs).is_iso():
            return True
    return None


def fitting_split(x: Representation, seed: int = 0, tries: int = 16) -> tuple[Subobject, Subobject] | None:
    """A nontrivial decomposition ``x = ker f^N + im f^N`` if one is found."""
    ends = hom_space(x, x)
    N = max(1, x.total_dim)
    rng = random.Random(seed)
    cands = list(ends) + [f + g for f, g in itertools.combinations(ends, 2)]
    for _ in range(tries):
        cands.append(linear_combination(ends, [rng.randint(-9, 9) for _ in ends]))
    for f in cands:
        fn = f.power(N)
        if fn.is_zero() or fn.is_iso():
            continue
        return kernel(fn), image(fn)[0]
    return None


def is_indecomposable(x: Representation, inds: IndecomposableList | None = None) -> bool | None:
    """``True``/``False`` when certified, ``None`` when the bounded search is inconclusive."""
    if x.total_dim == 0:
        return False
    if inds is not None and inds.complete:
        try:
            d = decompose(x, inds)
        except ValueError:
            return None
        return sum(d.values()) == 1
    if fitting_split(x) is not None:
        return False
    if hom_dim(x, x) == 1:
        return True
    return None


# -- trace, reject, Sub and Fac ----------------------------------------------------


def trace_of_class(cls: Iterable[Representation], x: Representation) -> Subobject:
    """Sum of images of all maps from members of ``cls`` into ``x``."""
    k = x.field
    cols: list[list[tuple]] = [[] for _ in x.dims]
    for c in cls:
        for f in hom_space(c, x):
            for v, b in enumerate(f.blocks):
                cols[v].extend(b.columns())
    spaces = [Matrix.from_columns(k, d, cs) if cs else Matrix.zeros(k, d, 0) for cs, d in zip(cols, x.dims)]
    return submodule(x, spaces)


def reject(cls: Iterable[Representation], x: Representation) -> Subobject:
    """Intersection of the kernels of all maps from ``x`` into members of ``cls``."""
    k = x.field
    rows: list[list[tuple]] = [[] for _ in x.dims]
    for c in cls:
        for f in hom_space(x, c):
            for v, b in enumerate(f.blocks):
                rows[v].extend(b.rows)
    spaces = []
    for rs, d in zip(rows, x.dims):
        if rs:
            spaces.append(Matrix(k, rs, d).kernel_basis())
        else:
            spaces.append(Matrix.identity(k, d))
    return submodule(x, spaces)


def left_approximation(cls: Sequence[Representation], x: Representation) -> ModMorphism:
    """The universal map ``x -> sum of members`` (one summand per Hom basis element)."""
    targets, maps = [], []
    for c in cls:
        for f in hom_space(x, c):
            targets.append(c)
            maps.append(f)
    ds = direct_sum(targets, x.algebra)
    return stack_maps_out(x, maps, ds.module)


def right_approximation(cls: Sequence[Representation], x: Representation) -> ModMorphism:
    """The universal map ``sum of members -> x``."""
    sources, maps = [], []
    for c in cls:
        for f in hom_space(c, x):
            sources.append(c)
            maps.append(f)
    ds = direct_sum(sources, x.algebra)
    return stack_maps_in(maps, ds.module, x)


def in_sub(cls: Sequence[Representation], x: Representation) -> bool:
    """Does ``x`` embed into a finite sum of members of ``cls``?"""
    return reject(cls, x).module.is_zero()


def in_fac(cls: Sequence[Representation], x: Representation) -> bool:
    """Is ``x`` a quotient of a finite sum of members of ``cls``?"""
    return trace_of_class(cls, x).module.dims == x.dims


def is_thin(x: Representation) -> bool:
    return all(d <= 1 for d in x.dims)


def thin_submodules(x: Representation) -> list[Subobject]:
    """Every submodule of a thin module (coordinate subspaces closed under arrows)."""
    if not is_thin(x):
        raise ValueError("module is not thin")
    q = x.algebra.quiver
    k = x.field
    support = [v for v, d in enumerate(x.dims) if d]
    out = []
    for r in range(len(support) + 1):
        for subset in itertools.combinations(support, r):
            s = set(subset)
            ok = True
            for a in range(len(q.arrows)):
                i, j = q.src[a], q.tgt[a]
                if i in s and j not in s and x.dims[j] and x.maps[a][0, 0]:
                    ok = False
                    break
            if not ok:
                continue
            spaces = [Matrix.identity(k, 1) if v in s else Matrix.zeros(k, x.dims[v], 0) for v in range(len(x.dims))]
            out.append(submodule(x, spaces))
    return out


# -- module files -------------------------------------------------------------------

_MATRIX_RE = re.compile(r"^\s*\[(.*)\]\s*$")


def parse_matrix_literal(text: str, field: Field, line: int = 0, col: int = 0) -> list[list]:
    m = _MATRIX_RE.match(text)
    if not m:
        raise ParseError("expected a matrix literal [[..],[..]]", line, col)
    inner = m.group(1).strip()
    if not inner:
        return []
    rows = re.findall(r"\[([^\[\]]*)\]", inner)
    rest = re.sub(r"\[([^\[\]]*)\]", "", inner).replace(",", "").strip()
    if rest:
        raise ParseError("malformed matrix literal", line, col)
    out = []
    for r in rows:
        entries = [e for e in re.split(r"[,\s]+", r.strip()) if e]
        try:
            out.append([field.parse(e) for e in entries])
        except ValueError as exc:
            raise ParseError(str(exc), line, col) from None
    return out


def parse_modules(text: str, alg: BoundQuiverAlgebra) -> list[Representation]:
    """Parse ``module``/``dim``/``map`` blocks into named representations."""
    q = alg.quiver
    k = alg.field
    mods = []
    cur = None

    def finish():
        if cur is None:
            return
        name, dims, maps, ln = cur
        mats = []
        for a, arrow in enumerate(q.arrows):
            s, t = dims[q.src[a]], dims[q.tgt[a]]
            if arrow.name in maps:
                rows, mln = maps[arrow.name]
                if len(rows) != t or any(len(r) != s for r in rows):
                    if not (t == 0 or s == 0):
                        raise ParseError(f"map {arrow.name} must be {t}x{s}", mln, 1)
                mats.append(Matrix(k, rows, s) if t else Matrix.zeros(k, 0, s))
            else:
                mats.append(Matrix.zeros(k, t, s))
        try:
            mods.append(Representation(alg, dims, mats, name=name))
        except ValueError as exc:
            raise ParseError(f"module {name}: {exc}", ln, 1) from None

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        kw, _, rest = line.strip().partition(" ")
        if kw == "module":
            finish()
            name = rest.strip()
            if not name:
                raise ParseError("module needs a name", ln, 1)
            cur = (name, [0] * q.n_vertices, {}, ln)
        elif kw == "dim":
            if cur is None:
                raise ParseError("dim outside a module block", ln, 1)
            for tok in rest.split():
                v, eq, n = tok.partition("=")
                if not eq or v not in q.vertex_index or not n.isdigit():
                    raise ParseError(f"bad dimension entry {tok!r}", ln, line.find(tok) + 1)
                cur[1][q.vertex_index[v]] = int(n)
        elif kw == "map":
            if cur is None:
                raise ParseError("map outside a module block", ln, 1)
            name, eq, lit = rest.partition("=")
            name = name.strip()
            if not eq or name not in q.arrow_index:
                raise ParseError(f"unknown arrow in map line", ln, line.find(rest) + 1)
            cur[2][name] = (parse_matrix_literal(lit, k, ln, line.find(lit) + 1), ln)
        else:
            raise ParseError(f"unknown keyword {kw!r}", ln, 1)
    finish()
    return mods


def serialize_module(x: Representation, name: str | None = None) -> str:
    alg = x.algebra
    q = alg.quiver
    lines = [f"module {name or x.name or 'M'}"]
    lines.append("dim " + " ".join(f"{v}={d}" for v, d in zip(q.vertices, x.dims)))
    for a, arrow in enumerate(q.arrows):
        m = x.maps[a]
        if m.nrows and m.ncols and not m.is_zero():
            body = ",".join("[" + ",".join(str(e) for e in r) + "]" for r in m.rows)
            lines.append(f"map {arrow.name} = [{body}]")
    return "\n".join(lines) + "\n"
