"""Projective resolutions, Ext groups and extension classes.

``Ext^n(X, Y)`` is computed as the degree ``n`` cohomology of
``Hom(Q_X, Y)`` where ``Q_X`` is a minimal projective resolution of ``X``
placed in degrees ``<= 0``.  An :class:`ExtClass` stores a cocycle
``Q_X^{-n} -> Y`` in generator coordinates; classes compare equal exactly
when their reduced representatives (fixed complement of the coboundaries)
agree.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exactlinalg import Matrix, hstack
from .repcat import (
    ModMorphism,
    Representation,
    cokernel,
    direct_sum,
    factor_through_epi,
    factor_through_mono,
    hom_space,
    image,
    kernel,
    lift_through,
    linear_combination,
    stack_maps_in,
    stack_maps_out,
    top_generators,
)
from .twotermcx import HomComplex, ModComplex, ProjComplex, ProjectiveSum


@dataclass
class ProjResolution:
    """``... -> Q^{-1} -> Q^0 -> module -> 0``; ``complex`` lives in degrees ``<= 0``."""

    module: Representation
    complex: ProjComplex
    augmentation: ModMorphism
    length: int
    complete: bool  # True when the resolution reached a zero kernel

    def term(self, n: int) -> ProjectiveSum:
        """The projective in homological position ``n`` (degree ``-n``)."""
        return self.complex.term(-n)

    def projective_dimension(self) -> int | None:
        if not self.complete:
            return None
        degs = self.complex.degrees()
        return -min(degs) if degs else -1

    def is_exact(self) -> bool:
        mc = self.complex.module_complex()
        if not self.augmentation.is_epi():
            return False
        ker0 = kernel(self.augmentation).module.total_dim
        d1 = mc.diff(-1)
        if sum(d1.ranks()) != ker0:
            return False
        for n in range(1, self.length):
            d_in = mc.diff(-n - 1)
            d_out = mc.diff(-n)
            if not (d_out @ d_in).is_zero():
                return False
            kd = sum(mc.term(-n).dims) - sum(d_out.ranks())
            if sum(d_in.ranks()) != kd:
                return False
        return True

    def is_minimal(self) -> bool:
        """Every differential lands in the radical (no isomorphism components)."""
        alg = self.module.algebra
        for n in self.complex.degrees():
            for row in self.complex.diff_matrix(n):
                for e in row:
                    for v in range(alg.n_vertices):
                        if e.coords[alg.trivial_index(v)]:
                            return False
        return True


def _cover(x: Representation) -> tuple[ProjectiveSum, ModMorphism]:
    gens = top_generators(x)
    psum = ProjectiveSum(x.algebra, [v for v, _ in gens])
    f = psum.gen_map([vec for _, vec in gens], x)
    return psum, f


_RES_CACHE: dict = {}


def minimal_resolution(x: Representation, length: int) -> ProjResolution:
    """Minimal projective resolution up to ``Q^{-length}``."""
    if length < 0:
        raise ValueError("length must be non-negative")
    key = (x, length)
    hit = _RES_CACHE.get(key)
    if hit is not None and hit.module.algebra is x.algebra:
        return hit
    alg = x.algebra
    psum0, eps = _cover(x)
    terms = {0: psum0}
    imgs_by_deg = {}
    complete = False
    prev_psum, prev_map = psum0, eps
    n = 0
    while True:
        ker = kernel(prev_map)
        if ker.module.is_zero():
            complete = True
            break
        if n >= length:
            break
        psum, cov = _cover(ker.module)
        into_prev = ker.inclusion @ cov
        n += 1
        terms[-n] = psum
        imgs_by_deg[-n] = psum.images_of(into_prev)
        prev_psum, prev_map = psum, into_prev
    diffs = {}
    for d, imgs in imgs_by_deg.items():
        src, tgt = terms[d], terms[d + 1]
        diffs[d] = src.images_to_elements(imgs, tgt)
    cx = ProjComplex(alg, terms, diffs, name=f"res({x.name or ''})", check=False)
    res = ProjResolution(x, cx, eps, length, complete)
    if len(_RES_CACHE) > 4096:
        _RES_CACHE.clear()
    _RES_CACHE[key] = res
    return res


def resolve(x: Representation, length: int) -> ProjResolution:
    return minimal_resolution(x, length)


# -- Ext ------------------------------------------------------------------------


class ExtGroup:
    def __init__(self, x: Representation, y: Representation, n: int, res: ProjResolution | None = None):
        if n < 0:
            raise ValueError("Ext degree must be non-negative")
        self.x, self.y, self.n = x, y, n
        self.res = res or minimal_resolution(x, n + 1)
        self.hom = HomComplex(self.res.complex, ModComplex.stalk(y))
        self.sq = self.hom.cohomology(n)

    @property
    def dim(self) -> int:
        return self.sq.dim

    @property
    def basis(self) -> list["ExtClass"]:
        return [ExtClass(self, tuple(b)) for b in self.sq.basis]

    def zero(self) -> "ExtClass":
        return ExtClass(self, (self.hom.field.zero,) * self.hom.dim(self.n))

    def make(self, vec: Sequence) -> "ExtClass":
        return ExtClass(self, tuple(vec))

    def cocycle_images(self, vec) -> list[tuple]:
        return self.hom.images(self.n, vec).get(-self.n, [])


class ExtClass:
    """An element of ``Ext^n(X, Y)`` represented by a cocycle ``Q_X^{-n} -> Y``."""

    def __init__(self, group: ExtGroup, vector: tuple):
        self.group = group
        self.vector = tuple(vector)
        if not group.hom.is_cycle(group.n, self.vector):
            raise ValueError("vector is not a cocycle")

    @property
    def source(self) -> Representation:
        return self.group.x

    @property
    def target(self) -> Representation:
        return self.group.y

    @property
    def degree(self) -> int:
        return self.group.n

    def canonical(self) -> tuple:
        return self.group.sq.reduce(self.vector)

    def coordinates(self) -> tuple:
        return self.group.sq.coordinates(self.vector)

    def is_zero(self) -> bool:
        return self.group.sq.is_zero(self.vector)

    def images(self) -> list[tuple]:
        return self.group.cocycle_images(self.vector)

    def cocycle(self) -> ModMorphism:
        psum = self.group.res.complex.term(-self.degree)
        return psum.gen_map(self.images(), self.target)

    def __add__(self, other: "ExtClass") -> "ExtClass":
        return ExtClass(self.group, tuple(a + b for a, b in zip(self.vector, other.vector)))

    def scale(self, c) -> "ExtClass":
        c = self.group.hom.field(c)
        return ExtClass(self.group, tuple(c * a for a in self.vector))

    def __eq__(self, other):
        if not isinstance(other, ExtClass):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.source == other.source
            and self.target == other.target
            and self.canonical() == other.canonical()
        )

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return f"<ExtClass deg {self.degree} coords {tuple(str(c) for c in self.coordinates())}>"


def ext_group(x: Representation, y: Representation, n: int) -> ExtGroup:
    return ExtGroup(x, y, n)


def ext_dim(x: Representation, y: Representation, n: int) -> int:
    return ExtGroup(x, y, n).dim


def class_from_cocycle(group: ExtGroup, images: Sequence[Sequence]) -> ExtClass:
    """The class whose cocycle sends generator ``l`` of ``Q^{-n}`` to ``images[l]``."""
    return ExtClass(group, group.hom.vector(group.n, {-group.n: list(images)}))


def morphism_class(t: ModMorphism) -> ExtClass:
    """The degree-0 class of a module morphism ``t : X -> Y``."""
    g = ExtGroup(t.source, t.target, 0)
    eps_imgs = g.res.complex.term(0).images_of(g.res.augmentation)
    imgs = [t.blocks[v].apply(vec) if t.blocks[v].ncols else (t.field.zero,) * t.blocks[v].nrows
            for v, vec in zip(g.res.complex.term(0).vertices, eps_imgs)]
    return class_from_cocycle(g, imgs)


# -- lifting along resolutions ----------------------------------------------------


def _solve_vec(m: Matrix, vec: Sequence):
    k = m.field
    if m.nrows == 0:
        return (k.zero,) * m.ncols
    if m.ncols == 0:
        if any(vec):
            return None
        return ()
    sol = m.solve(Matrix.from_columns(k, m.nrows, [vec]))
    return None if sol is None else sol.col(0)


def _lift_generators(src: ProjectiveSum, targets: Sequence[Sequence], along: ModMorphism) -> list[tuple]:
    """Generator images ``u_l`` with ``along(u_l) = targets[l]``."""
    out = []
    for l, v in enumerate(src.vertices):
        u = _solve_vec(along.blocks[v], targets[l])
        if u is None:
            raise ValueError("lifting problem has no solution")
        out.append(tuple(u))
    return out


def _apply_gen_map(src: ProjectiveSum, imgs, target: Representation, vertex: int, vec) -> tuple:
    blk = src.gen_map_block(imgs, target, vertex)
    if blk.ncols == 0:
        return (target.field.zero,) * target.dims[vertex]
    return blk.apply(vec)


def lift_cocycle(c: ExtClass, res_target: ProjResolution, depth: int) -> dict[int, list[tuple]]:
    """Lift ``c: Q_X^{-n} -> Y`` to maps ``h^j : Q_X^{-n-j} -> Q_Y^{-j}``, ``j <= depth``.

    The lifts commute with the differentials without any sign.
    """
    n = c.degree
    QX = c.group.res.complex
    QY = res_target.complex
    h: dict[int, list[tuple]] = {}
    src0 = QX.term(-n)
    h[0] = _lift_generators(src0, c.images(), res_target.augmentation)
    for j in range(1, depth + 1):
        src = QX.term(-n - j)
        if not len(src):
            break
        tgt_prev = QY.term(-j + 1)
        prev_src = QX.term(-n - j + 1)
        dX = QX.diff(-n - j)
        targets = []
        for l, v in enumerate(src.vertices):
            dvec = dX.blocks[v].col(src.gen_pos[l])
            targets.append(_apply_gen_map(prev_src, h[j - 1], tgt_prev.module, v, dvec))
        if not len(QY.term(-j)):
            if any(any(t) for t in targets):
                raise ValueError("lifting problem has no solution")
            break
        h[j] = _lift_generators(src, targets, QY.diff(-j))
    return h


def yoneda_product(a: ExtClass, b: ExtClass) -> ExtClass:
    """``a o b`` for ``b`` in ``Ext^n(X, Y)`` and ``a`` in ``Ext^m(Y, Z)``."""
    if a.source != b.target:
        raise ValueError("middle objects do not match")
    m, n = a.degree, b.degree
    X, Z = b.source, a.target
    group = ExtGroup(X, Z, m + n, res=minimal_resolution(X, m + n + 1))
    src = group.res.complex.term(-(m + n))
    if not len(src):
        return group.zero()
    h = lift_cocycle(b, a.group.res, m)
    if m not in h:
        return group.zero()
    QY_m = a.group.res.complex.term(-m)
    imgs = []
    a_imgs = a.images()
    for l, v in enumerate(src.vertices):
        imgs.append(_apply_gen_map(QY_m, a_imgs, Z, v, h[m][l]))
    return class_from_cocycle(group, imgs)


# -- short exact sequences ----------------------------------------------------------


@dataclass
class ShortExact:
    """``0 -> Y --f--> E --g--> X -> 0``."""

    f: ModMorphism
    g: ModMorphism

    @property
    def left(self) -> Representation:
        return self.f.source

    @property
    def middle(self) -> Representation:
        return self.f.target

    @property
    def right(self) -> Representation:
        return self.g.target

    def certificate(self) -> dict:
        rf = self.f.ranks()
        rg = self.g.ranks()
        comp = (self.g @ self.f).is_zero()
        return {
            "left": list(self.left.dims),
            "middle": list(self.middle.dims),
            "right": list(self.right.dims),
            "rank_f": list(rf),
            "rank_g": list(rg),
            "g_after_f_zero": comp,
        }

    def is_exact(self) -> bool:
        rf, rg = self.f.ranks(), self.g.ranks()
        if rf != self.left.dims or rg != self.right.dims:
            return False
        if not (self.g @ self.f).is_zero():
            return False
        return all(a + b == e for a, b, e in zip(rf, rg, self.middle.dims))

    def splits(self) -> bool:
        """Exists a retraction of ``f``; independent of :func:`chi1`."""
        ident = ModMorphism.identity(self.left)
        basis = hom_space(self.middle, self.left)
        if not basis:
            return self.left.is_zero()
        cols = [(r @ self.f).vector() for r in basis]
        target = ident.vector()
        A = Matrix.from_columns(self.left.field, len(target), cols)
        return A.solve(Matrix.from_columns(self.left.field, len(target), [target])) is not None


def split_sequence(x: Representation, y: Representation) -> ShortExact:
    ds = direct_sum([y, x])
    return ShortExact(ds.injections[0], ds.projections[1])


def chi1(xi: ShortExact) -> ExtClass:
    """The characteristic class in ``Ext^1(X, Y)`` of ``0 -> Y -> E -> X -> 0``."""
    if not xi.is_exact():
        raise ValueError("sequence is not exact")
    X, Y = xi.right, xi.left
    group = ExtGroup(X, Y, 1)
    Q = group.res.complex
    q0, q1 = Q.term(0), Q.term(-1)
    if not len(q1):
        return group.zero()
    eps_imgs = q0.images_of(group.res.augmentation)
    h0 = _lift_generators(q0, eps_imgs, xi.g)
    d = Q.diff(-1)
    imgs = []
    for l, v in enumerate(q1.vertices):
        dvec = d.blocks[v].col(q1.gen_pos[l])
        e = _apply_gen_map(q0, h0, xi.middle, v, dvec)
        c = _solve_vec(xi.f.blocks[v], e)
        if c is None:
            raise ValueError("sequence is not exact")
        imgs.append(tuple(c))
    return class_from_cocycle(group, imgs)


def realize_ext1(c: ExtClass) -> ShortExact:
    """A short exact sequence whose class is ``c`` (pushout along the cocycle)."""
    if c.degree != 1:
        raise ValueError("only degree-1 classes are realized")
    X, Y = c.source, c.target
    Q = c.group.res.complex
    q0, q1 = Q.term(0), Q.term(-1)
    if not len(q1):
        return split_sequence(X, Y)
    cm = c.cocycle()  # Q^{-1} -> Y
    dm = Q.diff(-1)  # Q^{-1} -> Q^0
    ds = direct_sum([Y, q0.module])
    phi = stack_maps_out(q1.module, [-cm, dm], ds.module)
    quo = cokernel(phi)
    f = quo.projection @ ds.injections[0]
    zero_plus_eps = stack_maps_in([ModMorphism.zero(Y, X), c.group.res.augmentation], ds.module, X)
    g = factor_through_epi(zero_plus_eps, quo.projection)
    return ShortExact(f, g)


def ext_pullback(xi: ShortExact, t: ModMorphism) -> ShortExact:
    """Pullback of ``xi`` along ``t : X' -> X``."""
    X2 = t.source
    ds = direct_sum([xi.middle, X2])
    both = stack_maps_in([xi.g, -t], ds.module, xi.right)
    pb = kernel(both)
    f_into = stack_maps_out(xi.left, [xi.f, ModMorphism.zero(xi.left, X2)], ds.module)
    f2 = factor_through_mono(f_into, pb.inclusion)
    g2 = ds.projections[1] @ pb.inclusion
    return ShortExact(f2, g2)


def ext_pushout(xi: ShortExact, s: ModMorphism) -> ShortExact:
    """Pushout of ``xi`` along ``s : Y -> Y'``."""
    Y2 = s.target
    ds = direct_sum([xi.middle, Y2])
    both = stack_maps_out(xi.left, [xi.f, -s], ds.module)
    po = cokernel(both)
    f2 = po.projection @ ds.injections[1]
    g_from = stack_maps_in([xi.g, ModMorphism.zero(Y2, xi.right)], ds.module, xi.right)
    g2 = factor_through_epi(g_from, po.projection)
    return ShortExact(f2, g2)


# -- six-term witnesses --------------------------------------------------------------


@dataclass
class SixTermSequence:
    """``0 -> F0 --a--> F1 --p--> A --q--> T0 --b--> T1 -> 0``."""

    a: ModMorphism
    p: ModMorphism
    q: ModMorphism
    b: ModMorphism

    @property
    def terms(self) -> dict:
        return {"F0": self.a.source, "F1": self.a.target, "A": self.p.target, "T0": self.q.target, "T1": self.b.target}

    def certificate(self) -> dict:
        maps = {"a": self.a, "p": self.p, "q": self.q, "b": self.b}
        return {
            "dims": {k: list(v.dims) for k, v in self.terms.items()},
            "ranks": {k: list(m.ranks()) for k, m in maps.items()},
        }

    def exactness_failure(self) -> str | None:
        a, p, q, b = self.a, self.p, self.q, self.b
        if a.target != p.source or p.target != q.source or q.target != b.source:
            return "maps are not composable"
        if not a.is_mono():
            return "F0 -> F1 is not injective"
        if not b.is_epi():
            return "T0 -> T1 is not surjective"
        for name, (u, w) in {"F1": (a, p), "A": (p, q), "T0": (q, b)}.items():
            if not (w @ u).is_zero():
                return f"composite through {name} is not zero"
            ku = u.ranks()
            rw = w.ranks()
            mid = u.target.dims
            if any(x + y != d for x, y, d in zip(ku, rw, mid)):
                return f"not exact at {name}"
        return None

    def is_exact(self) -> bool:
        return self.exactness_failure() is None

    def pieces(self) -> tuple[ShortExact, ShortExact, ShortExact]:
        """``rho3: F0 -> F1 -> X``, ``rho2: X -> A -> Y``, ``rho1: Y -> T0 -> T1``."""
        imX, coreX = image(self.p)
        imY, coreY = image(self.q)
        rho3 = ShortExact(self.a, coreX)
        rho2 = ShortExact(imX.inclusion, coreY)
        rho1 = ShortExact(imY.inclusion, self.b)
        return rho3, rho2, rho1


class NotExactError(ValueError):
    pass


def witness_class(w: SixTermSequence) -> ExtClass:
    """``chi^3`` of the spliced sequence, an element of ``Ext^3(T1, F0)``."""
    fail = w.exactness_failure()
    if fail is not None:
        raise NotExactError(fail)
    rho3, rho2, rho1 = w.pieces()
    c3, c2, c1 = chi1(rho3), chi1(rho2), chi1(rho1)
    return yoneda_product(c3, yoneda_product(c2, c1))
