"""Graded vector spaces, sparse degree-homogeneous maps, chain complexes.

Vectors are plain dicts ``{basis_key: coefficient}`` with zero entries removed.
Basis keys are arbitrary hashables (strings for user input, tuples for
generated tensor bases); each space fixes an order on them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterable, Mapping, Optional

from .field import QQ, FieldSpec

Vector = Dict[Hashable, object]


class StructuralError(Exception):
    """An algebraic identity that must hold exactly does not."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class SpaceMismatch(ValueError):
    pass


# --- sparse vectors ---------------------------------------------------------

def add_term(vec: dict, key, coeff) -> None:
    """vec[key] += coeff, dropping zeros."""
    c = vec.get(key)
    if c is None:
        if coeff:
            vec[key] = coeff
        return
    c = c + coeff
    if c:
        vec[key] = c
    else:
        del vec[key]


def axpy(vec: dict, coeff, other: Mapping) -> None:
    """vec += coeff * other."""
    if not coeff:
        return
    for k, c in other.items():
        add_term(vec, k, coeff * c)


def scale(vec: Mapping, coeff) -> dict:
    if not coeff:
        return {}
    return {k: coeff * c for k, c in vec.items()}


def linear_extend(fn: Callable[[Hashable], Mapping], vec: Mapping) -> dict:
    out: dict = {}
    for k, c in vec.items():
        axpy(out, c, fn(k))
    return out


# --- exact elimination ------------------------------------------------------

class Echelon:
    """Incremental row echelon form over an exact field.

    Vectors are keyed by integers; the pivot of a stored row is its smallest
    key and every stored row is normalised to pivot coefficient 1.  Rows can
    carry a *tag* (another sparse vector) that records which input
    combination produced them, which is what ``solve`` and ``nullspace``
    read back.
    """

    def __init__(self):
        self.rows: dict[int, tuple[dict, Optional[dict]]] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Mapping, tag: Optional[Mapping] = None):
        v = dict(vec)
        t = dict(tag) if tag is not None else None
        while v:
            k = min(v)
            row = self.rows.get(k)
            if row is None:
                return v, t
            c = v[k]
            r, rt = row
            for kk, cc in r.items():
                add_term(v, kk, -c * cc)
            if t is not None and rt is not None:
                for kk, cc in rt.items():
                    add_term(t, kk, -c * cc)
        return v, t

    def add(self, vec: Mapping, tag: Optional[Mapping] = None) -> bool:
        v, t = self.reduce(vec, tag)
        if not v:
            return False
        k = min(v)
        inv = 1 / v[k]
        v = {kk: cc * inv for kk, cc in v.items()}
        if t is not None:
            t = {kk: cc * inv for kk, cc in t.items()}
        self.rows[k] = (v, t)
        return True

    def copy(self) -> Echelon:
        e = Echelon()
        e.rows = dict(self.rows)
        return e

    def contains(self, vec: Mapping) -> bool:
        v, _ = self.reduce(vec)
        return not v


def rank_of(vectors: Iterable[Mapping]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return len(ech)


def nullspace(columns: list, one=1) -> list[dict]:
    """Basis of {x : sum_j x_j columns[j] = 0}, as sparse vectors over column indices."""
    ech = Echelon()
    kernel = []
    for j, col in enumerate(columns):
        v, t = ech.reduce(col, {j: one})
        if not v:
            kernel.append(t)
        else:
            k = min(v)
            inv = 1 / v[k]
            ech.rows[k] = ({kk: cc * inv for kk, cc in v.items()}, {kk: cc * inv for kk, cc in t.items()})
    return kernel


def solve(columns: list, target: Mapping, one=1) -> Optional[dict]:
    """Some x with sum_j x_j columns[j] = target, or None."""
    ech = Echelon()
    for j, col in enumerate(columns):
        ech.add(col, {j: one})
    v, t = ech.reduce(target, {})
    if v:
        return None
    return {k: -c for k, c in t.items()}


# --- graded spaces ----------------------------------------------------------

class GradedSpace:
    """Finite graded basis with an optional degree-0 involution.

    ``involution`` maps basis keys to vectors; missing keys are fixed.  The
    identity is the default.
    """

    def __init__(self, basis, involution: Optional[Mapping] = None, field: FieldSpec = QQ,
                 name: str = "V", check: bool = True):
        self.basis = tuple((k, int(d)) for k, d in basis)
        self.field = field
        self.name = name
        self.keys = tuple(k for k, _ in self.basis)
        self.index = {k: i for i, k in enumerate(self.keys)}
        if len(self.index) != len(self.keys):
            raise ValueError(f"{name}: basis names are not unique")
        self.degree = dict(self.basis)
        one = field.one
        self._inv = {}
        if involution:
            for k, img in involution.items():
                if k not in self.index:
                    raise ValueError(f"{name}: involution names unknown basis element {k!r}")
                img = {kk: field(c) for kk, c in img.items() if c}
                if img != {k: one}:
                    self._inv[k] = img
        if check:
            self._check_involution()

    def _check_involution(self):
        for k, img in self._inv.items():
            for kk in img:
                if kk not in self.index:
                    raise ValueError(f"{self.name}: involution image of {k!r} names unknown {kk!r}")
                if self.degree[kk] != self.degree[k]:
                    raise ValueError(f"{self.name}: involution moves {k!r} out of degree {self.degree[k]}")
        for k in self._inv:
            if self.star(self.star({k: self.field.one})) != {k: self.field.one}:
                raise ValueError(f"{self.name}: involution does not square to the identity on {k!r}")

    def __len__(self):
        return len(self.keys)

    def __repr__(self):
        return f"GradedSpace({self.name}, dim={len(self)})"

    @property
    def has_trivial_involution(self) -> bool:
        return not self._inv

    def star_basis(self, key) -> dict:
        img = self._inv.get(key)
        if img is None:
            return {key: self.field.one}
        return img

    def star(self, vec: Mapping) -> dict:
        return linear_extend(self.star_basis, vec)

    def dims_by_degree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for _, d in self.basis:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def in_degree(self, d: int) -> list:
        return [k for k, dd in self.basis if dd == d]

    def vector_degree(self, vec: Mapping) -> int:
        """Degree of a homogeneous vector; rejects mixed degrees."""
        degs = {self.degree[k] for k in vec}
        if len(degs) > 1:
            raise ValueError(f"vector in {self.name} is not homogeneous: degrees {sorted(degs)}")
        if not degs:
            raise ValueError("the zero vector has no degree")
        return degs.pop()

    def with_involution(self, involution: Optional[Mapping]) -> GradedSpace:
        return GradedSpace(self.basis, involution, self.field, self.name)

    def involution_map(self) -> GradedMap:
        return GradedMap(self, self, 0, {k: self.star_basis(k) for k in self.keys})

    def identity(self) -> GradedMap:
        one = self.field.one
        return GradedMap(self, self, 0, {k: {k: one} for k in self.keys})

    def permuted(self, order: list[int]) -> GradedSpace:
        return GradedSpace([self.basis[i] for i in order], dict(self._inv), self.field, self.name)


def tensor_space(V: GradedSpace, W: GradedSpace, name: Optional[str] = None) -> GradedSpace:
    """V (x) W with basis pairs (v, w) in lexicographic order and star v*(x)w*."""
    basis = [((v, w), dv + dw) for v, dv in V.basis for w, dw in W.basis]
    inv = {}
    if V._inv or W._inv:
        for v in V.keys:
            for w in W.keys:
                if v in V._inv or w in W._inv:
                    img: dict = {}
                    for vv, a in V.star_basis(v).items():
                        for ww, b in W.star_basis(w).items():
                            add_term(img, (vv, ww), a * b)
                    inv[(v, w)] = img
    return GradedSpace(basis, inv, V.field, name or f"{V.name}⊗{W.name}", check=False)


class GradedMap:
    """Sparse degree-homogeneous linear map, stored by columns."""

    def __init__(self, source: GradedSpace, target: GradedSpace, degree: int,
                 columns: Mapping, check: bool = True):
        self.source = source
        self.target = target
        self.degree = int(degree)
        self.columns = {}
        for s, col in columns.items():
            col = {t: c for t, c in col.items() if c}
            if col:
                self.columns[s] = col
        if check:
            for s, col in self.columns.items():
                if s not in source.index:
                    raise SpaceMismatch(f"{s!r} is not a basis element of {source.name}")
                ds = source.degree[s]
                for t in col:
                    if t not in target.index:
                        raise SpaceMismatch(f"{t!r} is not a basis element of {target.name}")
                    if target.degree[t] != ds + self.degree:
                        raise ValueError(
                            f"entry {s!r} -> {t!r} goes from degree {ds} to {target.degree[t]}, "
                            f"map has degree {self.degree}")

    @classmethod
    def from_triplets(cls, source, target, degree, triplets) -> GradedMap:
        cols: dict = {}
        for i, j, c in triplets:
            col = cols.setdefault(source.keys[i], {})
            add_term(col, target.keys[j], source.field(c))
        return cls(source, target, degree, cols)

    @classmethod
    def zero(cls, source, target, degree=0) -> GradedMap:
        return cls(source, target, degree, {})

    def __call__(self, vec: Mapping) -> dict:
        out: dict = {}
        for k, c in vec.items():
            col = self.columns.get(k)
            if col:
                axpy(out, c, col)
        return out

    def column(self, key) -> dict:
        return self.columns.get(key, {})

    def triplets(self) -> list[tuple[int, int, object]]:
        """Canonically ordered (source index, target index, coefficient)."""
        si, ti = self.source.index, self.target.index
        out = [(si[s], ti[t], c) for s, col in self.columns.items() for t, c in col.items()]
        out.sort(key=lambda e: (e[0], e[1]))
        return out

    def dense(self) -> list[list]:
        zero = self.source.field.zero
        m = [[zero] * len(self.source) for _ in range(len(self.target))]
        for i, j, c in self.triplets():
            m[j][i] = c
        return m

    def is_zero(self) -> bool:
        return not self.columns

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self.source.keys == other.source.keys and self.target.keys == other.target.keys
                and self.columns == other.columns)

    def __sub__(self, other: GradedMap) -> GradedMap:
        cols = {k: dict(v) for k, v in self.columns.items()}
        for k, v in other.columns.items():
            axpy(cols.setdefault(k, {}), -1, v)
        return GradedMap(self.source, self.target, self.degree, cols, check=False)

    def __add__(self, other: GradedMap) -> GradedMap:
        cols = {k: dict(v) for k, v in self.columns.items()}
        for k, v in other.columns.items():
            axpy(cols.setdefault(k, {}), 1, v)
        return GradedMap(self.source, self.target, self.degree, cols, check=False)

    def __repr__(self):
        return f"GradedMap({self.source.name} -> {self.target.name}, deg {self.degree}, nnz={len(self.triplets())})"


def compose(f: GradedMap, g: GradedMap) -> GradedMap:
    """f ∘ g."""
    if g.target.keys != f.source.keys:
        raise SpaceMismatch(f"cannot compose: {g.target.name} is not {f.source.name}")
    cols = {}
    for s, col in g.columns.items():
        img = f(col)
        if img:
            cols[s] = img
    return GradedMap(g.source, f.target, f.degree + g.degree, cols, check=False)


def koszul(deg_a: int, deg_b: int) -> int:
    return -1 if (deg_a * deg_b) % 2 else 1


def tensor_apply(f: GradedMap, g: GradedMap, x: Mapping, y: Mapping, sign_mode: str = "koszul") -> dict:
    """(f ⊗ g)(x ⊗ y) for homogeneous x, y; result keyed by pairs."""
    dx = f.source.vector_degree(x)
    g.source.vector_degree(y)
    sign = koszul(g.degree, dx) if sign_mode == "koszul" else 1
    fx, gy = f(x), g(y)
    out: dict = {}
    for a, ca in fx.items():
        for b, cb in gy.items():
            add_term(out, (a, b), sign * ca * cb)
    return out


def tensor_maps(f: GradedMap, g: GradedMap, sign_mode: str = "koszul") -> GradedMap:
    """f ⊗ g on source(f) ⊗ source(g); Koszul mode signs g passing a source letter of f."""
    if sign_mode not in ("koszul", "plain"):
        raise ValueError(f"unknown sign mode {sign_mode!r}")
    S = tensor_space(f.source, g.source)
    T = tensor_space(f.target, g.target)
    cols = {}
    for a, da in f.source.basis:
        fa = f.column(a)
        if not fa:
            continue
        sign = koszul(g.degree, da) if sign_mode == "koszul" else 1
        for b in g.source.keys:
            gb = g.column(b)
            if not gb:
                continue
            col: dict = {}
            for x, cx in fa.items():
                for y, cy in gb.items():
                    add_term(col, (x, y), sign * cx * cy)
            cols[(a, b)] = col
    return GradedMap(S, T, f.degree + g.degree, cols, check=False)


def _column_vectors(m: GradedMap) -> list[dict]:
    ti = m.target.index
    return [{ti[t]: c for t, c in col.items()} for col in m.columns.values()]


def rank(m: GradedMap) -> int:
    return rank_of(_column_vectors(m))


def kernel_dim(m: GradedMap) -> int:
    return len(m.source) - rank(m)


def check_involutive_map(f: GradedMap) -> bool:
    """f ∘ ★ == ★ ∘ f as matrices."""
    S, T = f.source, f.target
    for k in S.keys:
        if f(S.star_basis(k)) != T.star(f.column(k)):
            return False
    return True


# --- chain complexes --------------------------------------------------------

@dataclass
class ChainComplex:
    """Homologically graded complex: ``differentials[n]`` maps degree n to n-1.

    ``relations[n]`` optionally lists vectors spanning a subspace of degree n;
    homology is then that of the quotient complex, which requires the
    relation spaces to be carried into each other by the differential.
    """

    components: dict
    differentials: dict
    certified: Optional[tuple] = None
    relations: dict = field(default_factory=dict)
    name: str = "C"

    def degrees(self) -> list[int]:
        return sorted(self.components)

    def differential(self, n: int) -> Optional[GradedMap]:
        return self.differentials.get(n)

    def dim(self, n: int) -> int:
        c = self.components.get(n)
        return len(c) if c is not None else 0

    def square_zero_failure(self):
        """Lowest degree n with d_{n-1} ∘ d_n != 0 and the first bad basis key, else None."""
        for n in self.degrees():
            d1 = self.differentials.get(n)
            d0 = self.differentials.get(n - 1)
            if d1 is None or d0 is None:
                continue
            for k in d1.source.keys:
                if d0(d1.column(k)):
                    return n, k
        return None

    def check_square_zero(self) -> None:
        bad = self.square_zero_failure()
        if bad is not None:
            n, k = bad
            raise StructuralError(f"{self.name}: d∘d != 0 starting in degree {n} at {k!r}", witness=bad)

    def _relation_echelon(self, n: int) -> Echelon:
        """Echelon form of the relations in degree n (cached; callers get a copy)."""
        cache = self.__dict__.setdefault("_echelons", {})
        if n not in cache:
            ech = Echelon()
            C = self.components.get(n)
            if C is not None:
                idx = C.index
                for v in self.relations.get(n, ()):
                    ech.add({idx[k]: c for k, c in v.items()})
            cache[n] = ech
        return cache[n].copy()

    def descent_failure(self):
        """Lowest (degree, relation index) whose differential leaves the relation span."""
        for n in self.degrees():
            rel = self.relations.get(n)
            d = self.differentials.get(n)
            if not rel or d is None:
                continue
            ech = self._relation_echelon(n - 1)
            idx = d.target.index
            for i, v in enumerate(rel):
                img = d(v)
                if not ech.contains({idx[k]: c for k, c in img.items()}):
                    return n, i
        return None

    def homology_dims(self, degrees: Optional[Iterable[int]] = None) -> dict[int, int]:
        self.check_square_zero()
        if self.relations:
            bad = self.descent_failure()
            if bad is not None:
                raise StructuralError(f"{self.name}: differential does not descend to the quotient "
                                      f"(degree {bad[0]}, relation #{bad[1]})", witness=bad)
        if degrees is None:
            degrees = self.degrees()
            if self.certified is not None:
                lo, hi = self.certified
                degrees = [n for n in degrees if lo <= n <= hi]
        cache: dict[int, tuple[int, int]] = {}

        def quotient_dim_and_rank(n):
            # (dim C_n / R_n, rank of induced d_n: C_n/R_n -> C_{n-1}/R_{n-1})
            if n in cache:
                return cache[n]
            C = self.components.get(n)
            if C is None:
                cache[n] = (0, 0)
                return cache[n]
            rel = self._relation_echelon(n)
            qdim = len(C) - len(rel)
            d = self.differentials.get(n)
            if d is None or n - 1 not in self.components:
                cache[n] = (qdim, 0)
                return cache[n]
            target = self._relation_echelon(n - 1)
            base = len(target)
            idx = d.target.index
            for k in d.source.keys:
                col = d.column(k)
                if col:
                    target.add({idx[t]: c for t, c in col.items()})
            cache[n] = (qdim, len(target) - base)
            return cache[n]

        out = {}
        for n in degrees:
            qdim, r = quotient_dim_and_rank(n)
            _, r_next = quotient_dim_and_rank(n + 1)
            out[n] = qdim - r - r_next
        return out


def homology_dims(c: ChainComplex, degrees=None) -> dict[int, int]:
    return c.homology_dims(degrees)
