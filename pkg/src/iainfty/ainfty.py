"""Involutive A∞-algebras, their morphisms, and the checks that validate them.

Operations are stored both ways: ``ops`` holds m_n on A (degree n-2) and
``bops`` the suspended b_n on SA (degree -1), related by
b_n(sa_1..sa_n) = σ s m_n(a_1..a_n).  Suspension raises degree by one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Optional

from .field import QQ, FieldSpec
from .icoalgebra import (Components, TensorCoalgebra, apply_coalgebra_map, apply_coderivation,
                         arities, parity, word_degree, word_involution)
from .linalg import (Echelon, GradedMap, GradedSpace, StructuralError, add_term, axpy, linear_extend,
                     nullspace, rank_of)


def sigma_exponent(degs: list[int]) -> int:
    k = len(degs)
    e = k * (k - 1) // 2
    for j, d in enumerate(degs[:-1], start=1):
        e += (k - j) * d
    return e


def suspend_ops(ops: dict, deg: dict) -> Components:
    """m_n tables on A -> b_n tables on SA (σ-transport)."""
    out: Components = {}
    for n, table in ops.items():
        for w, img in table.items():
            s = parity(sigma_exponent([deg[a] for a in w]))
            out[tuple(w)] = {y: s * c for y, c in img.items()}
    return out


def desuspend_ops(bops: Components, deg: dict) -> dict:
    """Inverse of suspend_ops; σ is a sign so the transport is its own inverse."""
    out: dict = {}
    for w, img in bops.items():
        s = parity(sigma_exponent([deg[a] for a in w]))
        out.setdefault(len(w), {})[tuple(w)] = {y: s * c for y, c in img.items()}
    return out


@dataclass
class Witness:
    word: tuple
    residual: dict

    def names(self) -> list[str]:
        return [str(x) for x in self.word]


@dataclass
class CheckResult:
    ok: bool
    witness: Optional[Witness] = None
    detail: str = ""

    def __bool__(self):
        return self.ok


class AInftyStructure:
    """Graded space A with involution ★ and sparse operations m_n, n ≤ N."""

    def __init__(self, space: GradedSpace, ops: dict, max_arity: int = 4, name: str = "A"):
        self.space = space
        self.field = space.field
        self.name = name
        self.max_arity = max_arity
        deg = space.degree
        clean: dict = {}
        for n, table in ops.items():
            n = int(n)
            if n < 1:
                raise ValueError("operations start at arity 1 (no curvature term)")
            if n > max_arity and table:
                raise ValueError(f"operation of arity {n} exceeds the arity cap {max_arity}")
            t: dict = {}
            for w, img in table.items():
                w = tuple(w)
                if len(w) != n:
                    raise ValueError(f"m_{n} given on {len(w)} inputs")
                for a in w:
                    if a not in space.index:
                        raise ValueError(f"unknown basis element {a!r}")
                img = {y: self.field(c) for y, c in img.items() if c}
                for y in img:
                    if y not in space.index:
                        raise ValueError(f"unknown basis element {y!r}")
                    want = sum(deg[a] for a in w) + n - 2
                    if deg[y] != want:
                        raise ValueError(f"m_{n}{w} -> {y!r}: output degree {deg[y]}, "
                                         f"m_n has degree n-2 so expected {want}")
                if img:
                    t[w] = img
            if t:
                clean[n] = t
        self.ops = clean

    def __repr__(self):
        return f"AInftyStructure({self.name}, dim={len(self.space)}, arities={sorted(self.ops)})"

    @cached_property
    def suspended_space(self) -> GradedSpace:
        return GradedSpace([(k, d + 1) for k, d in self.space.basis], dict(self.space._inv),
                           self.field, name=f"S{self.name}", check=False)

    @cached_property
    def bops(self) -> Components:
        return suspend_ops(self.ops, self.space.degree)

    @property
    def sdeg(self) -> dict:
        return self.suspended_space.degree

    def m(self, n: int, *args) -> dict:
        return dict(self.ops.get(n, {}).get(tuple(args), {}))

    def coalgebra(self, L: int) -> TensorCoalgebra:
        return TensorCoalgebra(self.suspended_space, L)

    def bar_differential(self, word: tuple) -> dict:
        return apply_coderivation(word, self.bops, -1, self.sdeg, None, self.field.one)

    def with_involution(self, involution) -> AInftyStructure:
        return AInftyStructure(self.space.with_involution(involution), self.ops, self.max_arity, self.name)

    def star_letter(self, x):
        return self.space.star_basis(x)


# --- constructors -----------------------------------------------------------

def from_dga(space: GradedSpace, d: dict, mult: dict, max_arity: int = 4, name: str = "A") -> AInftyStructure:
    """m1 = d, m2 = mult; rejects d² != 0, Leibniz failure, non-associativity."""
    F = space.field
    deg = space.degree
    keys = space.keys

    def dv(vec):
        return linear_extend(lambda k: d.get(k, {}), vec)

    def mul(x, y):
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                axpy(out, ca * cb, mult.get((a, b), {}))
        return out

    one = F.one
    for a in keys:
        if dv(dv({a: one})):
            raise StructuralError(f"d∘d != 0 on {a!r}", witness=(a,))
    for a in keys:
        for b in keys:
            lhs = dv(mul({a: one}, {b: one}))
            rhs = mul(dv({a: one}), {b: one})
            axpy(rhs, parity(deg[a]), mul({a: one}, dv({b: one})))
            if lhs != rhs:
                raise StructuralError(f"Leibniz rule fails on ({a!r}, {b!r})", witness=(a, b))
    for a in keys:
        for b in keys:
            for c in keys:
                if mul(mul({a: one}, {b: one}), {c: one}) != mul({a: one}, mul({b: one}, {c: one})):
                    raise StructuralError(f"product is not associative on ({a!r}, {b!r}, {c!r})",
                                          witness=(a, b, c))
    ops = {1: {(k,): v for k, v in d.items() if v}, 2: {tuple(k): v for k, v in mult.items() if v}}
    return AInftyStructure(space, ops, max_arity, name)


# --- validity ---------------------------------------------------------------

def stasheff_check_coderivation(a: AInftyStructure, L: int) -> CheckResult:
    """b∘b = 0 on the weight ≤ L bar coalgebra; witness is the least failing word."""
    C = a.coalgebra(L)
    for w in C.words:
        r: dict = {}
        for v, c in a.bar_differential(w).items():
            axpy(r, c, a.bar_differential(v))
        if r:
            return CheckResult(False, Witness(w, r), f"b∘b != 0 on a word of weight {len(w)}")
    return CheckResult(True)


def involution_compat_check(a: AInftyStructure, L: int) -> CheckResult:
    """The bar differential commutes with word reversal-with-star on words ≤ L."""
    C = a.coalgebra(L)
    for w in C.words:
        lhs = linear_extend(a.bar_differential, C.word_involution(w))
        rhs = linear_extend(C.word_involution, a.bar_differential(w))
        if lhs != rhs:
            diff = dict(lhs)
            axpy(diff, -1, rhs)
            return CheckResult(False, Witness(w, diff), "bar differential does not commute with ★")
    return CheckResult(True)


def stasheff_check_literal(a: AInftyStructure, n_range, sign_mode: str = "koszul") -> dict:
    """Σ_{i+j+l=n} (-1)^{i+jl} b_{i+1+l}(Id^i ⊗ b_j ⊗ Id^l) per arity n.

    Diagnostic only.  Returns {n: (number of words with nonzero residual,
    first such word or None)}.
    """
    if sign_mode not in ("koszul", "plain"):
        raise ValueError(f"unknown sign mode {sign_mode!r}")
    b = a.bops
    sdeg = a.sdeg
    letters = list(a.space.keys)
    by_word = b
    out = {}
    for n in n_range:
        bad, first = 0, None
        for w in product(letters, repeat=n):
            res: dict = {}
            for j in range(1, n + 1):
                for i in range(0, n - j + 1):
                    l = n - i - j
                    img = by_word.get(w[i:i + j])
                    if not img:
                        continue
                    sign = parity(i + j * l)
                    if sign_mode == "koszul":
                        sign *= parity(word_degree(w[:i], sdeg))
                    for y, c in img.items():
                        inner = w[:i] + (y,) + w[i + j:]
                        outer = by_word.get(inner)
                        if outer:
                            axpy(res, sign * c, outer)
            if res:
                bad += 1
                if first is None:
                    first = w
        out[n] = (bad, first)
    return out


def coderivation_mode_verdict(a: AInftyStructure, n_range) -> dict:
    """Same table as the literal diagnostic, for the all-plus Koszul (b∘b) expression."""
    from .icoalgebra import coderivation_square_components
    C = a.coalgebra(max(n_range))
    sq = coderivation_square_components(a.bops, C, -1, max(n_range))
    out = {}
    for n in n_range:
        table = sq.get(n, {})
        first = min(table, key=lambda w: [a.space.index[x] for x in w]) if table else None
        out[n] = (len(table), first)
    return out


# --- morphisms --------------------------------------------------------------

@dataclass
class AInftyMorphism:
    """Components f_n: (SC)^n -> SD of degree 0."""

    source: AInftyStructure
    target: AInftyStructure
    components: Components

    def __post_init__(self):
        sd, td = self.source.sdeg, self.target.sdeg
        F = self.target.field
        clean: Components = {}
        for w, img in self.components.items():
            w = tuple(w)
            for x in w:
                if x not in sd:
                    raise ValueError(f"unknown source basis element {x!r}")
            img = {y: F(c) for y, c in img.items() if c}
            for y in img:
                if y not in td:
                    raise ValueError(f"unknown target basis element {y!r}")
                if td[y] != word_degree(w, sd):
                    raise ValueError(f"f_{len(w)}{w} -> {y!r} is not of degree 0")
            if img:
                clean[w] = img
        self.components = clean

    @classmethod
    def identity(cls, a: AInftyStructure) -> AInftyMorphism:
        return cls(a, a, {(k,): {k: 1} for k in a.space.keys})

    @classmethod
    def linear(cls, source, target, f1: dict) -> AInftyMorphism:
        return cls(source, target, {(k,): v for k, v in f1.items()})

    def coalgebra_map(self, word: tuple) -> dict:
        return apply_coalgebra_map(word, self.components)

    def component(self, n: int) -> Components:
        return {w: v for w, v in self.components.items() if len(w) == n}

    def f1(self) -> GradedMap:
        cols = {w[0]: v for w, v in self.components.items() if len(w) == 1}
        return GradedMap(self.source.space, self.target.space, 0, cols, check=False)


def morphism_failure(f: AInftyMorphism, L: int, sign_mode: str = "koszul"):
    C, D = f.source, f.target
    Cc = C.coalgebra(L)
    for w in Cc.words:
        if not w:
            continue
        # f ∘ b̂_C
        lhs: dict = {}
        if sign_mode == "koszul":
            inner = C.bar_differential(w)
        else:
            inner = apply_coderivation(w, C.bops, 0, C.sdeg, None, C.field.one)
        for v, c in inner.items():
            axpy(lhs, c, f.components.get(v, {}))
        rhs: dict = {}
        for v, c in f.coalgebra_map(w).items():
            axpy(rhs, c, D.bops.get(v, {}))
        if lhs != rhs:
            diff = dict(lhs)
            axpy(diff, -1, rhs)
            return "equation", Witness(w, diff)
        # involutivity of the components: f_n(w*) = f_n(w)*
        a = linear_extend(lambda u: f.components.get(u, {}), Cc.word_involution(w))
        b: dict = {}
        for y, c in f.components.get(w, {}).items():
            for yy, cy in word_involution((y,), D.sdeg, D.star_letter).items():
                add_term(b, yy[0], c * cy)
        if a != b:
            return "involution", Witness(w, a)
    return None


def morphism_check(f: AInftyMorphism, L: int, sign_mode: str = "koszul") -> CheckResult:
    bad = morphism_failure(f, L, sign_mode)
    if bad is None:
        return CheckResult(True)
    return CheckResult(False, bad[1], bad[0])


def morphism_compose(f: AInftyMorphism, g: AInftyMorphism) -> AInftyMorphism:
    """(f∘g)_n = Σ f_s(g_{i1} ⊗ … ⊗ g_{is})."""
    if g.target is not f.source and g.target.space.basis != f.source.space.basis:
        raise ValueError(f"cannot compose: target {g.target.name} is not source {f.source.name}")
    n_max = max([len(w) for w in g.components] or [0]) * max([len(w) for w in f.components] or [0])
    n_max = min(n_max, g.source.max_arity)
    comps: Components = {}
    letters = list(g.source.space.keys)
    for n in range(1, n_max + 1):
        for w in product(letters, repeat=n):
            img: dict = {}
            for v, c in g.coalgebra_map(w).items():
                axpy(img, c, f.components.get(v, {}))
            if img:
                comps[w] = img
    return AInftyMorphism(g.source, f.target, comps)


# --- homology ---------------------------------------------------------------

@dataclass
class HomologyAlgebra:
    degrees: dict                 # class name -> degree
    representatives: dict         # class name -> cycle in A
    product: dict                 # (class, class) -> {class: coeff}
    space: GradedSpace = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return len(self.representatives)


def _homology_basis(a: AInftyStructure):
    """Per degree: (boundary echelon, [cycle representatives])."""
    A = a.space
    F = a.field
    m1 = a.ops.get(1, {})
    idx = A.index
    out = {}
    for d in sorted(set(A.degree.values())):
        src = A.in_degree(d)
        cols = [{idx[y]: c for y, c in m1.get((k,), {}).items()} for k in src]
        kernel = nullspace(cols, F.one)
        bound = Echelon()
        for k in A.in_degree(d + 1):
            v = m1.get((k,), {})
            if v:
                bound.add({idx[y]: c for y, c in v.items()})
        reps = []
        for kv in kernel:
            vec = {src[j]: c for j, c in kv.items()}
            if bound.add({idx[y]: c for y, c in vec.items()}):
                reps.append(vec)
        out[d] = reps
    return out


def homology_algebra(a: AInftyStructure) -> HomologyAlgebra:
    """H(A, m1) with deterministic representatives and the product induced by m2."""
    A = a.space
    F = a.field
    idx = A.index
    basis = _homology_basis(a)
    m1 = a.ops.get(1, {})
    names, degrees, reps = [], {}, {}
    for d, vecs in basis.items():
        for i, v in enumerate(vecs):
            nm = f"h{d}_{i}"
            names.append(nm)
            degrees[nm] = d
            reps[nm] = v

    def classify(vec):
        if not vec:
            return {}
        d = A.vector_degree(vec)
        ech = Echelon()
        for k in A.in_degree(d + 1):
            v = m1.get((k,), {})
            if v:
                ech.add({idx[y]: c for y, c in v.items()}, {})
        for nm in names:
            if degrees[nm] == d:
                ech.add({idx[y]: c for y, c in reps[nm].items()}, {nm: F.one})
        v, t = ech.reduce({idx[y]: c for y, c in vec.items()}, {})
        if v:
            raise StructuralError("product of cycles is not a cycle", witness=vec)
        return {k: -c for k, c in t.items()}

    m2 = a.ops.get(2, {})

    def mul(x, y):
        out: dict = {}
        for p, cp in x.items():
            for q, cq in y.items():
                axpy(out, cp * cq, m2.get((p, q), {}))
        return out

    prod = {}
    for x in names:
        for y in names:
            c = classify(mul(reps[x], reps[y]))
            if c:
                prod[(x, y)] = c

    def hmul(u, v):
        out: dict = {}
        for p, cp in u.items():
            for q, cq in v.items():
                axpy(out, cp * cq, prod.get((p, q), {}))
        return out

    one = F.one
    for x in names:
        for y in names:
            for z in names:
                if hmul(hmul({x: one}, {y: one}), {z: one}) != hmul({x: one}, hmul({y: one}, {z: one})):
                    raise StructuralError(f"induced product not associative on ({x}, {y}, {z})")
    space = GradedSpace([(nm, degrees[nm]) for nm in names], field=F, name=f"H({a.name})")
    return HomologyAlgebra(degrees, reps, prod, space)


def is_quasi_iso(f: AInftyMorphism) -> bool:
    """f1 induces an isomorphism H(C) -> H(D) in every degree."""
    C, D = f.source, f.target
    hc, hd = _homology_basis(C), _homology_basis(D)
    f1 = f.f1()
    m1d = D.ops.get(1, {})
    idx = D.space.index
    degs = set(hc) | set(hd)
    for d in degs:
        reps_c = hc.get(d, [])
        reps_d = hd.get(d, [])
        if len(reps_c) != len(reps_d):
            return False
        if not reps_c:
            continue
        bound = Echelon()
        for k in D.space.in_degree(d + 1):
            v = m1d.get((k,), {})
            if v:
                bound.add({idx[y]: c for y, c in v.items()})
        base = len(bound)
        for r in reps_c:
            bound.add({idx[y]: c for y, c in f1(r).items()})
        if len(bound) - base != len(reps_c):
            return False
    return True
