"""Involutive A∞-bimodules, Hom complexes, homotopies and the involutive tensor product.

Letters are tagged: ``("a", k)`` for a basis element of SA, ``("m", k)`` for
the module letter.  A bimodule is stored as suspended components
b^M_{p,q}(u, sm, v) -> SM, keyed by the tagged input word.  The two-sided
bar bicomodule Bar(A) ⊗ SM ⊗ Bar(A) is the set of words with exactly one
module letter, and its differential is the coderivation extension of the
algebra and module components together.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Callable, Iterable, Mapping, Optional

from .ainfty import AInftyMorphism, AInftyStructure, sigma_exponent
from .icoalgebra import (Bicomodule, Components, DiagramReport, TensorCoalgebra, apply_coalgebra_map,
                         apply_coderivation, arities, bicomodule_check, parity, word_degree,
                         word_involution)
from .linalg import (ChainComplex, Echelon, GradedMap, GradedSpace, StructuralError, add_term, axpy,
                     linear_extend, solve)

A_TAG = "a"


def tag(t: str, word: Iterable) -> tuple:
    return tuple((t, k) for k in word)


def algebra_components(a: AInftyStructure) -> Components:
    return {tag(A_TAG, w): {(A_TAG, y): c for y, c in img.items()} for w, img in a.bops.items()}


def words_upto(letters: list, L: int):
    for n in range(L + 1):
        yield from product(letters, repeat=n)


class AInftyBimodule:
    """Space M with involution † and suspended components b^M_{p,q}."""

    def __init__(self, algebra: AInftyStructure, space: GradedSpace, components: Mapping,
                 name: str = "M", check_degrees: bool = True):
        self.algebra = algebra
        self.space = space
        self.name = name
        self.field = algebra.field
        self.sdeg_m = {k: d + 1 for k, d in space.basis}
        F = self.field
        comps: Components = {}
        for w, img in components.items():
            w = tuple(w)
            marks = [i for i, x in enumerate(w) if x[0] == "m"]
            if len(marks) != 1:
                raise ValueError(f"bimodule component {w!r} must contain exactly one module letter")
            img = {y: F(c) for y, c in img.items() if c}
            for y in img:
                if y[0] != "m" or y[1] not in space.index:
                    raise ValueError(f"bimodule component output {y!r} is not a module letter")
            if check_degrees:
                for y in img:
                    if self.sdeg_m[y[1]] != word_degree(w, self.letter_degree) - 1:
                        raise ValueError(f"component {w!r} -> {y!r} is not of degree -1")
            if img:
                comps[w] = img
        self.components = comps

    def __repr__(self):
        return f"AInftyBimodule({self.name} over {self.algebra.name}, dim={len(self.space)})"

    @classmethod
    def from_unsuspended(cls, algebra: AInftyStructure, space: GradedSpace, ops: Mapping,
                         name: str = "M") -> AInftyBimodule:
        """ops: {(p, q): {(u, m, v): {m': c}}} with m^M_{p,q} of degree p+q-1."""
        adeg, mdeg = algebra.space.degree, space.degree
        comps: Components = {}
        for (p, q), table in ops.items():
            for (u, m, v), img in table.items():
                u, v = tuple(u), tuple(v)
                if len(u) != p or len(v) != q:
                    raise ValueError(f"component {(u, m, v)!r} does not have bidegree ({p}, {q})")
                degs = [adeg[x] for x in u] + [mdeg[m]] + [adeg[x] for x in v]
                for y in img:
                    if mdeg[y] != sum(degs) + p + q - 1:
                        raise ValueError(f"m^M_({p},{q}){(u, m, v)!r} -> {y!r}: expected degree "
                                         f"{sum(degs) + p + q - 1} (operations of arity n have degree n-2)")
                s = parity(sigma_exponent(degs))
                comps[tag(A_TAG, u) + (("m", m),) + tag(A_TAG, v)] = {("m", y): s * c for y, c in img.items()}
        return cls(algebra, space, comps, name)

    @cached_property
    def letter_degree(self) -> dict:
        d = {(A_TAG, k): v for k, v in self.algebra.sdeg.items()}
        d.update({("m", k): v for k, v in self.sdeg_m.items()})
        return d

    def star_letter(self, x) -> dict:
        t, k = x
        sp = self.algebra.space if t == A_TAG else self.space
        return {(t, y): c for y, c in sp.star_basis(k).items()}

    @cached_property
    def all_components(self) -> Components:
        c = dict(algebra_components(self.algebra))
        c.update(self.components)
        return c

    def module_components(self) -> dict:
        """{(p, q): {(u, m, v): {m': c}}} with untagged keys (suspended)."""
        out: dict = {}
        for w, img in self.components.items():
            i = next(j for j, x in enumerate(w) if x[0] == "m")
            u = tuple(x[1] for x in w[:i])
            v = tuple(x[1] for x in w[i + 1:])
            out.setdefault((len(u), len(v)), {})[(u, w[i][1], v)] = {y[1]: c for y, c in img.items()}
        return out

    def with_involution(self, involution) -> AInftyBimodule:
        return AInftyBimodule(self.algebra, self.space.with_involution(involution), self.components, self.name)

    def bar_words(self, L: int) -> list:
        """Words u·m·v with |u|+|v| ≤ L, ordered by weight then lexicographically."""
        al = tag(A_TAG, self.algebra.space.keys)
        ml = tag("m", self.space.keys)
        out = []
        for n in range(L + 1):
            for w in product(al, repeat=n):
                for i in range(n + 1):
                    for m in ml:
                        out.append(w[:i] + (m,) + w[i:])
        out.sort(key=lambda w: (len(w), [self._order(x) for x in w]))
        return out

    def _order(self, x):
        t, k = x
        if t == A_TAG:
            return (0, self.algebra.space.index[k])
        return (1, self.space.index[k])

    def differential(self, word: tuple) -> dict:
        return apply_coderivation(word, self.all_components, -1, self.letter_degree, None, self.field.one)

    def word_star(self, word: tuple) -> dict:
        return word_involution(word, self.letter_degree, self.star_letter)


def diagonal_bimodule(a: AInftyStructure) -> AInftyBimodule:
    """M = A with b^M_{p,q} = b_{p+1+q}, † = ★."""
    comps: Components = {}
    for w, img in a.bops.items():
        for i in range(len(w)):
            key = tag(A_TAG, w[:i]) + (("m", w[i]),) + tag(A_TAG, w[i + 1:])
            comps[key] = {("m", y): c for y, c in img.items()}
    return AInftyBimodule(a, a.space, comps, name=a.name, check_degrees=False)


def induced_bimodule(f: AInftyMorphism, L: int) -> AInftyBimodule:
    """A2 as an A1-bimodule through the coalgebra map Bar(A1) -> Bar(A2)."""
    A1, A2 = f.source, f.target
    letters = list(A1.space.keys)
    b2 = A2.bops
    ar2 = set(arities(b2))
    comps: Components = {}
    for p in range(L + 1):
        for q in range(L + 1 - p):
            for u in product(letters, repeat=p):
                Fu = f.coalgebra_map(u)
                if not Fu:
                    continue
                for v in product(letters, repeat=q):
                    Fv = f.coalgebra_map(v)
                    if not Fv:
                        continue
                    for m in A2.space.keys:
                        img: dict = {}
                        for uu, cu in Fu.items():
                            for vv, cv in Fv.items():
                                if len(uu) + 1 + len(vv) not in ar2:
                                    continue
                                out = b2.get(uu + (m,) + vv)
                                if out:
                                    axpy(img, cu * cv, out)
                        if img:
                            key = tag(A_TAG, u) + (("m", m),) + tag(A_TAG, v)
                            comps[key] = {("m", y): c for y, c in img.items()}
    return AInftyBimodule(A1, A2.space, comps, name=f"{A2.name}|{A1.name}", check_degrees=False)


# --- checks -----------------------------------------------------------------

def bar_bicomodule(M: AInftyBimodule, L: int) -> Bicomodule:
    """Bar(A) ⊗ SM ⊗ Bar(A) at weight ≤ L as an involutive bicomodule over T≤L(SA)."""
    C = M.algebra.coalgebra(L)
    words = M.bar_words(L)
    deg = M.letter_degree
    basis = [(w, word_degree(w, deg)) for w in words]
    inv = {}
    for w in words:
        img = M.word_star(w)
        if img != {w: 1}:
            inv[w] = img
    space = GradedSpace(basis, inv, M.field, name=f"Bar({M.name})", check=False)
    one = M.field.one

    def split(w):
        i = next(j for j, x in enumerate(w) if x[0] == "m")
        return i

    def left(w):
        i = split(w)
        return {(tuple(x[1] for x in w[:j]), w[j:]): one for j in range(i + 1)}

    def right(w):
        i = split(w)
        return {(w[:j], tuple(x[1] for x in w[j:])): one for j in range(i + 1, len(w) + 1)}

    return Bicomodule(C, space, left, right)


@dataclass
class BimoduleReport:
    square_zero: bool
    coderivation: bool
    bicomodule: DiagramReport
    involution: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.square_zero and self.coderivation and self.bicomodule.ok and self.involution

    def __bool__(self):
        return self.ok


def bimodule_check(M: AInftyBimodule, L: int) -> BimoduleReport:
    """Square-zero, bicomodule coderivation, bicomodule axioms, involution compatibility."""
    words = M.bar_words(L)
    deg = M.letter_degree
    adeg = {(A_TAG, k): v for k, v in M.algebra.sdeg.items()}
    one = M.field.one
    witnesses = {}
    sq = co = inv = True
    bar_a = algebra_components(M.algebra)
    for w in words:
        Dw = M.differential(w)
        if sq:
            r = linear_extend(M.differential, Dw)
            if r:
                sq = False
                witnesses["square_zero"] = w
        if co:
            # Δ^L ∘ D == (b ⊗ Id + Id ⊗ D) ∘ Δ^L
            i = next(j for j, x in enumerate(w) if x[0] == "m")
            lhs: dict = {}
            for v, c in Dw.items():
                k = next(j for j, x in enumerate(v) if x[0] == "m")
                for j in range(k + 1):
                    add_term(lhs, (v[:j], v[j:]), c)
            rhs: dict = {}
            for j in range(i + 1):
                x, y = w[:j], w[j:]
                for xx, c in apply_coderivation(x, bar_a, -1, adeg, None, one).items():
                    add_term(rhs, (xx, y), c)
                s = parity(word_degree(x, deg))
                for yy, c in M.differential(y).items():
                    add_term(rhs, (x, yy), s * c)
            if lhs != rhs:
                co = False
                witnesses["coderivation"] = w
        if inv:
            a = linear_extend(M.differential, M.word_star(w))
            b = linear_extend(M.word_star, Dw)
            if a != b:
                inv = False
                witnesses["involution"] = w
    diag = bicomodule_check(bar_bicomodule(M, L))
    return BimoduleReport(sq, co, diag, inv, witnesses)


# --- Hom complexes ----------------------------------------------------------

class HomComplex:
    """Component families from input words to target module letters.

    ``inputs`` are the tagged source words (weight ≤ L); ``src_diff`` is the
    differential on them; ``target`` is the bimodule receiving the outputs.
    A basis element is a pair (input word, target letter) and the
    differential is d(f) = b^N ∘ f̂ - (-1)^{|f|} f ∘ D_src, where f̂ places
    f inside the surrounding algebra letters.  Inputs beyond the weight cap
    are dropped, which is a quotient of the full complex because neither
    term can lower the weight of the argument.
    """

    def __init__(self, inputs: list, input_degree: Mapping, src_diff: Callable, target: AInftyBimodule,
                 L: int, src_star: Callable, name: str = "Hom", target_tag: str = "m",
                 input_weight: Optional[Callable] = None):
        self.inputs = inputs
        self.L = L
        self.target = target
        self.name = name
        self.field = target.field
        self.src_diff = src_diff
        self.src_star = src_star
        self.target_tag = target_tag
        self._weight = input_weight or (lambda w: sum(1 for x in w if x[0] == A_TAG))
        in_set = set(inputs)
        self.input_degree = dict(input_degree)
        outs = [("m", k) for k in target.space.keys]
        tdeg = target.letter_degree
        basis = []
        for w in inputs:
            dw = self.input_degree[w]
            for y in outs:
                basis.append(((w, y), tdeg[y] - dw))
        self.basis = basis
        self.degree_of = dict(basis)
        self.space = GradedSpace(basis, field=self.field, name=name, check=False)
        # transpose of the source differential: which inputs hit each input word
        self._hits: dict = {}
        for x in inputs:
            for v, c in src_diff(x).items():
                if v in in_set:
                    self._hits.setdefault(v, []).append((x, c))
        # target components indexed by their module letter position
        self._tcomps: dict = {}
        for w, img in target.components.items():
            i = next(j for j, x in enumerate(w) if x[0] == "m")
            self._tcomps.setdefault(w[i], []).append((w[:i], w[i + 1:], img))
        self._in_set = in_set

    @cached_property
    def window(self) -> tuple:
        """Map degrees where truncating the inputs at weight L changes nothing.

        Families on heavier inputs form a subcomplex; it vanishes in map
        degrees above max|y| - (L+1)·s - min|x|, so homology is exact two
        steps above that.
        """
        s = min(self.target.algebra.sdeg.values())
        tmax = max(self.target.letter_degree[("m", k)] for k in self.target.space.keys)
        base = [self.input_degree[w] - self._weight(w) * s for w in self.inputs] or [0]
        top = max(self.degree_of.values(), default=0)
        if s <= 0:
            return (0, -1)
        lo = tmax - (self.L + 1) * s - min(base) + 2
        return (lo, top) if top >= lo else (0, -1)

    def homology(self, relations: Optional[dict] = None) -> dict:
        lo, hi = self.window
        return self.complex(relations).homology_dims(range(lo, hi + 1))

    def d_basis(self, elem) -> dict:
        cache = self.__dict__.setdefault("_d_cache", {})
        out = cache.get(elem)
        if out is None:
            out = cache[elem] = self._d_basis(elem)
        return out

    def _d_basis(self, elem) -> dict:
        w, y = elem
        dphi = self.degree_of[elem]
        out: dict = {}
        tdeg = self.target.letter_degree
        # b^N ∘ f̂
        for u, v, img in self._tcomps.get(y, ()):
            x = u + w + v
            if x not in self._in_set:
                continue
            s = parity(dphi * word_degree(u, tdeg))
            for z, c in img.items():
                add_term(out, (x, z), s * c)
        # - (-1)^{|f|} f ∘ D_src
        s = -parity(dphi)
        for x, c in self._hits.get(w, ()):
            add_term(out, (x, y), s * c)
        return out

    def apply_d(self, family: Mapping) -> dict:
        return linear_extend(self.d_basis, family)

    def complex(self, relations: Optional[dict] = None) -> ChainComplex:
        comps: dict = {}
        for k, d in self.basis:
            comps.setdefault(d, []).append((k, d))
        spaces = {d: GradedSpace(b, field=self.field, name=f"{self.name}^{d}", check=False)
                  for d, b in comps.items()}
        diffs = {}
        for d, sp in spaces.items():
            if d - 1 in spaces:
                diffs[d] = GradedMap(sp, spaces[d - 1], -1, {k: self.d_basis(k) for k in sp.keys}, check=False)
        return ChainComplex(spaces, diffs, None, relations or {}, name=self.name)

    # involutions on families ------------------------------------------------
    def star(self, family: Mapping, convention: str = "conjugate") -> dict:
        """φ* on families: ``literal`` φ(x*), ``conjugate`` (φ(x*))†."""
        out: dict = {}
        for (w, y), c in family.items():
            # φ = (w -> y): φ(x*) picks the coefficient of w in x*
            for x in self._preimages_under_star(w):
                cx = self._star_coeff(x, w)
                if convention == "literal":
                    add_term(out, (x, y), c * cx)
                else:
                    # module letters are starred without the suspension sign
                    cx = cx * parity(sum(1 for z in x if z[0] != A_TAG))
                    for yy, cy in self.target.star_letter(y).items():
                        add_term(out, (x, yy), c * cx * cy)
        return out

    @cached_property
    def _star_table(self):
        table: dict = {}
        for x in self.inputs:
            for w, c in self.src_star(x).items():
                table.setdefault(w, []).append((x, c))
        return table

    def _preimages_under_star(self, w):
        return [x for x, _ in self._star_table.get(w, ())]

    def _star_coeff(self, x, w):
        for xx, c in self._star_table.get(w, ()):
            if xx == x:
                return c
        return 0

    def involution_relations(self, convention: str = "conjugate") -> dict:
        rel: dict = {}
        for k, d in self.basis:
            v = {k: self.field.one}
            axpy(v, -1, self.star({k: self.field.one}, convention))
            if v:
                rel.setdefault(d, []).append(v)
        return rel

    def star_commutes_with_d(self, convention: str = "conjugate"):
        """First basis family where d(φ*) != (dφ)*, else None."""
        for k, _ in self.basis:
            one = {k: self.field.one}
            if self.apply_d(self.star(one, convention)) != self.star(self.apply_d(one), convention):
                return k
        return None


def _words_with_degree(words, deg):
    return {w: word_degree(w, deg) for w in words}


def hom_complex(M: AInftyBimodule, N: AInftyBimodule, L: int) -> HomComplex:
    """Hom between two bimodules over the same algebra, as component families."""
    if M.algebra is not N.algebra and M.algebra.space.basis != N.algebra.space.basis:
        raise ValueError("bimodules over different algebras")
    words = M.bar_words(L)
    return HomComplex(words, _words_with_degree(words, M.letter_degree), M.differential, N, L,
                      M.word_star, name=f"Hom({M.name},{N.name})")


def identity_family(M: AInftyBimodule) -> dict:
    one = M.field.one
    return {((("m", k),), ("m", k)): one for k in M.space.keys}


def family_from_linear(M: AInftyBimodule, N: AInftyBimodule, f: Mapping) -> dict:
    """Strict morphism: only the (0,0) component, given as {m: {n: c}}."""
    out = {}
    for m, img in f.items():
        for n, c in img.items():
            if c:
                out[((("m", m),), ("m", n))] = N.field(c)
    return out


def _family_apply_hat(family: Mapping, word: tuple, deg: Mapping, fdeg: int) -> dict:
    """f̂(word): every window around the module letter replaced by f, Koszul signed."""
    i = next(j for j, x in enumerate(word) if x[0] == "m")
    out: dict = {}
    by_input: dict = {}
    for (w, y), c in family.items():
        by_input.setdefault(w, []).append((y, c))
    pre = 0
    for s in range(i + 1):
        sign = parity(fdeg * pre)
        for e in range(i + 1, len(word) + 1):
            for y, c in by_input.get(word[s:e], ()):
                add_term(out, word[:s] + (y,) + word[e:], sign * c)
        pre += deg[word[s]]
    return out


def hom_compose(u: Mapping, v: Mapping, M: AInftyBimodule, N: AInftyBimodule, P: AInftyBimodule,
                L: int, udeg: int = 0, vdeg: int = 0) -> dict:
    """Components of u ∘ v for v: M -> N, u: N -> P (bicomodule-map composition)."""
    out: dict = {}
    ucomp: dict = {}
    for (w, y), c in u.items():
        ucomp.setdefault(w, []).append((y, c))
    for x in M.bar_words(L):
        for z, c in _family_apply_hat(v, x, M.letter_degree, vdeg).items():
            for y, cu in ucomp.get(z, ()):
                add_term(out, (x, y), c * cu)
    return out


def hom_involution(phi: Mapping, H: HomComplex, convention: str = "literal") -> dict:
    return H.star(phi, convention)


def push_forward(f: Mapping, phi: Mapping, H_src: HomComplex, N: AInftyBimodule, P: AInftyBimodule) -> dict:
    """f_* φ = f ∘ φ for a strict (0,0) morphism f: N -> P given as {n: {p: c}}."""
    out: dict = {}
    for (w, y), c in phi.items():
        for z, cz in f.get(y[1], {}).items():
            add_term(out, (w, ("m", z)), c * cz)
    return out


def homotopy_check(H: HomComplex, f: Mapping, g: Mapping, h: Mapping) -> bool:
    """f - g = b^N ∘ h + h ∘ b^M, i.e. f - g = d(h) for h of degree +1."""
    lhs = dict(f)
    axpy(lhs, -1, g)
    return lhs == H.apply_d(h)


@dataclass
class HomotopySearch:
    found: bool
    homotopy: Optional[dict]
    window: int
    note: str = ""

    def __bool__(self):
        return self.found


def find_homotopy(H: HomComplex, f: Mapping, g: Mapping, degree: int) -> HomotopySearch:
    """Solve d(h) = f - g over Hom^{degree+1}; a negative answer holds only in the window."""
    target = dict(f)
    axpy(target, -1, g)
    cx = H.complex()
    src = cx.components.get(degree + 1)
    if src is None:
        return HomotopySearch(not target, {} if not target else None, H.L)
    tgt = cx.components.get(degree)
    idx = tgt.index if tgt is not None else {}
    cols = []
    for k in src.keys:
        cols.append({idx[t]: c for t, c in H.d_basis(k).items()})
    sol = solve(cols, {idx[t]: c for t, c in target.items()}, H.field.one)
    if sol is None:
        return HomotopySearch(False, None, H.L, f"no homotopy with inputs of weight ≤ {H.L}")
    return HomotopySearch(True, {src.keys[j]: c for j, c in sol.items()}, H.L)


def are_homotopic(H: HomComplex, f: Mapping, g: Mapping, degree: int = 0) -> bool:
    return find_homotopy(H, f, g, degree).found


def are_homotopy_equivalent(u: Mapping, v: Mapping, M: AInftyBimodule, N: AInftyBimodule, L: int) -> bool:
    """u: M -> N, v: N -> M with u∘v ~ Id_N and v∘u ~ Id_M inside the window."""
    uv = hom_compose(u, v, N, M, N, L)
    vu = hom_compose(v, u, M, N, M, L)
    return (are_homotopic(hom_complex(N, N, L), uv, identity_family(N))
            and are_homotopic(hom_complex(M, M, L), vu, identity_family(M)))


def is_morphism(H: HomComplex, f: Mapping) -> bool:
    return not H.apply_d(f)


# --- shifts and cones -------------------------------------------------------

def shift_bimodule(M: AInftyBimodule, name: Optional[str] = None, tag_suffix: str = "'") -> AInftyBimodule:
    """M[1]: degrees raised by one; b_{p,q}(su, sm', sv) = -(-1)^{|su|} b_{p,q}(su, sm, sv)'."""
    ren = {k: f"{k}{tag_suffix}" for k in M.space.keys}
    inv = {ren[k]: {ren[kk]: c for kk, c in M.space.star_basis(k).items()} for k in M.space.keys}
    space = GradedSpace([(ren[k], d + 1) for k, d in M.space.basis], inv, M.field, name or f"{M.name}[1]")
    comps: Components = {}
    for w, img in M.components.items():
        i = next(j for j, x in enumerate(w) if x[0] == "m")
        s = -parity(word_degree(w[:i], M.letter_degree))
        key = w[:i] + (("m", ren[w[i][1]]),) + w[i + 1:]
        comps[key] = {("m", ren[y[1]]): s * c for y, c in img.items()}
    return AInftyBimodule(M.algebra, space, comps, name or f"{M.name}[1]")


def direct_sum(parts: list, extra: Optional[Components] = None, name: str = "⊕",
               involution: Optional[Mapping] = None) -> AInftyBimodule:
    A = parts[0].algebra
    basis, inv, comps = [], {}, {}
    for P in parts:
        basis.extend(P.space.basis)
        for k in P.space.keys:
            img = P.space.star_basis(k)
            if img != {k: A.field.one}:
                inv[k] = img
        comps.update(P.components)
    if involution is not None:
        inv = dict(involution)
    if extra:
        for w, img in extra.items():
            acc = comps.setdefault(w, {})
            for y, c in img.items():
                add_term(acc, y, c)
    space = GradedSpace(basis, inv, A.field, name)
    return AInftyBimodule(A, space, comps, name)


def cone_of_identity(M: AInftyBimodule, name: Optional[str] = None) -> AInftyBimodule:
    """M ⊕ M[1] with the identity M[1] -> M added to b_{0,0}; contractible."""
    Ms = shift_bimodule(M)
    extra = {(("m", f"{k}'"),): {("m", k): 1} for k in M.space.keys}
    return direct_sum([M, Ms], extra, name or f"Cone({M.name})")


# --- the involutive tensor product -----------------------------------------

def _retag(word, old, new):
    return tuple((new, k) if t == old else (t, k) for t, k in word)


class CyclicBar:
    """Cyclic words for the Hochschild and box-tensor complexes.

    A word starts with the first module letter; module letters are tagged
    ``"m"`` and ``"n"``.  The differential applies every component to every
    cyclic window; windows that wrap past the end are first rotated to the
    front with the Koszul sign of the rotation.
    """

    def __init__(self, algebra: AInftyStructure, modules: list, tags: list):
        self.algebra = algebra
        self.field = algebra.field
        self.modules = modules
        self.tags = tags
        deg = {(A_TAG, k): v for k, v in algebra.sdeg.items()}
        comps = dict(algebra_components(algebra))
        for M, t in zip(modules, tags):
            for k, v in M.sdeg_m.items():
                deg[(t, k)] = v
            for w, img in M.components.items():
                comps[_retag(w, "m", t)] = {(t, y[1]): c for y, c in img.items()}
        self.deg = deg
        self.comps = comps
        self.ar = arities(comps)

    def star_letter(self, x, letters: bool = True) -> dict:
        t, k = x
        if t == A_TAG:
            if not letters:
                return {x: self.field.one}
            sp = self.algebra.space
        else:
            sp = self.modules[self.tags.index(t)].space
        return {(t, y): c for y, c in sp.star_basis(k).items()}

    def d(self, word: tuple) -> dict:
        one = self.field.one
        out = apply_coderivation(word, self.comps, -1, self.deg, self.ar, one)
        n = len(word)
        for j in range(1, n):
            head, tail = word[:j], word[j:]
            rot = tail + head
            s = parity(word_degree(tail, self.deg) * word_degree(head, self.deg))
            for k in self.ar:
                if k <= n - j:
                    continue
                if k > n:
                    break
                img = self.comps.get(rot[:k])
                if img:
                    rest = rot[k:]
                    for y, c in img.items():
                        add_term(out, (y,) + rest, s * c * one)
        return out

    def d_linear(self, word: tuple) -> dict:
        """Non-cyclic differential on m·u·n: only b^M_{0,q}, b^N_{p,0} and the bar part act."""
        return apply_coderivation(word, self.comps, -1, self.deg, self.ar, self.field.one)

    def reversal(self, word: tuple) -> dict:
        """Reverse the cyclic word with stars, keeping the first module letter in front.

        Only algebra letters carry the suspension sign of the word
        involution; module letters are starred by their own involution.
        """
        out: dict = {}
        mods = sum(1 for x in word if x[0] != A_TAG)
        for w, c in word_involution(word, self.deg, self.star_letter).items():
            head, tail = w[:-1], w[-1:]
            s = parity(word_degree(tail, self.deg) * word_degree(head, self.deg) + mods)
            add_term(out, tail + head, s * c)
        return out

    def letterwise(self, word: tuple) -> dict:
        out: dict = {(): self.field.one}
        for x in word:
            img = self.star_letter(x)
            nxt: dict = {}
            for w, c in out.items():
                for y, cy in img.items():
                    add_term(nxt, w + (y,), c * cy)
            out = nxt
        return out

    def literal(self, word: tuple) -> dict:
        """Star on the first module letter only (the class of x*)."""
        first = self.star_letter(word[0])
        return {(y,) + word[1:]: c for y, c in first.items()}

    def literal_other(self, word: tuple) -> dict:
        """Star on the second module letter only."""
        t = self.tags[1]
        i = next(j for j, x in enumerate(word) if x[0] == t)
        return {word[:i] + (y,) + word[i + 1:]: c for y, c in self.star_letter(word[i]).items()}


def _cyclic_words(alg_letters, module_letter_lists, L):
    """Words m u [n v] with total algebra weight ≤ L."""
    out = []
    if len(module_letter_lists) == 1:
        for m in module_letter_lists[0]:
            for w in words_upto(alg_letters, L):
                out.append((m,) + w)
    else:
        Ml, Nl = module_letter_lists
        for total in range(L + 1):
            for p in range(total + 1):
                for u in product(alg_letters, repeat=p):
                    for v in product(alg_letters, repeat=total - p):
                        for m in Ml:
                            for n in Nl:
                                out.append((m,) + u + (n,) + v)
    return out


@dataclass
class CyclicComplex:
    """A cyclic bar complex with its involution data; degrees shifted by the module count."""

    bar: CyclicBar
    words: list
    L: int
    shift: int
    complex: ChainComplex
    mode: str
    involution: Optional[Callable] = None
    d: Optional[Callable] = None

    def relations(self, star: Callable) -> dict:
        rel: dict = {}
        one = self.bar.field.one
        for w in self.words:
            v = {w: one}
            axpy(v, -1, star(w))
            if v:
                rel.setdefault(word_degree(w, self.bar.deg) - self.shift, []).append(v)
        return rel

    def with_relations(self, star: Callable, name: str) -> ChainComplex:
        c = self.complex
        return ChainComplex(c.components, c.differentials, c.certified, self.relations(star), name=name)

    def commutes(self, star: Callable):
        """First word where d∘star != star∘d, else None."""
        for w in self.words:
            if linear_extend(self.d, star(w)) != linear_extend(star, self.d(w)):
                return w
        return None


def build_cyclic_complex(bar: CyclicBar, words: list, L: int, shift: int, name: str,
                         linear: bool = False) -> CyclicComplex:
    deg = bar.deg
    d = bar.d_linear if linear else bar.d
    by_deg: dict = {}
    for w in words:
        by_deg.setdefault(word_degree(w, deg) - shift, []).append(w)
    spaces = {n: GradedSpace([(w, n) for w in ws], field=bar.field, name=f"{name}_{n}", check=False)
              for n, ws in by_deg.items()}
    diffs = {}
    for n, sp in spaces.items():
        if n - 1 in spaces:
            diffs[n] = GradedMap(sp, spaces[n - 1], -1, {w: d(w) for w in sp.keys}, check=False)
        else:
            for w in sp.keys:
                if d(w):
                    raise StructuralError(f"{name}: differential leaves the truncation at {w!r}")
    cx = CyclicComplex(bar, words, L, shift, ChainComplex(spaces, diffs, None, {}, name=name), "none")
    images = {w: m.columns.get(w, {}) for m in diffs.values() for w in m.source.keys}

    def cached(w):
        img = images.get(w)
        return img if img is not None else d(w)

    cx.d = cached
    return cx


@dataclass
class BoxTensor:
    """M ⊠̃ N: words m·u·n·v (weight ≤ L) modulo m†⊗u⊗n⊗v - m⊗u⊗n★⊗v."""

    M: AInftyBimodule
    N: AInftyBimodule
    L: int
    cyclic: CyclicComplex
    relation_mode: str
    quotient_dim: int
    full_dim: int

    @property
    def chain_complex(self) -> ChainComplex:
        return self.cyclic.with_relations(self.relation_star, f"{self.M.name}⊠̃{self.N.name}")

    @property
    def unquotiented(self) -> ChainComplex:
        return self.cyclic.complex

    def relation_star(self, w):
        bar = self.cyclic.bar
        if self.relation_mode == "literal":
            # m†⊗u⊗n⊗v ~ m⊗u⊗n★⊗v  <=>  x ~ (star on both module letters)(x)
            out: dict = {}
            for y, c in bar.literal(w).items():
                axpy(out, c, bar.literal_other(y))
            return out
        if self.relation_mode == "letterwise":
            return bar.letterwise(w)
        if self.relation_mode == "reversal":
            return bar.reversal(w)
        raise ValueError(f"unknown relation mode {self.relation_mode!r}")

    def descent_failure(self):
        return self.chain_complex.descent_failure()

    @property
    def window(self) -> tuple:
        """Degrees where the weight truncation (a subcomplex) computes the full homology."""
        A = self.M.algebra
        s = min(A.sdeg.values())
        if s <= 0:
            return (0, -1)
        lo = min(d for _, d in self.M.space.basis) + min(d for _, d in self.N.space.basis)
        hi = (self.L + 1) * s + lo - 2
        if self.cyclic.mode == "cyclic":
            lo += min(d for _, d in A.space.basis)
            hi = (self.L + 1) * s + lo - 2
        return (lo, hi) if hi >= lo else (0, -1)

    def homology(self, degrees=None) -> dict:
        if degrees is None:
            degrees = range(self.window[0], self.window[1] + 1)
        return self.chain_complex.homology_dims(degrees)


def boxtimes(M: AInftyBimodule, N: AInftyBimodule, L: int, relation: str = "literal",
             check_descent: bool = False, shape: str = "linear") -> BoxTensor:
    """The involutive tensor product, truncated at algebra weight L.

    ``shape="linear"`` is M ⊗ T(SA) ⊗ N with the bar differential and the
    actions b^M_{0,q}, b^N_{p,0}; ``shape="cyclic"`` closes the words up
    over A^e (words m·u·n·v), which is what the small Hochschild model uses.
    """
    if M.algebra is not N.algebra and M.algebra.space.basis != N.algebra.space.basis:
        raise ValueError("bimodules over different algebras")
    bar = CyclicBar(M.algebra, [M, N], ["m", "n"])
    al = tag(A_TAG, M.algebra.space.keys)
    Ml, Nl = tag("m", M.space.keys), tag("n", N.space.keys)
    if shape == "cyclic":
        words = _cyclic_words(al, [Ml, Nl], L)
    elif shape == "linear":
        if relation == "reversal":
            raise ValueError("the reversal relation needs the cyclic shape")
        words = [(m,) + u + (n,) for u in words_upto(al, L) for m in Ml for n in Nl]
    else:
        raise ValueError(f"unknown shape {shape!r}")
    cyc = build_cyclic_complex(bar, words, L, 2, f"{M.name}⊠{N.name}", linear=shape == "linear")
    cyc.mode = shape
    bt = BoxTensor(M, N, L, cyc, relation, 0, len(words))
    rel = cyc.relations(bt.relation_star)
    ech_dims = 0
    for d, vs in rel.items():
        sp = cyc.complex.components[d]
        ech = Echelon()
        for v in vs:
            ech.add({sp.index[k]: c for k, c in v.items()})
        ech_dims += len(ech)
    bt.quotient_dim = len(words) - ech_dims
    if check_descent:
        bad = bt.descent_failure()
        if bad is not None:
            raise StructuralError(f"differential does not descend to {M.name}⊠̃{N.name} "
                                  f"(degree {bad[0]}, relation #{bad[1]})", witness=bad)
    return bt


def tensor_functor_map(f: Mapping, P: AInftyBimodule, Q: AInftyBimodule, M: AInftyBimodule, L: int,
                       relation: str = "literal") -> GradedMap:
    """f ⊠̃ Id_M for a strict involutive morphism f: P -> Q given as {p: {q: c}}.

    Returned on the unquotiented cyclic spaces; it maps the relation span of
    P ⊠̃ M into that of Q ⊠̃ M.
    """
    for p in P.space.keys:
        a = linear_extend(lambda k: f.get(k, {}), P.space.star_basis(p))
        b = Q.space.star(f.get(p, {}))
        if a != b:
            raise ValueError(f"f is not involutive at {p!r}")
    bp = boxtimes(P, M, L, relation)
    bq = boxtimes(Q, M, L, relation)
    src = _total_space(bp.cyclic)
    tgt = _total_space(bq.cyclic)
    cols = {}
    for w in bp.cyclic.words:
        img = {(("m", y),) + w[1:]: c for y, c in f.get(w[0][1], {}).items()}
        if img:
            cols[w] = img
    return GradedMap(src, tgt, 0, cols, check=False)


def _total_space(cyc: CyclicComplex) -> GradedSpace:
    basis = [(w, word_degree(w, cyc.bar.deg) - cyc.shift) for w in cyc.words]
    return GradedSpace(basis, field=cyc.bar.field, name=cyc.complex.name, check=False)


# --- Hom-tensor adjunction --------------------------------------------------

@dataclass
class AdjunctionReport:
    dim_left: int
    dim_right: int
    round_trip_left: bool
    round_trip_right: bool
    preserves_involution: bool
    literal_right_dim: int

    @property
    def ok(self) -> bool:
        return (self.dim_left == self.dim_right and self.round_trip_left and self.round_trip_right
                and self.preserves_involution)

    def __bool__(self):
        return self.ok


def _subspace_basis(vectors: list, index: dict, one):
    """Reduced basis (as dicts over keys) of the span of the given vectors."""
    ech = Echelon()
    for v in vectors:
        ech.add({index[k]: c for k, c in v.items()})
    return ech


def _solution_space(rows: list, n: int, one) -> list:
    """Basis of {x : <row, x> = 0 for every row}, rows and vectors keyed by 0..n-1."""
    ech = Echelon()
    for r in rows:
        ech.add(r)
    rref: dict = {}
    for p in sorted(ech.rows, reverse=True):
        r = dict(ech.rows[p][0])
        for q in [q for q in r if q != p and q in rref]:
            c = r[q]
            for kk, cc in rref[q].items():
                add_term(r, kk, -c * cc)
        rref[p] = r
    basis = []
    for j in range(n):
        if j in rref:
            continue
        v = {j: one}
        for p, r in rref.items():
            c = r.get(j)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def adjunction_check(M: AInftyBimodule, N: AInftyBimodule, Lmod: AInftyBimodule, L: int) -> AdjunctionReport:
    """Currying τ: Hom(M ⊠̃ N, L) -> Hom_inv(M ⊗ T, Hom(N, L)) as explicit matrices.

    Left: maps f on M ⊗ T(SA) ⊗ N (weight ≤ L) into L that vanish on
    m†⊗w⊗n - m⊗w⊗n★, coordinates (l, (m, w, n)).  Right: maps g from M ⊗ T
    into Hom(N, L) with g[m†⊗w] = g[m⊗w] ∘ ★_N, coordinates ((m, w), (n, l)).
    τ_f[m⊗w](n) = f(m⊗w⊗n).  Involutions: f ↦ (x ↦ f(x*)) with the class of
    (m⊗w⊗n)* = m†⊗w⊗n, and g ↦ (x ↦ g[x] ∘ ★_N).
    """
    F = M.field
    one = F.one
    Tw = list(words_upto(list(M.algebra.space.keys), L))
    Mk, Nk, Lk = list(M.space.keys), list(N.space.keys), list(Lmod.space.keys)
    left = [(l, (m, w, n)) for l in Lk for m in Mk for w in Tw for n in Nk]
    right = [((m, w), (n, l)) for m in Mk for w in Tw for n in Nk for l in Lk]
    li = {c: i for i, c in enumerate(left)}
    ri = {c: i for i, c in enumerate(right)}
    tau = {li[(l, (m, w, n))]: ri[((m, w), (n, l))] for (l, (m, w, n)) in left}
    tau_inv = {j: i for i, j in tau.items()}

    def move(v, table):
        return {table[i]: c for i, c in v.items()}

    rows_left = []
    for l in Lk:
        for m in Mk:
            for w in Tw:
                for n in Nk:
                    row: dict = {}
                    for mm, c in M.space.star_basis(m).items():
                        add_term(row, li[(l, (mm, w, n))], c)
                    for nn, c in N.space.star_basis(n).items():
                        add_term(row, li[(l, (m, w, nn))], -c)
                    if row:
                        rows_left.append(row)
    rows_right = []
    for m in Mk:
        for w in Tw:
            for n in Nk:
                for l in Lk:
                    # g[m†⊗w](n) - g[m⊗w](n★)
                    row = {}
                    for mm, c in M.space.star_basis(m).items():
                        add_term(row, ri[((mm, w), (n, l))], c)
                    for nn, c in N.space.star_basis(n).items():
                        add_term(row, ri[((m, w), (nn, l))], -c)
                    if row:
                        rows_right.append(row)

    def satisfies(v, rows):
        return all(sum((v.get(k, 0) * c for k, c in r.items()), F.zero) == 0 for r in rows)

    V1 = _solution_space(rows_left, len(left), one)
    V2 = _solution_space(rows_right, len(right), one)
    rt_left = all(satisfies(move(v, tau), rows_right) and move(move(v, tau), tau_inv) == v for v in V1)
    rt_right = all(satisfies(move(v, tau_inv), rows_left) and move(move(v, tau_inv), tau) == v for v in V2)

    def star_left(v):
        out: dict = {}
        for i, c in v.items():
            l, (m, w, n) = left[i]
            for mm in Mk:
                cm = M.space.star_basis(mm).get(m)
                if cm:
                    add_term(out, li[(l, (mm, w, n))], c * cm)
        return out

    def star_right(v):
        out: dict = {}
        for i, c in v.items():
            (m, w), (n, l) = right[i]
            for nn in Nk:
                cn = N.space.star_basis(nn).get(n)
                if cn:
                    add_term(out, ri[((m, w), (nn, l))], c * cn)
        return out

    pres = all(move(star_left(v), tau) == star_right(move(v, tau)) for v in V1)
    # reading the target as maps out of (M⊗T)/(m ~ m†) with the identity involution instead
    Mq = Echelon()
    for m in Mk:
        r = dict(M.space.star_basis(m))
        add_term(r, m, -one)
        Mq.add({M.space.index[k]: c for k, c in r.items()})
    literal_dim = (len(Mk) - len(Mq)) * len(Tw) * len(Nk) * len(Lk)
    return AdjunctionReport(len(V1), len(V2), rt_left, rt_right, pres, literal_dim)
