"""Truncated cotensor coalgebras on a suspended space.

Words are tuples of letters (basis keys of the generator space).  All
operations here are "letter-generic": they only need each letter's degree,
each letter's image under the involution, and sparse component tables
mapping input words to output letters.  The same code therefore drives the
bar coalgebra of an algebra and the two-sided bar bicomodule of a bimodule,
where the module letter is simply one more kind of letter.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, Hashable, Iterable, Mapping, Optional

from .linalg import GradedMap, GradedSpace, add_term, axpy, linear_extend

Word = tuple
Components = Dict[tuple, dict]  # input word -> {output letter: coeff}


def parity(n: int) -> int:
    return -1 if n % 2 else 1


def word_degree(word: Iterable, deg: Mapping) -> int:
    return sum(deg[x] for x in word)


def reversal_exponent(degs: list[int]) -> int:
    """Exponent of the sign attached to reversing a word with these letter degrees.

    Koszul sign of the reversal permutation plus one per letter; this is the
    convention under which the bar differential of an algebra with an
    anti-involution commutes with word reversal.
    """
    e = len(degs)
    run = 0
    for d in degs:
        e += d * run
        run += d
    return e


def word_involution(word: Word, deg: Mapping, star: Callable[[Hashable], Mapping]) -> dict:
    """(x1 ... xn)* = ± xn* ... x1*, as a formal sum of words."""
    sign = parity(reversal_exponent([deg[x] for x in word]))
    out: dict = {(): sign}
    for x in reversed(word):
        img = star(x)
        nxt: dict = {}
        for w, c in out.items():
            for y, cy in img.items():
                add_term(nxt, w + (y,), c * cy)
        out = nxt
    return out


def coproduct(word: Word) -> dict:
    """Deconcatenation: sum over all splittings, coefficient +1."""
    return {(word[:i], word[i:]): 1 for i in range(len(word) + 1)}


def arities(comps: Components) -> list[int]:
    return sorted({len(k) for k in comps})


def apply_coderivation(word: Word, comps: Components, op_degree: int, deg: Mapping,
                       ar: Optional[list[int]] = None, one=1) -> dict:
    """Coderivation extension of the components on a single word.

    Each window x_i..x_{i+k-1} matching a component is replaced by the
    component's output, with sign (-1)^{op_degree * (|x_1|+...+|x_{i-1}|)}.
    """
    if ar is None:
        ar = arities(comps)
    out: dict = {}
    n = len(word)
    prefix_deg = 0
    for i in range(n):
        sign = parity(op_degree * prefix_deg)
        for k in ar:
            if i + k > n:
                break
            img = comps.get(word[i:i + k])
            if img:
                head, tail = word[:i], word[i + k:]
                for y, c in img.items():
                    add_term(out, head + (y,) + tail, sign * c * one)
        prefix_deg += deg[word[i]]
    return out


def apply_coalgebra_map(word: Word, comps: Components) -> dict:
    """Coalgebra morphism from components f_n (degree 0): sum over chunkings."""
    ar = arities(comps)

    @lru_cache(maxsize=None)
    def rec(start: int):
        if start == len(word):
            return {(): 1}
        out: dict = {}
        for k in ar:
            if start + k > len(word):
                break
            img = comps.get(word[start:start + k])
            if not img:
                continue
            rest = rec(start + k)
            for y, c in img.items():
                for w, cw in rest.items():
                    add_term(out, (y,) + w, c * cw)
        return out

    return rec(0)


def all_words(letters: list, max_len: int, min_len: int = 0):
    for n in range(min_len, max_len + 1):
        for w in product(letters, repeat=n):
            yield w


class TensorCoalgebra:
    """Words of length 0..L in the generator basis (already suspended)."""

    def __init__(self, generators: GradedSpace, L: int):
        if L < 0:
            raise ValueError("weight cap must be non-negative")
        self.generators = generators
        self.L = L
        self.field = generators.field
        self.deg = dict(generators.degree)
        self.letters = list(generators.keys)
        self.words = list(all_words(self.letters, L))
        self.space = GradedSpace([(w, word_degree(w, self.deg)) for w in self.words],
                                 field=self.field, name=f"T≤{L}({generators.name})", check=False)

    def star_letter(self, x) -> dict:
        return self.generators.star_basis(x)

    def word_involution(self, word: Word) -> dict:
        return word_involution(word, self.deg, self.star_letter)

    def counit(self, word: Word):
        return self.field.one if len(word) == 0 else self.field.zero

    def coproduct(self, word: Word) -> dict:
        one = self.field.one
        return {k: one * c for k, c in coproduct(word).items()}

    def words_of_weight(self, n: int) -> list:
        return [w for w in self.words if len(w) == n]

    def involution_map(self) -> GradedMap:
        return GradedMap(self.space, self.space, 0, {w: self.word_involution(w) for w in self.words},
                         check=False)

    def tensor_star(self, pair_vec: Mapping) -> dict:
        """(x ⊗ y)* = (-1)^{|x||y|} y* ⊗ x* on formal sums of word pairs."""
        out: dict = {}
        for (x, y), c in pair_vec.items():
            s = parity(word_degree(x, self.deg) * word_degree(y, self.deg))
            for yy, cy in self.word_involution(y).items():
                for xx, cx in self.word_involution(x).items():
                    add_term(out, (yy, xx), s * c * cy * cx)
        return out


@dataclass
class Coderivation:
    """Coderivation given by its corestriction components."""

    coalgebra: TensorCoalgebra
    components: Components
    degree: int = -1

    def __post_init__(self):
        deg = self.coalgebra.deg
        for w, img in self.components.items():
            for y in img:
                if deg[y] != word_degree(w, deg) + self.degree:
                    raise ValueError(f"component on {w!r} -> {y!r} is not of degree {self.degree}")

    def __call__(self, vec: Mapping) -> dict:
        C = self.coalgebra
        ar = arities(self.components)
        return linear_extend(
            lambda w: apply_coderivation(w, self.components, self.degree, C.deg, ar, C.field.one), vec)

    def component(self, n: int) -> GradedMap:
        C = self.coalgebra
        src = GradedSpace([(w, word_degree(w, C.deg)) for w in C.words_of_weight(n)],
                          field=C.field, name=f"SA^{n}", check=False)
        cols = {w: dict(img) for w, img in self.components.items() if len(w) == n}
        return GradedMap(src, C.generators, self.degree, cols, check=False)

    def as_map(self) -> GradedMap:
        C = self.coalgebra
        return GradedMap(C.space, C.space, self.degree, {w: self({w: C.field.one}) for w in C.words},
                         check=False)


def extend_coderivation(components: Components, coalgebra: TensorCoalgebra, degree: int = -1) -> GradedMap:
    """Matrix of the coderivation on the weight ≤ L coalgebra."""
    return Coderivation(coalgebra, components, degree).as_map()


def _tensor_apply_words(Lmap: GradedMap, pair_vec: Mapping, deg: Mapping, left: bool) -> dict:
    out: dict = {}
    for (x, y), c in pair_vec.items():
        if left:
            for xx, cx in Lmap.column(x).items():
                add_term(out, (xx, y), c * cx)
        else:
            s = parity(Lmap.degree * word_degree(x, deg))
            for yy, cy in Lmap.column(y).items():
                add_term(out, (x, yy), s * c * cy)
    return out


def co_leibniz_failure(Lmap: GradedMap, C: TensorCoalgebra):
    """First word where Δ∘L != (L⊗Id + Id⊗L)∘Δ (Koszul signs), else None."""
    for w in C.words:
        lhs: dict = {}
        for v, c in Lmap.column(w).items():
            axpy(lhs, c, C.coproduct(v))
        d = C.coproduct(w)
        rhs = _tensor_apply_words(Lmap, d, C.deg, True)
        axpy(rhs, 1, _tensor_apply_words(Lmap, d, C.deg, False))
        if lhs != rhs:
            return w
    return None


def co_leibniz_check(Lmap: GradedMap, C: TensorCoalgebra) -> bool:
    return co_leibniz_failure(Lmap, C) is None


def coderivation_square_components(comps: Components, coalgebra: TensorCoalgebra, degree: int = -1,
                                   max_arity: Optional[int] = None) -> dict[int, Components]:
    """Arity-n components of b∘b: the weight-one part of b(b(w)) for |w| = n."""
    C = coalgebra
    top = C.L if max_arity is None else max_arity
    ar = arities(comps)
    one = C.field.one
    out: dict[int, Components] = {}
    for n in range(1, top + 1):
        table: Components = {}
        for w in C.words_of_weight(n):
            acc: dict = {}
            for v, c in apply_coderivation(w, comps, degree, C.deg, ar, one).items():
                for u, cu in apply_coderivation(v, comps, degree, C.deg, ar, one).items():
                    if len(u) == 1:
                        add_term(acc, u[0], c * cu)
            if acc:
                table[w] = acc
        out[n] = table
    return out


# --- bicomodules ------------------------------------------------------------

@dataclass
class Bicomodule:
    """Involutive bicomodule over a truncated tensor coalgebra.

    ``left(p)`` returns a formal sum of pairs (c, p'), ``right(p)`` of pairs
    (p', c); ``dagger`` is the involution of P on basis keys.
    """

    coalgebra: TensorCoalgebra
    space: GradedSpace
    left: Callable[[Hashable], Mapping]
    right: Callable[[Hashable], Mapping]

    def dagger(self, vec: Mapping) -> dict:
        return self.space.star(vec)


@dataclass
class DiagramReport:
    results: dict
    witnesses: dict

    @property
    def ok(self) -> bool:
        return all(self.results.values())

    def __bool__(self):
        return self.ok


def bicomodule_check(P: Bicomodule) -> DiagramReport:
    """Coassociativity, counit laws, left/right compatibility, involution square."""
    C = P.coalgebra
    deg = C.deg
    pdeg = P.space.degree
    results = {k: True for k in ("left_coassociative", "right_coassociative", "left_counit",
                                 "right_counit", "left_right_compatible", "involution_square")}
    witnesses: dict = {}

    def fail(name, p):
        if results[name]:
            results[name] = False
            witnesses[name] = p

    for p in P.space.keys:
        L = P.left(p)
        R = P.right(p)
        # (Δ ⊗ Id) Δ^L == (Id ⊗ Δ^L) Δ^L
        a: dict = {}
        b: dict = {}
        for (c, q), x in L.items():
            for (c1, c2), y in C.coproduct(c).items():
                add_term(a, (c1, c2, q), x * y)
            for (c2, q2), y in P.left(q).items():
                add_term(b, (c, c2, q2), x * y)
        if a != b:
            fail("left_coassociative", p)
        a, b = {}, {}
        for (q, c), x in R.items():
            for (c1, c2), y in C.coproduct(c).items():
                add_term(a, (q, c1, c2), x * y)
            for (q2, c1), y in P.right(q).items():
                add_term(b, (q2, c1, c), x * y)
        if a != b:
            fail("right_coassociative", p)
        cu = {}
        for (c, q), x in L.items():
            add_term(cu, q, x * C.counit(c))
        if cu != {p: C.field.one}:
            fail("left_counit", p)
        cu = {}
        for (q, c), x in R.items():
            add_term(cu, q, x * C.counit(c))
        if cu != {p: C.field.one}:
            fail("right_counit", p)
        # (Id ⊗ Δ^R) Δ^L == (Δ^L ⊗ Id) Δ^R
        a, b = {}, {}
        for (c, q), x in L.items():
            for (q2, c2), y in P.right(q).items():
                add_term(a, (c, q2, c2), x * y)
        for (q, c), x in R.items():
            for (c1, q2), y in P.left(q).items():
                add_term(b, (c1, q2, c), x * y)
        if a != b:
            fail("left_right_compatible", p)
        # Δ^R ∘ † == (-,-)* ∘ Δ^L with (c ⊗ q)* = ± q† ⊗ c*
        a = {}
        for q, x in P.space.star_basis(p).items():
            axpy(a, x, P.right(q))
        b = {}
        for (c, q), x in L.items():
            s = parity(word_degree(c, deg) * pdeg[q])
            for q2, y in P.space.star_basis(q).items():
                for c2, z in C.word_involution(c).items():
                    add_term(b, (q2, c2), s * x * y * z)
        if a != b:
            fail("involution_square", p)
    return DiagramReport(results, witnesses)


def coalgebra_morphism_failure(f: Callable[[Word], Mapping], C: TensorCoalgebra, D: TensorCoalgebra):
    """First word w with Δ f(w) != (f⊗f) Δ(w) or f(w*) != f(w)*; returns (reason, w)."""
    for w in C.words:
        fw = f(w)
        lhs: dict = {}
        for v, c in fw.items():
            for (x, y), cc in D.coproduct(v).items():
                if len(x) <= D.L and len(y) <= D.L:
                    add_term(lhs, (x, y), c * cc)
        rhs: dict = {}
        for (x, y), c in C.coproduct(w).items():
            fx, fy = f(x), f(y)
            for xx, cx in fx.items():
                for yy, cy in fy.items():
                    add_term(rhs, (xx, yy), c * cx * cy)
        if lhs != rhs:
            return "coproduct", w
        a = linear_extend(f, C.word_involution(w))
        b = linear_extend(D.word_involution, fw)
        if a != b:
            return "involution", w
    return None


def coalgebra_morphism_check(f: Callable[[Word], Mapping], C: TensorCoalgebra, D: TensorCoalgebra) -> bool:
    return coalgebra_morphism_failure(f, C, D) is None
