"""Involutive Hochschild homology and cohomology with certified truncation windows.

Two chain models are available:

``bar``
    the cyclic complex SM ⊗ (SA)^{⊗n}, i.e. M ⊠ Bar(A) collapsed against
    the two-sided bar resolution; homological degree is the total
    suspended degree minus one.
``small``
    M ⊠ A over the diagonal bimodule, cyclic words m·u·a·v; degree is the
    total suspended degree minus two.

The involutive theory is the homology of the coinvariants by an involution
commuting with the differential.  ``letterwise`` stars every letter in
place; ``reversal`` reverses the cyclic word (keeping the module letter in
front) with the word-involution sign.  The letterwise quotient vanishes
for trivial involutions, so it reproduces the ordinary theory there; the
reversal quotient is the one that descends for anti-automorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

from .ainfty import AInftyStructure
from .bimodule import (A_TAG, AInftyBimodule, CyclicBar, HomComplex, _cyclic_words, algebra_components,
                       boxtimes, build_cyclic_complex, diagonal_bimodule, tag, words_upto)
from .field import Mod
from .icoalgebra import apply_coderivation, word_degree, word_involution
from .linalg import ChainComplex, StructuralError, add_term, axpy

MODES = ("letterwise", "reversal")
CHAR_TWO = "characteristic 2"


def _involutive_allowed(a: AInftyStructure, mode: Optional[str]) -> None:
    # coinvariants only compute the invariant part of homology when 2 is a unit
    if mode is not None and a.field.characteristic == 2:
        raise ValueError("involutive dimensions need a field of characteristic other than 2")


@dataclass
class HomologyReport:
    """Ordinary and involutive dimensions per degree inside the certified window.

    ``involutive[mode]`` is None when that involution does not commute with
    the differential (the offending basis element is in ``findings[mode]``)
    or when the field has characteristic 2 (``findings[mode]`` is
    ``CHAR_TWO``).
    """

    ordinary: dict
    involutive: dict
    findings: dict
    window: tuple
    model: str
    L: int

    @property
    def degrees(self) -> list:
        return list(range(self.window[0], self.window[1] + 1))

    def __getitem__(self, n):
        return self.ordinary[n]


def _min_sdeg(a: AInftyStructure) -> int:
    return min(a.sdeg.values())


def certify_window(a: AInftyStructure, M: Optional[AInftyBimodule], L: int, kind: str = "chains",
                   model: str = "bar") -> tuple:
    """Degrees whose truncated (co)homology equals the untruncated one, as (lo, hi).

    Empty windows are returned as (0, -1).  Letters of non-positive
    suspended degree make every degree infinitely generated, so nothing is
    certified then.
    """
    M = M or diagonal_bimodule(a)
    s = _min_sdeg(a)
    if s <= 0 or L <= 0:
        return (0, -1)
    mdeg = [d for _, d in M.space.basis]
    adeg = [d for _, d in a.space.basis]
    if kind == "chains":
        if model == "bar":
            lo = min(mdeg)
            hi = (L + 1) * s + min(mdeg) - 2
        else:
            lo = min(mdeg) + min(adeg)
            hi = (L + 1) * s + min(mdeg) + min(adeg) - 2
    elif kind == "cochains":
        if model == "bar":
            lo = -max(mdeg)
            hi = (L + 1) * s - max(mdeg) - 2
        else:
            lo = min(adeg) - max(mdeg)
            hi = (L + 2) * s - max(mdeg) - 3
    else:
        raise ValueError(f"unknown kind {kind!r}")
    lo = max(lo, 0) if min(adeg) >= 0 and min(mdeg) >= 0 else lo
    return (lo, hi) if hi >= lo else (0, -1)


# --- chain models -----------------------------------------------------------

@dataclass
class HochschildChains:
    algebra: AInftyStructure
    module: AInftyBimodule
    L: int
    model: str
    cyclic: object  # CyclicComplex
    window: tuple

    def star(self, mode: str):
        bar = self.cyclic.bar
        if mode == "letterwise":
            return bar.letterwise
        if mode == "reversal":
            return bar.reversal
        raise ValueError(f"unknown involution mode {mode!r}; expected one of {MODES}")

    def complex(self, involutive: Optional[str] = None) -> ChainComplex:
        if involutive is None:
            c = self.cyclic.complex
            return ChainComplex(c.components, c.differentials, self.window, {}, c.name)
        c = self.cyclic.with_relations(self.star(involutive), f"{self.cyclic.complex.name}/{involutive}")
        c.certified = self.window
        return c

    def descent_witness(self, mode: str):
        """First word where the involution fails to commute with d, else None."""
        cache = self.__dict__.setdefault("_findings", {})
        if mode not in cache:
            cache[mode] = self.cyclic.commutes(self.star(mode))
        return cache[mode]

    def dims(self, involutive: Optional[str] = None) -> dict:
        if involutive is not None:
            _involutive_allowed(self.algebra, involutive)
            w = self.descent_witness(involutive)
            if w is not None:
                raise StructuralError(f"the {involutive} involution does not commute with the "
                                      f"Hochschild differential of {self.algebra.name}", witness=w)
        lo, hi = self.window
        return self.complex(involutive).homology_dims(range(lo, hi + 1))

    def homology(self, modes=MODES) -> HomologyReport:
        self.complex().check_square_zero()
        inv, findings = {}, {}
        for mode in modes:
            if self.algebra.field.characteristic == 2:
                findings[mode], inv[mode] = CHAR_TWO, None
                continue
            w = self.descent_witness(mode)
            findings[mode] = w
            inv[mode] = None if w is not None else self.dims(mode)
        return HomologyReport(self.dims(), inv, findings, self.window, self.model, self.L)


def hochschild_chains(a: AInftyStructure, M: Optional[AInftyBimodule] = None, L: int = 4,
                      model: str = "bar") -> HochschildChains:
    M = M or diagonal_bimodule(a)
    al = tag(A_TAG, a.space.keys)
    if model == "bar":
        bar = CyclicBar(a, [M], ["m"])
        words = _cyclic_words(al, [tag("m", M.space.keys)], L)
        cyc = build_cyclic_complex(bar, words, L, 1, f"C({a.name},{M.name})")
    elif model == "small":
        cyc = boxtimes(M, diagonal_bimodule(a), L, shape="cyclic").cyclic
    else:
        raise ValueError(f"unknown model {model!r}")
    hc = HochschildChains(a, M, L, model, cyc, certify_window(a, M, L, "chains", model))
    hc.complex().check_square_zero()
    return hc


build_chain_complex = hochschild_chains


def hh(a: AInftyStructure, M: Optional[AInftyBimodule] = None, L: int = 4, model: str = "bar",
       modes=MODES) -> HomologyReport:
    """Ordinary and involutive Hochschild homology dimensions inside the certified window."""
    return hochschild_chains(a, M, L, model).homology(modes)


@dataclass
class ModelComparison:
    """Per-variant dims of both models on their shared certified degrees."""

    window: tuple
    bar: dict
    small: dict
    skipped: dict

    @property
    def agree(self) -> bool:
        return all(self.bar[k] == self.small[k] for k in self.bar)

    def first_mismatch(self):
        for k in self.bar:
            for n in sorted(self.bar[k]):
                if self.bar[k][n] != self.small[k][n]:
                    return k, n
        return None


def _compare(b: HomologyReport, s: HomologyReport) -> ModelComparison:
    lo = max(b.window[0], s.window[0])
    hi = min(b.window[1], s.window[1])
    degs = range(lo, hi + 1)
    bar = {"ordinary": {n: b.ordinary[n] for n in degs}}
    small = {"ordinary": {n: s.ordinary[n] for n in degs}}
    skipped = {}
    for mode in b.involutive:
        if b.involutive[mode] is None or s.involutive.get(mode) is None:
            skipped[mode] = (b.findings[mode], s.findings.get(mode))
            continue
        bar[mode] = {n: b.involutive[mode][n] for n in degs}
        small[mode] = {n: s.involutive[mode][n] for n in degs}
    return ModelComparison((lo, hi), bar, small, skipped)


def small_model_compare(a: AInftyStructure, M: Optional[AInftyBimodule] = None, L: int = 4,
                        modes=MODES) -> ModelComparison:
    """Compare both chain models on the intersection of their certified windows.

    Involutive variants whose involution fails to descend in either model
    are listed in ``skipped`` with their witnesses.
    """
    return _compare(hh(a, M, L, "bar", modes), hh(a, M, L, "small", modes))


# --- cochains ---------------------------------------------------------------

@dataclass
class HochschildCochains:
    """Cochain complex as component families; ``n`` is the cohomological degree."""

    algebra: AInftyStructure
    module: AInftyBimodule
    L: int
    model: str
    hom: HomComplex
    shift: int  # n = shift - (map degree)
    window: tuple
    src_letterwise: object = None

    def to_map_degree(self, n: int) -> int:
        return self.shift - n

    def star(self, family: dict, mode: str) -> dict:
        H = self.hom
        M = self.module
        if mode == "reversal":
            return H.star(family, "conjugate")
        if mode != "letterwise":
            raise ValueError(f"unknown involution mode {mode!r}; expected one of {MODES}")
        out: dict = {}
        for (w, y), c in family.items():
            for x, cx in self.src_letterwise(w).items():
                for yy, cy in M.star_letter(y).items():
                    add_term(out, (x, yy), c * cx * cy)
        return out

    def relations(self, mode: str) -> dict:
        rel: dict = {}
        one = self.algebra.field.one
        for k, d in self.hom.basis:
            v = {k: one}
            axpy(v, -1, self.star({k: one}, mode))
            if v:
                rel.setdefault(d, []).append(v)
        return rel

    def descent_witness(self, mode: str):
        cache = self.__dict__.setdefault("_findings", {})
        if mode not in cache:
            cache[mode] = self._descent_witness(mode)
        return cache[mode]

    def _descent_witness(self, mode: str):
        H = self.hom
        one = self.algebra.field.one
        for k, _ in H.basis:
            e = {k: one}
            if H.apply_d(self.star(e, mode)) != self.star(H.apply_d(e), mode):
                return k
        return None

    def dims(self, involutive: Optional[str] = None) -> dict:
        rel = None
        if involutive is not None:
            _involutive_allowed(self.algebra, involutive)
            w = self.descent_witness(involutive)
            if w is not None:
                raise StructuralError(f"the {involutive} involution does not commute with the "
                                      f"Hochschild codifferential of {self.algebra.name}", witness=w)
            rel = self.relations(involutive)
        c = self.hom.complex(rel)
        lo, hi = self.window
        maps = c.homology_dims([self.to_map_degree(n) for n in range(lo, hi + 1)])
        return {n: maps[self.to_map_degree(n)] for n in range(lo, hi + 1)}

    def cohomology(self, modes=MODES) -> HomologyReport:
        self.hom.complex().check_square_zero()
        inv, findings = {}, {}
        for mode in modes:
            if self.algebra.field.characteristic == 2:
                findings[mode], inv[mode] = CHAR_TWO, None
                continue
            w = self.descent_witness(mode)
            findings[mode] = w
            inv[mode] = None if w is not None else self.dims(mode)
        return HomologyReport(self.dims(), inv, findings, self.window, self.model, self.L)


def _letterwise_word_star(star_letter):
    def star(word):
        out: dict = {(): 1}
        for x in word:
            nxt: dict = {}
            for w, c in out.items():
                for y, cy in star_letter(x).items():
                    add_term(nxt, w + (y,), c * cy)
            out = nxt
        return out
    return star


def hochschild_cochains(a: AInftyStructure, M: Optional[AInftyBimodule] = None, L: int = 4,
                        model: str = "bar") -> HochschildCochains:
    M = M or diagonal_bimodule(a)
    one = a.field.one
    if model == "bar":
        al = tag(A_TAG, a.space.keys)
        words = list(words_upto(al, L))
        deg = {(A_TAG, k): v for k, v in a.sdeg.items()}
        comps = algebra_components(a)

        def d_src(w):
            return apply_coderivation(w, comps, -1, deg, None, one)

        def star_src(w):
            return word_involution(w, deg, M.star_letter)

        H = HomComplex(words, {w: word_degree(w, deg) for w in words}, d_src, M, L, star_src,
                       name=f"C*({a.name},{M.name})")
        shift = 1
        letterwise = _letterwise_word_star(M.star_letter)
    elif model == "small":
        D = diagonal_bimodule(a)
        words = D.bar_words(L)
        H = HomComplex(words, {w: word_degree(w, D.letter_degree) for w in words}, D.differential, M, L,
                       D.word_star, name=f"Hom({a.name},{M.name})")
        shift = 0
        letterwise = _letterwise_word_star(D.star_letter)
    else:
        raise ValueError(f"unknown model {model!r}")
    hc = HochschildCochains(a, M, L, model, H, shift, certify_window(a, M, L, "cochains", model), letterwise)
    hc.hom.complex().check_square_zero()
    return hc


build_cochain_complex = hochschild_cochains


def cohh(a: AInftyStructure, M: Optional[AInftyBimodule] = None, L: int = 4, model: str = "bar",
         modes=MODES) -> HomologyReport:
    """Ordinary and involutive Hochschild cohomology dimensions inside the certified window."""
    return hochschild_cochains(a, M, L, model).cohomology(modes)


def cochain_model_compare(a: AInftyStructure, M: Optional[AInftyBimodule] = None, L: int = 4,
                          modes=MODES) -> ModelComparison:
    """C(A, M) against Hom(A, M) over the diagonal bimodule."""
    return _compare(cohh(a, M, L, "bar", modes), cohh(a, M, L, "small", modes))


# --- classical oracle -------------------------------------------------------

def _dense_rank(rows: list, p: int = 0) -> int:
    if not rows or not rows[0]:
        return 0
    m = [[Fraction(x) if p == 0 else x % p for x in r] for r in rows]
    rank, ncols = 0, len(m[0])
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col] if p == 0 else pow(int(m[rank][col]), -1, p)
        m[rank] = [x * inv if p == 0 else (x * inv) % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                c = m[i][col]
                m[i] = [x - c * y if p == 0 else (x - c * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def _columns_to_rows(cols: list, nrows: int) -> list:
    return [[col[i] for col in cols] for i in range(nrows)]


def classical_oracle(basis: list, mult: dict, n_max: int, kind: str = "homology", p: int = 0,
                     star: Optional[dict] = None, involution: Optional[str] = None) -> dict:
    """HH of an ordinary associative algebra in degree 0 with coefficients in itself.

    Chains are A ⊗ A^{⊗n} with b = Σ (-1)^i d_i; cochains are Hom(A^{⊗n}, A)
    with the usual coboundary.  ``involution`` selects a quotient by the
    image of 1 - J: ``letterwise`` stars every tensor factor, ``reversal``
    sends a0⊗a1⊗…⊗an to (-1)^{n(n+1)/2} a0*⊗an*⊗…⊗a1* (cochains: the
    conjugate f ↦ * ∘ f ∘ J).  ``star`` maps basis names to basis names (a
    permutation).  Dense matrices throughout, no shared code with the
    sparse engine.
    """
    if involution is not None and p == 2:
        raise ValueError("involutive dimensions need a field of characteristic other than 2")
    star = star or {}

    def mul(a, b) -> dict:
        return mult.get((a, b), {})

    for a in basis:
        for b in basis:
            for c in basis:
                lhs: dict = {}
                for x, cx in mul(a, b).items():
                    for y, cy in mul(x, c).items():
                        lhs[y] = lhs.get(y, 0) + cx * cy
                rhs: dict = {}
                for x, cx in mul(b, c).items():
                    for y, cy in mul(a, x).items():
                        rhs[y] = rhs.get(y, 0) + cx * cy
                if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
                    raise ValueError(f"not associative at ({a}, {b}, {c})")

    def tensors(n):
        return list(product(basis, repeat=n))

    def st(x):
        return star.get(x, x)

    def J(t: tuple) -> tuple:
        """Image of a basis tensor and its sign."""
        if involution == "letterwise":
            return tuple(st(x) for x in t), 1
        n = len(t) - 1
        return (st(t[0]),) + tuple(st(x) for x in reversed(t[1:])), (-1) ** (n * (n + 1) // 2)

    def chain_columns(n):  # C_n -> C_{n-1}, C_n = A^{⊗(n+1)}
        src, tgt = tensors(n + 1), tensors(n)
        ti = {t: i for i, t in enumerate(tgt)}
        cols = []
        for t in src:
            col = [0] * len(tgt)
            for i in range(n):
                for c, cc in mul(t[i], t[i + 1]).items():
                    col[ti[t[:i] + (c,) + t[i + 2:]]] += (-1) ** i * cc
            for c, cc in mul(t[n], t[0]).items():
                col[ti[(c,) + t[1:n]]] += (-1) ** n * cc
            cols.append(col)
        return cols, len(tgt)

    def cochain_columns(n):  # C^n -> C^{n+1}; coordinates (input tensor, output)
        src = [(t, o) for t in tensors(n) for o in basis]
        tgt = [(t, o) for t in tensors(n + 1) for o in basis]
        ti = {t: i for i, t in enumerate(tgt)}
        cols = []
        for t0, o0 in src:
            col = [0] * len(tgt)
            for t in tensors(n + 1):
                if t[1:] == t0:
                    for c, cc in mul(t[0], o0).items():
                        col[ti[(t, c)]] += cc
                if t[:-1] == t0:
                    for c, cc in mul(o0, t[-1]).items():
                        col[ti[(t, c)]] += (-1) ** (n + 1) * cc
                for i in range(n):
                    for c, cc in mul(t[i], t[i + 1]).items():
                        if t[:i] + (c,) + t[i + 2:] == t0:
                            col[ti[(t, o0)]] += (-1) ** (i + 1) * cc
            cols.append(col)
        return cols, len(tgt)

    def relation_columns(n):
        if involution is None:
            return []
        if kind == "homology":
            keys = tensors(n + 1)
            ki = {k: i for i, k in enumerate(keys)}
            cols = []
            for t in keys:
                col = [0] * len(keys)
                col[ki[t]] += 1
                u, sgn = J(t)
                col[ki[u]] -= sgn
                cols.append(col)
            return cols
        keys = [(t, o) for t in tensors(n) for o in basis]
        ki = {k: i for i, k in enumerate(keys)}
        cols = []
        for t, o in keys:
            # (f ↦ * ∘ f ∘ J) on the elementary map t ↦ o
            col = [0] * len(keys)
            col[ki[(t, o)]] += 1
            if involution == "letterwise":
                col[ki[(tuple(st(x) for x in t), st(o))]] -= 1
            else:
                m = len(t)
                # J on inputs of a cochain reverses all n letters with sign (-1)^{n(n+1)/2}
                col[ki[(tuple(st(x) for x in reversed(t)), st(o))]] -= (-1) ** (m * (m + 1) // 2)
            cols.append(col)
        return cols

    def rank(cols, nrows):
        return _dense_rank(_columns_to_rows(cols, nrows), p) if cols else 0

    def qdim(n):
        size = len(basis) ** (n + 1)
        rel = relation_columns(n)
        return size - rank(rel, size)

    def induced_rank(diff, n_src, n_tgt):
        cols, nrows = diff
        rel = relation_columns(n_tgt)
        base = rank(rel, nrows)
        if rel:
            images = []
            for r in relation_columns(n_src):
                img = [0] * nrows
                for j, c in enumerate(r):
                    if c:
                        for i, x in enumerate(cols[j]):
                            if x:
                                img[i] += c * x
                images.append(img)
            if rank(rel + images, nrows) != base:
                raise ValueError(f"{involution} involution does not commute with the differential "
                                 f"(degree {n_src})")
        return rank(cols + rel, nrows) - base

    out = {}
    if kind == "homology":
        ranks = {n: induced_rank(chain_columns(n), n, n - 1) for n in range(1, n_max + 2)}
        for n in range(n_max + 1):
            out[n] = qdim(n) - ranks.get(n, 0) - ranks[n + 1]
    elif kind == "cohomology":
        ranks = {n: induced_rank(cochain_columns(n), n, n + 1) for n in range(0, n_max + 1)}
        for n in range(n_max + 1):
            size = len(basis) ** (n + 1)
            q = size - rank(relation_columns(n), size)
            out[n] = q - ranks[n] - ranks.get(n - 1, 0)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return out


def _plain_scalar(c):
    """Field element as an int or Fraction, which the dense oracle works with."""
    if isinstance(c, Mod):
        return c.v
    return Fraction(int(c.numerator), int(c.denominator))


def oracle_data(a: AInftyStructure) -> tuple:
    """(basis, mult, star) of a degree-0 strict algebra, for ``classical_oracle``."""
    if any(d != 0 for _, d in a.space.basis) or set(a.ops) - {2}:
        raise ValueError("the classical oracle needs an ordinary algebra in degree 0")
    basis = list(a.space.keys)
    mult = {k: {y: _plain_scalar(c) for y, c in v.items()} for k, v in a.ops[2].items()}
    star = {}
    for k in basis:
        img = a.space.star_basis(k)
        (y, c), = img.items()
        if c != 1:
            raise ValueError("the classical oracle needs a permutation involution")
        star[k] = y
    return basis, mult, star
