"""Plain-text algebra documents: parsing, canonical emission, construction.

A document is line based; ``#`` starts a comment.  Example::

    algebra dual
    field q
    max-arity 4
    basis 1:0 e:0
    m 2 : 1 1 -> 1 = 1
    m 2 : 1 e -> e = 1
    m 2 : e 1 -> e = 1

Records
    ``star x -> y = c``         one entry of the involution (missing rows are fixed)
    ``m n : a1 .. an -> y = c`` one entry of m_n (unsuspended, degree n-2)

Blocks, closed by ``end``
    ``bimodule NAME``  containing either ``diagonal`` or ``basis``/``star``
    records and ``b p q : u1 .. up | x | v1 .. vq -> y = c`` entries of
    m^M_{p,q} (unsuspended, degree p+q-1).
    ``morphism NAME``  containing ``f n : a1 .. an -> y = c`` entries of an
    endomorphism of the algebra.

Coefficients are exact: ``3``, ``-3/7`` or ``2 mod 5``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dfield
from typing import Optional

from .ainfty import AInftyMorphism, AInftyStructure, sigma_exponent
from .icoalgebra import parity
from .bimodule import AInftyBimodule, diagonal_bimodule
from .field import FieldSpec
from .linalg import GradedSpace


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


Entry = tuple  # (args tuple, output, coeff)


@dataclass
class BimoduleBlock:
    name: str
    diagonal: bool = False
    basis: list = dfield(default_factory=list)
    star: list = dfield(default_factory=list)  # (x, y, c)
    entries: list = dfield(default_factory=list)  # (u, x, v, y, c)


@dataclass
class MorphismBlock:
    name: str
    entries: list = dfield(default_factory=list)  # (args, y, c)


@dataclass
class AlgebraDocument:
    name: str = "A"
    field: FieldSpec = dfield(default_factory=FieldSpec.rationals)
    max_arity: int = 4
    basis: list = dfield(default_factory=list)  # (name, degree)
    star: list = dfield(default_factory=list)  # (x, y, c)
    ops: list = dfield(default_factory=list)  # (args, y, c)
    bimodules: list = dfield(default_factory=list)
    morphisms: list = dfield(default_factory=list)

    def _space(self, basis, star, name) -> GradedSpace:
        inv: dict = {}
        for x, y, c in star:
            inv.setdefault(x, {})
            inv[x][y] = inv[x].get(y, 0) + c
        return GradedSpace(basis, inv or None, self.field, name)

    def algebra(self) -> AInftyStructure:
        ops: dict = {}
        for args, y, c in self.ops:
            table = ops.setdefault(len(args), {})
            img = table.setdefault(tuple(args), {})
            img[y] = img.get(y, 0) + c
        return AInftyStructure(self._space(self.basis, self.star, self.name), ops, self.max_arity, self.name)

    def bimodule(self, name: Optional[str] = None, algebra: Optional[AInftyStructure] = None) -> AInftyBimodule:
        a = algebra or self.algebra()
        if name is None or name == "diagonal":
            return diagonal_bimodule(a)
        blk = next((b for b in self.bimodules if b.name == name), None)
        if blk is None:
            raise KeyError(f"no bimodule named {name!r}")
        if blk.diagonal:
            M = diagonal_bimodule(a)
            M.name = blk.name
            return M
        ops: dict = {}
        for u, x, v, y, c in blk.entries:
            table = ops.setdefault((len(u), len(v)), {})
            img = table.setdefault((tuple(u), x, tuple(v)), {})
            img[y] = img.get(y, 0) + c
        space = self._space(blk.basis, blk.star, blk.name)
        return AInftyBimodule.from_unsuspended(a, space, ops, blk.name)

    def morphism(self, name: str, algebra: Optional[AInftyStructure] = None) -> AInftyMorphism:
        a = algebra or self.algebra()
        blk = next((m for m in self.morphisms if m.name == name), None)
        if blk is None:
            raise KeyError(f"no morphism named {name!r}")
        comps: dict = {}
        for args, y, c in blk.entries:
            img = comps.setdefault(tuple(args), {})
            img[y] = img.get(y, 0) + c
        # entries are unsuspended f_n of degree n-1, moved to SA like the m_n
        out = {}
        for w, img in comps.items():
            s = parity(sigma_exponent([a.space.degree[x] for x in w]))
            out[w] = {y: s * c for y, c in img.items()}
        return AInftyMorphism(a, a, out)


_HEADER = re.compile(r"^(algebra|field|max-arity|basis)\b\s*(.*)$")
_RECORD = re.compile(r"^(m|f)\s+(\d+)\s*:\s*(.*?)\s*->\s*(\S+)\s*=\s*(.+)$")
_STAR = re.compile(r"^star\s+(\S+)\s*->\s*(\S+)\s*=\s*(.+)$")
_BREC = re.compile(r"^b\s+(\d+)\s+(\d+)\s*:\s*(.*?)\|\s*(\S+)\s*\|(.*?)->\s*(\S+)\s*=\s*(.+)$")


def _strip(line: str) -> str:
    i = line.find("#")
    return (line if i < 0 else line[:i]).strip()


def parse_document(text: str) -> AlgebraDocument:
    """Parse a document; errors carry the line and column of the offending token."""
    doc = AlgebraDocument()
    block = None
    raw_lines = text.splitlines()

    def col_of(lineno, token):
        i = raw_lines[lineno - 1].find(token)
        return i + 1 if i >= 0 else 1

    def scalar(s, lineno):
        try:
            return doc.field.parse_scalar(s)
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(str(e), lineno, col_of(lineno, s.strip())) from None

    def parse_basis(rest, lineno):
        out = []
        for tok in rest.split():
            name, _, deg = tok.partition(":")
            if not name or not re.fullmatch(r"-?\d+", deg):
                raise ParseError(f"basis entries look like name:degree, got {tok!r}", lineno, col_of(lineno, tok))
            out.append((name, int(deg)))
        return out

    for lineno, raw in enumerate(raw_lines, 1):
        line = _strip(raw)
        if not line:
            continue
        if block is not None:
            if line == "end":
                block = None
                continue
            if isinstance(block, BimoduleBlock):
                if line == "diagonal":
                    block.diagonal = True
                elif line.startswith("basis"):
                    block.basis.extend(parse_basis(line[5:], lineno))
                elif (m := _STAR.match(line)):
                    block.star.append((m.group(1), m.group(2), scalar(m.group(3), lineno), lineno))
                elif (m := _BREC.match(line)):
                    p, q = int(m.group(1)), int(m.group(2))
                    u, v = m.group(3).split(), m.group(5).split()
                    if len(u) != p or len(v) != q:
                        raise ParseError(f"bidegree ({p}, {q}) does not match {len(u)} | {len(v)} arguments",
                                         lineno, 1)
                    block.entries.append((tuple(u), m.group(4), tuple(v), m.group(6),
                                          scalar(m.group(7), lineno), lineno))
                else:
                    raise ParseError(f"unrecognised bimodule record {line!r}", lineno)
            else:
                m = _RECORD.match(line)
                if not m or m.group(1) != "f":
                    raise ParseError(f"unrecognised morphism record {line!r}", lineno)
                args = tuple(m.group(3).split())
                if len(args) != int(m.group(2)):
                    raise ParseError(f"arity {m.group(2)} but {len(args)} arguments", lineno, 1)
                block.entries.append((args, m.group(4), scalar(m.group(5), lineno), lineno))
            continue
        if (m := _HEADER.match(line)):
            key, rest = m.group(1), m.group(2).strip()
            if key == "algebra":
                doc.name = rest or "A"
            elif key == "field":
                if doc.ops or doc.star:
                    raise ParseError("field must precede coefficients", lineno)
                try:
                    doc.field = FieldSpec.parse(rest)
                except ValueError as e:
                    raise ParseError(str(e), lineno, col_of(lineno, rest)) from None
            elif key == "max-arity":
                if not re.fullmatch(r"\d+", rest) or int(rest) < 1:
                    raise ParseError(f"max-arity must be a positive integer, got {rest!r}", lineno)
                doc.max_arity = int(rest)
            else:
                doc.basis.extend(parse_basis(rest, lineno))
        elif (m := _STAR.match(line)):
            doc.star.append((m.group(1), m.group(2), scalar(m.group(3), lineno), lineno))
        elif (m := _RECORD.match(line)) and m.group(1) == "m":
            args = tuple(m.group(3).split())
            if len(args) != int(m.group(2)):
                raise ParseError(f"arity {m.group(2)} but {len(args)} arguments", lineno, 1)
            doc.ops.append((args, m.group(4), scalar(m.group(5), lineno), lineno))
        elif line.startswith("bimodule"):
            block = BimoduleBlock(line[8:].strip() or "M")
            doc.bimodules.append(block)
        elif line.startswith("morphism"):
            block = MorphismBlock(line[8:].strip() or "f")
            doc.morphisms.append(block)
        else:
            raise ParseError(f"unrecognised line {line!r}", lineno)
    if block is not None:
        raise ParseError(f"block {block.name!r} is not closed by 'end'", len(raw_lines))
    _resolve(doc, raw_lines)
    return doc


def _resolve(doc: AlgebraDocument, raw_lines: list) -> None:
    """Name resolution, arity caps and the degree rules; strips line numbers."""
    deg = dict(doc.basis)
    if len(deg) != len(doc.basis):
        raise ParseError("duplicate basis name", 1)

    def need(name, names, lineno, what="basis"):
        if name not in names:
            i = raw_lines[lineno - 1].find(name)
            raise ParseError(f"unknown {what} name {name!r}", lineno, i + 1 if i >= 0 else 1)

    def star_check(star, names):
        for x, y, c, ln in star:
            need(x, names, ln)
            need(y, names, ln)
            if names[x] != names[y]:
                raise ParseError(f"involution must preserve degree: {x!r} -> {y!r}", ln)

    star_check(doc.star, deg)
    doc.star = [s[:3] for s in doc.star]
    ops = []
    for args, y, c, ln in doc.ops:
        for a in args + (y,):
            need(a, deg, ln)
        n = len(args)
        if n > doc.max_arity:
            raise ParseError(f"arity {n} exceeds max-arity {doc.max_arity}", ln)
        if n == 0:
            raise ParseError("operations need arity at least 1", ln)
        want = sum(deg[a] for a in args) + n - 2
        if deg[y] != want:
            raise ParseError(f"m_{n}{args} -> {y!r} has degree {deg[y] - sum(deg[a] for a in args)}, "
                             f"but m_n has degree n-2 = {n - 2}", ln, raw_lines[ln - 1].find("->") + 1)
        ops.append((args, y, c))
    doc.ops = ops
    for blk in doc.bimodules:
        if blk.diagonal:
            if blk.basis or blk.entries or blk.star:
                raise ParseError(f"bimodule {blk.name!r}: 'diagonal' excludes other records", 1)
            continue
        mdeg = dict(blk.basis)
        star_check(blk.star, mdeg)
        blk.star = [s[:3] for s in blk.star]
        entries = []
        for u, x, v, y, c, ln in blk.entries:
            for a in u + v:
                need(a, deg, ln)
            need(x, mdeg, ln, "module basis")
            need(y, mdeg, ln, "module basis")
            p, q = len(u), len(v)
            want = sum(deg[a] for a in u + v) + mdeg[x] + p + q - 1
            if mdeg[y] != want:
                raise ParseError(f"m_({p},{q}) -> {y!r} must have degree p+q-1 = {p + q - 1}", ln)
            entries.append((u, x, v, y, c))
        blk.entries = entries
    for blk in doc.morphisms:
        entries = []
        for args, y, c, ln in blk.entries:
            for a in args + (y,):
                need(a, deg, ln)
            n = len(args)
            if deg[y] != sum(deg[a] for a in args) + n - 1:
                raise ParseError(f"f_{n} must have degree n-1 = {n - 1}", ln)
            entries.append((args, y, c))
        blk.entries = entries


def emit_document(doc: AlgebraDocument) -> str:
    """Canonical form: fixed record order, merged duplicates, zero entries dropped."""
    F = doc.field
    order = {k: i for i, (k, _) in enumerate(doc.basis)}

    def lit(c):
        s = F.format(c)
        return f"{s} mod {F.characteristic}" if F.characteristic else s

    def merged(records, key):
        acc: dict = {}
        for r in records:
            k = r[:-1]
            acc[k] = acc.get(k, 0) + r[-1]
        return [(*k, c) for k, c in sorted(acc.items(), key=lambda kv: key(kv[0])) if c != 0]

    def basis_line(basis):
        return "basis " + " ".join(f"{k}:{d}" for k, d in basis)

    out = [f"algebra {doc.name}", f"field {F.label}", f"max-arity {doc.max_arity}", basis_line(doc.basis)]
    for x, y, c in merged(doc.star, lambda k: (order[k[0]], order[k[1]])):
        out.append(f"star {x} -> {y} = {lit(c)}")
    for args, y, c in merged(doc.ops, lambda k: (len(k[0]), [order[a] for a in k[0]], order[k[1]])):
        out.append(f"m {len(args)} : {' '.join(args)} -> {y} = {lit(c)}")
    for blk in doc.bimodules:
        out.append(f"bimodule {blk.name}")
        if blk.diagonal:
            out.append("  diagonal")
        else:
            morder = {k: i for i, (k, _) in enumerate(blk.basis)}
            out.append("  " + basis_line(blk.basis))
            for x, y, c in merged(blk.star, lambda k: (morder[k[0]], morder[k[1]])):
                out.append(f"  star {x} -> {y} = {lit(c)}")
            for u, x, v, y, c in merged(blk.entries, lambda k: (len(k[0]) + len(k[2]), len(k[0]),
                                                                [order[a] for a in k[0]], morder[k[1]],
                                                                [order[a] for a in k[2]], morder[k[3]])):
                us = (" ".join(u) + " ") if u else ""
                vs = (" " + " ".join(v)) if v else ""
                out.append(f"  b {len(u)} {len(v)} : {us}| {x} |{vs} -> {y} = {lit(c)}")
        out.append("end")
    for blk in doc.morphisms:
        out.append(f"morphism {blk.name}")
        for args, y, c in merged(blk.entries, lambda k: (len(k[0]), [order[a] for a in k[0]], order[k[1]])):
            out.append(f"  f {len(args)} : {' '.join(args)} -> {y} = {lit(c)}")
        out.append("end")
    return "\n".join(out) + "\n"


def document_from_structure(a: AInftyStructure) -> AlgebraDocument:
    """Inverse of ``AlgebraDocument.algebra`` on strict data (ops stored unsuspended)."""
    doc = AlgebraDocument(a.name, a.field, a.max_arity, list(a.space.basis))
    for k in a.space.keys:
        img = a.space.star_basis(k)
        if img != {k: a.field.one}:
            doc.star.extend((k, y, c) for y, c in img.items())
    for n in sorted(a.ops):
        for args, img in a.ops[n].items():
            doc.ops.extend((tuple(args), y, c) for y, c in img.items())
    return doc


def bimodule_block(M: AInftyBimodule) -> BimoduleBlock:
    """Unsuspended record form of a bimodule (σ-transport is its own inverse)."""
    blk = BimoduleBlock(M.name, basis=list(M.space.basis))
    for k in M.space.keys:
        img = M.space.star_basis(k)
        if img != {k: M.field.one}:
            blk.star.extend((k, y, c) for y, c in img.items())
    adeg, mdeg = M.algebra.space.degree, M.space.degree
    for w, img in M.components.items():
        i = next(j for j, x in enumerate(w) if x[0] == "m")
        u = tuple(x[1] for x in w[:i])
        v = tuple(x[1] for x in w[i + 1:])
        degs = [adeg[x] for x in u] + [mdeg[w[i][1]]] + [adeg[x] for x in v]
        s = parity(sigma_exponent(degs))
        blk.entries.extend((u, w[i][1], v, y[1], s * c) for y, c in img.items())
    return blk
