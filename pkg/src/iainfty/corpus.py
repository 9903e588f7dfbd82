"""Small worked examples used by the tests, the acceptance suite and the CLI."""

from __future__ import annotations

from .ainfty import AInftyMorphism, AInftyStructure, from_dga
from .field import QQ, FieldSpec
from .linalg import GradedSpace


def ground_field(field: FieldSpec = QQ) -> AInftyStructure:
    """K = span{1} with m2(1,1) = 1."""
    sp = GradedSpace([("1", 0)], field=field, name="K")
    return from_dga(sp, {}, {("1", "1"): {"1": 1}}, name="K")


def dual_numbers(field: FieldSpec = QQ) -> AInftyStructure:
    """K[e]/(e^2) with the identity involution (commutative)."""
    sp = GradedSpace([("1", 0), ("e", 0)], field=field, name="dual")
    mult = {("1", "1"): {"1": 1}, ("1", "e"): {"e": 1}, ("e", "1"): {"e": 1}}
    return from_dga(sp, {}, mult, name="dual")


def cyclic_group(n: int, field: FieldSpec = QQ, inverse: bool = True) -> AInftyStructure:
    """K[C_n] on g0..g{n-1}; the involution is g ↦ g^{-1} unless ``inverse`` is False."""
    keys = [f"g{i}" for i in range(n)]
    inv = {f"g{i}": {f"g{(-i) % n}": 1} for i in range(n)} if inverse else None
    sp = GradedSpace([(k, 0) for k in keys], inv, field, name=f"C{n}")
    mult = {(f"g{i}", f"g{j}"): {f"g{(i + j) % n}": 1} for i in range(n) for j in range(n)}
    return from_dga(sp, {}, mult, name=f"C{n}")


def upper_triangular(field: FieldSpec = QQ, transpose_flip: bool = True) -> AInftyStructure:
    """Upper triangular 2x2 matrices; e11 ↔ e22 is an anti-automorphism."""
    inv = {"e11": {"e22": 1}, "e22": {"e11": 1}} if transpose_flip else None
    sp = GradedSpace([("e11", 0), ("e12", 0), ("e22", 0)], inv, field, name="UT2")
    mult = {("e11", "e11"): {"e11": 1}, ("e11", "e12"): {"e12": 1},
            ("e12", "e22"): {"e12": 1}, ("e22", "e22"): {"e22": 1}}
    return from_dga(sp, {}, mult, name="UT2")


def acyclic_dga(field: FieldSpec = QQ, involution=None) -> AInftyStructure:
    """span{1, v, u}, |u| = 1, d(u) = v, only unit products; homology is K."""
    sp = GradedSpace([("1", 0), ("v", 0), ("u", 1)], involution, field, name="dga")
    mult = {("1", k): {k: 1} for k in ("1", "v", "u")}
    mult.update({(k, "1"): {k: 1} for k in ("v", "u")})
    return from_dga(sp, {"u": {"v": 1}}, mult, name="dga")


def m3_example(field: FieldSpec = QQ, involution="default") -> AInftyStructure:
    """span{1, x, y}, |y| = 1, strict unit, m3(x,x,x) = y and y* = -y."""
    if involution == "default":
        involution = {"y": {"y": -1}}
    sp = GradedSpace([("1", 0), ("x", 0), ("y", 1)], involution, field, name="m3")
    ops = {2: {("1", k): {k: 1} for k in ("1", "x", "y")}, 3: {("x", "x", "x"): {"y": 1}}}
    ops[2].update({(k, "1"): {k: 1} for k in ("x", "y")})
    return AInftyStructure(sp, ops, 4, "m3")


def broken_associativity(field: FieldSpec = QQ) -> AInftyStructure:
    """span{1, a, b} in degree 0 with ab = b but a(ab) != (aa)b: m2 alone, not associative."""
    sp = GradedSpace([("1", 0), ("a", 0), ("b", 0)], field=field, name="broken")
    ops = {2: {("1", k): {k: 1} for k in ("1", "a", "b")}}
    ops[2].update({(k, "1"): {k: 1} for k in ("a", "b")})
    ops[2][("a", "b")] = {"b": 1}
    return AInftyStructure(sp, ops, 2, "broken")


def unit_inclusion(target: AInftyStructure) -> AInftyMorphism:
    """K -> A, 1 ↦ 1."""
    return AInftyMorphism.linear(ground_field(target.field), target, {"1": {"1": 1}})


def all_fixtures(field: FieldSpec = QQ) -> dict:
    return {
        "K": ground_field(field),
        "dual": dual_numbers(field),
        "C2": cyclic_group(2, field),
        "C4": cyclic_group(4, field),
        "UT2": upper_triangular(field),
        "dga": acyclic_dga(field),
        "m3": m3_example(field),
    }


def homotopy_pair(field: FieldSpec = QQ):
    """P = diagonal(dual numbers), Q = P ⊕ Cone(Id_P), the inclusion f and the projection g."""
    from .bimodule import cone_of_identity, diagonal_bimodule, direct_sum, family_from_linear

    P = diagonal_bimodule(dual_numbers(field))
    C = cone_of_identity(P, name="cone")
    ren = {k: f"c.{k}" for k in C.space.keys}
    C2 = _renamed(C, ren)
    Q = direct_sum([P, C2], name="Q")
    f = family_from_linear(P, Q, {k: {k: 1} for k in P.space.keys})
    g = family_from_linear(Q, P, {k: {k: 1} for k in P.space.keys})
    return P, Q, f, g


def _renamed(M, ren):
    from .bimodule import AInftyBimodule

    inv = {ren[k]: {ren[kk]: c for kk, c in M.space.star_basis(k).items()} for k in M.space.keys}
    space = GradedSpace([(ren[k], d) for k, d in M.space.basis], inv, M.field, M.space.name)
    comps = {}
    for w, img in M.components.items():
        key = tuple((t, ren[k]) if t == "m" else (t, k) for t, k in w)
        comps[key] = {("m", ren[y[1]]): c for y, c in img.items()}
    return AInftyBimodule(M.algebra, space, comps, M.name)
