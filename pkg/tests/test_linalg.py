from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from sympy import GF
from sympy.polys.matrices import DomainMatrix
from hypothesis import strategies as st

from iainfty.field import QQ, FieldSpec, Mod
from iainfty.linalg import (ChainComplex, GradedMap, GradedSpace, SpaceMismatch, StructuralError,
                            check_involutive_map, compose, kernel_dim, nullspace, rank, rank_of, solve,
                            tensor_maps, tensor_space)

F5 = FieldSpec.prime(5)


def test_field_parse_and_label():
    assert FieldSpec.parse("q") == QQ
    assert FieldSpec.parse("f:7").characteristic == 7
    assert FieldSpec.parse("F_3").label == "f:3"
    with pytest.raises(ValueError):
        FieldSpec.parse("f:6")
    with pytest.raises(ValueError):
        FieldSpec.parse("reals")


def test_prime_field_arithmetic():
    a = F5(3)
    assert (a * a).v == 4
    assert (a + 2).v == 0
    assert F5(Fraction(1, 2)).v == 3
    with pytest.raises(ZeroDivisionError):
        F5(Fraction(1, 5))
    with pytest.raises(ValueError):
        Mod(1, 5) + Mod(1, 7)


def test_no_floats():
    with pytest.raises(TypeError):
        QQ(0.5)
    with pytest.raises(TypeError):
        F5(1.0)


def test_scalar_literals():
    assert QQ.parse_scalar("-3/7") == Fraction(-3, 7)
    assert F5.parse_scalar("2 mod 5").v == 2
    with pytest.raises(ValueError):
        F5.parse_scalar("2 mod 7")
    with pytest.raises(ValueError):
        QQ.parse_scalar("1.5")
    assert QQ.format(QQ(Fraction(-3, 7))) == "-3/7"


small = st.integers(min_value=-3, max_value=3)


@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_rank_matches_sympy(rows, cols, data):
    m = [[data.draw(small) for _ in range(cols)] for _ in range(rows)]
    vecs = [{i: m[i][j] for i in range(rows) if m[i][j]} for j in range(cols)]
    assert rank_of([{k: QQ(v) for k, v in c.items()} for c in vecs]) == sympy.Matrix(m).rank()


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_rank_mod_p_matches_sympy(rows, cols, data):
    m = [[data.draw(small) for _ in range(cols)] for _ in range(rows)]
    vecs = [{i: F5(m[i][j]) for i in range(rows) if m[i][j] % 5} for j in range(cols)]
    dm = DomainMatrix([[GF(5)(x) for x in row] for row in m], (rows, cols), GF(5))
    assert rank_of(vecs) == dm.rank()


def test_nullspace_and_solve():
    cols = [{0: QQ(1), 1: QQ(1)}, {0: QQ(2), 1: QQ(2)}, {1: QQ(1)}]
    ns = nullspace(cols, QQ.one)
    assert len(ns) == 1
    assert solve(cols, {0: QQ(3), 1: QQ(5)}, QQ.one) is not None
    assert solve(cols[:2], {1: QQ(1)}, QQ.one) is None


def _space(name, degs, inv=None):
    return GradedSpace([(f"{name}{i}", d) for i, d in enumerate(degs)], inv, QQ, name=name)


def test_graded_map_degree_enforced():
    V = _space("v", [0, 1])
    with pytest.raises(ValueError):
        GradedMap(V, V, 0, {"v0": {"v1": 1}})
    f = GradedMap(V, V, 1, {"v0": {"v1": 1}})
    assert rank(f) == 1 and kernel_dim(f) == 1


def test_compose_mismatch():
    V, W = _space("v", [0]), _space("w", [0])
    f = V.identity()
    with pytest.raises(SpaceMismatch):
        compose(W.identity(), f)


def test_tensor_sign_modes():
    V = _space("v", [1])
    W = _space("w", [0, 1])
    odd = GradedMap(W, W, 1, {"w0": {"w1": 1}})
    t = tensor_maps(V.identity(), odd)
    assert t.column(("v0", "w0")) == {("v0", "w1"): -1}
    p = tensor_maps(V.identity(), odd, "plain")
    assert p.column(("v0", "w0")) == {("v0", "w1"): 1}
    assert len(tensor_space(V, W)) == 2


def test_involution_checks():
    with pytest.raises(ValueError):
        GradedSpace([("a", 0), ("b", 1)], {"a": {"b": 1}, "b": {"a": 1}})
    V = GradedSpace([("a", 0), ("b", 0)], {"a": {"b": 1}, "b": {"a": 1}})
    swap = GradedMap(V, V, 0, {"a": {"b": 1}, "b": {"a": 1}})
    proj = GradedMap(V, V, 0, {"a": {"a": 1}})
    assert check_involutive_map(swap)
    assert not check_involutive_map(proj)


def _circle():
    # C1 = span{e}, C0 = span{p, q}, d e = q - p
    C1 = GradedSpace([("e", 1)], name="C1")
    C0 = GradedSpace([("p", 0), ("q", 0)], name="C0")
    d = GradedMap(C1, C0, -1, {"e": {"q": 1, "p": -1}})
    return ChainComplex({0: C0, 1: C1}, {1: d})


def test_homology_of_interval():
    assert _circle().homology_dims() == {0: 1, 1: 0}


def test_quotient_homology():
    c = _circle()
    c.relations = {0: [{"p": QQ(1), "q": QQ(-1)}]}
    assert c.homology_dims() == {0: 1, 1: 1}
    bad = _circle()
    bad.relations = {1: [{"e": QQ(1)}]}
    with pytest.raises(StructuralError):
        bad.homology_dims()


def test_square_zero_failure_reported():
    A = GradedSpace([("x", 2)], name="A")
    B = GradedSpace([("y", 1)], name="B")
    Cc = GradedSpace([("z", 0)], name="C")
    c = ChainComplex({0: Cc, 1: B, 2: A},
                     {2: GradedMap(A, B, -1, {"x": {"y": 1}}), 1: GradedMap(B, Cc, -1, {"y": {"z": 1}})})
    assert c.square_zero_failure() == (2, "x")
    with pytest.raises(StructuralError):
        c.homology_dims()
